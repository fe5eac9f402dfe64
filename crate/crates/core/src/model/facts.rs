use super::FactId;

/// Dense bitset over fact ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactSet {
    words: Vec<u64>,
}

impl FactSet {
    pub fn contains(&self, f: FactId) -> bool {
        self.words.get(f / 64).is_some_and(|w| w & (1 << (f % 64)) != 0)
    }

    pub fn insert(&mut self, f: FactId) {
        let w = f / 64;
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << (f % 64);
    }

    pub fn remove(&mut self, f: FactId) {
        if let Some(w) = self.words.get_mut(f / 64) {
            *w &= !(1 << (f % 64));
        }
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = FactId> + '_ {
        self.words
            .iter()
            .enumerate()
            .flat_map(|(i, &w)| (0..64).filter(move |b| w & (1 << b) != 0).map(move |b| i * 64 + b))
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

impl FromIterator<FactId> for FactSet {
    fn from_iter<I: IntoIterator<Item = FactId>>(iter: I) -> Self {
        let mut s = FactSet::default();
        for f in iter {
            s.insert(f);
        }
        s
    }
}
