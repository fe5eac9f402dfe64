//! Incremental simple temporal network over plan happenings.
//!
//! Node 0 is the time origin `z`. `dist(i, j)` is the tightest known upper
//! bound on `t_j - t_i`; `f64::INFINITY` means unconstrained.

use std::fmt::Write;

/// Negative-cycle slack; absorbs float noise from LP write-back.
const CYCLE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StnError {
    #[error("temporal network is inconsistent")]
    Poisoned,
}

/// `lb <= t_j - t_i <= ub`, as added by the caller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constraint {
    pub i: usize,
    pub j: usize,
    pub lb: f64,
    pub ub: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stn {
    n: usize,
    dist: Vec<f64>,
    constraints: Vec<Constraint>,
    poisoned: bool,
}

impl Default for Stn {
    fn default() -> Self {
        Stn::new()
    }
}

impl Stn {
    pub fn new() -> Self {
        Stn { n: 1, dist: vec![0.0], constraints: Vec::new(), poisoned: false }
    }

    /// Number of nodes including the origin.
    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn is_consistent(&self) -> bool {
        !self.poisoned
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    /// Adds a node constrained only by `t_new >= z`.
    pub fn add_happening(&mut self) -> usize {
        let old = self.n;
        let n = old + 1;
        let mut dist = vec![f64::INFINITY; n * n];
        for i in 0..old {
            dist[i * n..i * n + old].copy_from_slice(&self.dist[i * old..(i + 1) * old]);
        }
        dist[old * n + old] = 0.0;
        self.n = n;
        self.dist = dist;
        // the origin precedes everything, so every shortest path into z extends to the new node
        if !self.poisoned {
            self.add_edge(old, 0, 0.0);
        }
        self.constraints.push(Constraint { i: 0, j: old, lb: 0.0, ub: f64::INFINITY });
        old
    }

    /// Adds `lb <= t_j - t_i <= ub`. Once inconsistent the network stays poisoned.
    pub fn add_constraint(&mut self, i: usize, j: usize, lb: f64, ub: f64) -> Verdict {
        assert!(i < self.n && j < self.n, "stn node out of range");
        self.constraints.push(Constraint { i, j, lb, ub });
        if self.poisoned {
            return Verdict::Inconsistent;
        }
        if ub.is_finite() && !self.add_edge(i, j, ub) {
            return Verdict::Inconsistent;
        }
        if lb.is_finite() && !self.add_edge(j, i, -lb) {
            return Verdict::Inconsistent;
        }
        Verdict::Consistent
    }

    /// Write-back of externally derived bounds; same semantics as `add_constraint`,
    /// but redundant bounds are not recorded.
    pub fn tighten(&mut self, i: usize, j: usize, lb: f64, ub: f64) -> Verdict {
        if self.poisoned {
            return Verdict::Inconsistent;
        }
        let (cur_lb, cur_ub) = (-self.dist(j, i), self.dist(i, j));
        let lb = if lb > cur_lb + CYCLE_TOLERANCE { lb } else { f64::NEG_INFINITY };
        let ub = if ub < cur_ub - CYCLE_TOLERANCE { ub } else { f64::INFINITY };
        if lb == f64::NEG_INFINITY && ub == f64::INFINITY {
            return Verdict::Consistent;
        }
        self.add_constraint(i, j, lb, ub)
    }

    /// Implied `[lb, ub]` on `t_j - t_i`.
    pub fn bounds(&self, i: usize, j: usize) -> Result<(f64, f64), StnError> {
        if self.poisoned {
            return Err(StnError::Poisoned);
        }
        Ok((-self.dist(j, i), self.dist(i, j)))
    }

    /// Edge `t_v - t_u <= w`, propagated through the new edge only.
    fn add_edge(&mut self, u: usize, v: usize, w: f64) -> bool {
        let n = self.n;
        if self.dist[v * n + u] + w < -CYCLE_TOLERANCE {
            self.poisoned = true;
            return false;
        }
        if w >= self.dist[u * n + v] {
            return true;
        }
        let into_u: Vec<f64> = (0..n).map(|a| self.dist[a * n + u]).collect();
        let from_v: Vec<f64> = self.dist[v * n..(v + 1) * n].to_vec();
        for a in 0..n {
            let au = into_u[a];
            if au == f64::INFINITY {
                continue;
            }
            let base = au + w;
            let row = &mut self.dist[a * n..(a + 1) * n];
            for b in 0..n {
                let cand = base + from_v[b];
                if cand < row[b] {
                    row[b] = cand;
                }
            }
        }
        for a in 0..n {
            let d = &mut self.dist[a * n + a];
            if *d < -CYCLE_TOLERANCE {
                self.poisoned = true;
                return false;
            }
            *d = 0.0;
        }
        true
    }

    /// Distance graph in DOT format.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph stn {\n  rankdir=LR;\n");
        for i in 0..self.n {
            let label = if i == 0 { "z".to_string() } else { format!("t{i}") };
            let _ = writeln!(s, "  n{i} [label=\"{label}\"];");
        }
        for c in &self.constraints {
            if c.ub.is_finite() {
                let _ = writeln!(s, "  n{} -> n{} [label=\"{}\"];", c.i, c.j, c.ub);
            }
            if c.lb.is_finite() {
                let _ = writeln!(s, "  n{} -> n{} [label=\"{}\"];", c.j, c.i, -c.lb);
            }
        }
        if self.poisoned {
            s.push_str("  label=\"inconsistent\";\n");
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// From-scratch all-pairs shortest paths over the recorded constraints.
    fn floyd_warshall(n: usize, cs: &[Constraint]) -> (Vec<f64>, bool) {
        let mut d = vec![f64::INFINITY; n * n];
        for i in 0..n {
            d[i * n + i] = 0.0;
        }
        for c in cs {
            if c.ub.is_finite() {
                d[c.i * n + c.j] = d[c.i * n + c.j].min(c.ub);
            }
            if c.lb.is_finite() {
                d[c.j * n + c.i] = d[c.j * n + c.i].min(-c.lb);
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = d[i * n + k] + d[k * n + j];
                    if via < d[i * n + j] {
                        d[i * n + j] = via;
                    }
                }
            }
        }
        let neg = (0..n).any(|i| d[i * n + i] < -CYCLE_TOLERANCE);
        (d, neg)
    }

    #[test]
    fn fresh_ids() {
        let mut s = Stn::new();
        assert_eq!(s.add_happening(), 1);
        assert_eq!(s.add_happening(), 2);
        assert_eq!(s.dist(1, 2), f64::INFINITY);
        assert_eq!(s.node_count(), 3);
    }

    #[test]
    fn chain_implies_sum() {
        let mut s = Stn::new();
        s.add_happening();
        s.add_happening();
        assert_eq!(s.add_constraint(0, 1, 0.0, 10.0), Verdict::Consistent);
        assert_eq!(s.add_constraint(1, 2, 0.0, 10.0), Verdict::Consistent);
        assert_eq!(s.bounds(0, 2).unwrap(), (0.0, 20.0));
    }

    #[test]
    fn conflicting_bounds() {
        let mut s = Stn::new();
        s.add_happening();
        assert_eq!(s.add_constraint(0, 1, 5.0, f64::INFINITY), Verdict::Consistent);
        assert_eq!(s.add_constraint(0, 1, f64::NEG_INFINITY, 3.0), Verdict::Inconsistent);
        assert_eq!(s.bounds(0, 1), Err(StnError::Poisoned));
    }

    #[test]
    fn tighten_implied_is_noop() {
        let mut s = Stn::new();
        s.add_happening();
        s.add_constraint(0, 1, 1.0, 4.0);
        let before = s.clone();
        assert_eq!(s.tighten(0, 1, 0.0, 5.0), Verdict::Consistent);
        assert_eq!(s, before);
    }

    #[test]
    fn unconstrained_pair_respects_origin() {
        let mut s = Stn::new();
        s.add_happening();
        s.add_happening();
        assert_eq!(s.bounds(0, 1).unwrap(), (0.0, f64::INFINITY));
        assert_eq!(s.bounds(1, 2).unwrap(), (f64::NEG_INFINITY, f64::INFINITY));
    }

    fn arb_ops() -> impl Strategy<Value = (usize, Vec<(usize, usize, i32, i32)>)> {
        (2usize..=12).prop_flat_map(|n| {
            let op = (0..n, 0..n, -20i32..20, 0i32..30);
            (Just(n), proptest::collection::vec(op, 0..25))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn matches_floyd_warshall((n, ops) in arb_ops()) {
            let mut s = Stn::new();
            for _ in 1..n {
                s.add_happening();
            }
            let mut verdict = Verdict::Consistent;
            for (i, j, lb, width) in ops {
                if i == j {
                    continue;
                }
                verdict = s.add_constraint(i, j, lb as f64, (lb + width) as f64);
                if verdict == Verdict::Inconsistent {
                    break;
                }
            }
            let (d, neg) = floyd_warshall(n, s.constraints());
            prop_assert_eq!(verdict == Verdict::Inconsistent, neg);
            if !neg {
                for i in 0..n {
                    for j in 0..n {
                        prop_assert_eq!(s.dist(i, j), d[i * n + j]);
                    }
                }
            }
        }

        #[test]
        fn replay_is_identical((n, ops) in arb_ops()) {
            let mut a = Stn::new();
            for _ in 1..n {
                a.add_happening();
            }
            let mut b = a.clone();
            for &(i, j, lb, w) in &ops {
                a.add_constraint(i, j, lb as f64, (lb + w) as f64);
                b.add_constraint(i, j, lb as f64, (lb + w) as f64);
            }
            prop_assert_eq!(a, b);
        }
    }
}
