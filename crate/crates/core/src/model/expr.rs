use std::collections::BTreeMap;
use std::fmt;

use super::{FluentId, ModelError};

/// `Σ coeff·fluent + constant` in normal form: no zero coefficients, keys unique.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearExpr {
    terms: BTreeMap<FluentId, f64>,
    pub constant: f64,
}

impl LinearExpr {
    pub fn constant(c: f64) -> Self {
        LinearExpr { terms: BTreeMap::new(), constant: c }
    }

    pub fn fluent(f: FluentId) -> Self {
        let mut e = LinearExpr::default();
        e.add_term(f, 1.0);
        e
    }

    pub fn add_term(&mut self, f: FluentId, c: f64) {
        let slot = self.terms.entry(f).or_insert(0.0);
        *slot += c;
        if *slot == 0.0 {
            self.terms.remove(&f);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (FluentId, f64)> + '_ {
        self.terms.iter().map(|(&f, &c)| (f, c))
    }

    pub fn coeff(&self, f: FluentId) -> f64 {
        self.terms.get(&f).copied().unwrap_or(0.0)
    }

    pub fn fluents(&self) -> impl Iterator<Item = FluentId> + '_ {
        self.terms.keys().copied()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, k: f64) -> Self {
        if k == 0.0 {
            return LinearExpr::default();
        }
        LinearExpr { terms: self.terms.iter().map(|(&f, &c)| (f, c * k)).collect(), constant: self.constant * k }
    }

    pub fn plus(&self, other: &LinearExpr) -> Self {
        let mut out = self.clone();
        for (f, c) in other.terms() {
            out.add_term(f, c);
        }
        out.constant += other.constant;
        out
    }

    /// `Σ coeff·value + constant`; fails on a fluent with no value.
    pub fn evaluate(&self, values: &[Option<f64>]) -> Result<f64, ModelError> {
        let mut acc = self.constant;
        for (f, c) in self.terms() {
            let v = values.get(f).copied().flatten().ok_or(ModelError::UnboundFluent(f))?;
            acc += c * v;
        }
        Ok(acc)
    }

    /// Interval image of the expression over per-fluent bounds.
    pub fn interval(&self, bounds: &[(f64, f64)]) -> (f64, f64) {
        let (mut lo, mut hi) = (self.constant, self.constant);
        for (f, c) in self.terms() {
            let (l, u) = bounds[f];
            if c > 0.0 {
                lo += c * l;
                hi += c * u;
            } else {
                lo += c * u;
                hi += c * l;
            }
        }
        (lo, hi)
    }
}

impl fmt::Display for LinearExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in self.terms() {
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*f{v}")?;
            first = false;
        }
        if first || self.constant != 0.0 {
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "{}", self.constant)?;
        }
        Ok(())
    }
}

/// Grounded symbolic expression, kept for rvalues that are not linear.
#[derive(Debug, Clone, PartialEq)]
pub enum GroundExpr {
    Num(f64),
    Fluent(FluentId),
    Duration,
    Add(Vec<GroundExpr>),
    Mul(Vec<GroundExpr>),
    Sub(Box<GroundExpr>, Box<GroundExpr>),
    Div(Box<GroundExpr>, Box<GroundExpr>),
}

impl GroundExpr {
    pub fn evaluate(&self, values: &[Option<f64>], duration: Option<f64>) -> Result<f64, ModelError> {
        Ok(match self {
            GroundExpr::Num(v) => *v,
            GroundExpr::Fluent(f) => values.get(*f).copied().flatten().ok_or(ModelError::UnboundFluent(*f))?,
            GroundExpr::Duration => duration.ok_or(ModelError::UnknownDuration)?,
            GroundExpr::Add(xs) => xs.iter().map(|x| x.evaluate(values, duration)).sum::<Result<f64, _>>()?,
            GroundExpr::Mul(xs) => {
                let mut acc = 1.0;
                for x in xs {
                    acc *= x.evaluate(values, duration)?;
                }
                acc
            }
            GroundExpr::Sub(a, b) => a.evaluate(values, duration)? - b.evaluate(values, duration)?,
            GroundExpr::Div(a, b) => {
                let d = b.evaluate(values, duration)?;
                if d == 0.0 {
                    return Err(ModelError::DivisionByZero);
                }
                a.evaluate(values, duration)? / d
            }
        })
    }

    pub fn fluents(&self, out: &mut Vec<FluentId>) {
        match self {
            GroundExpr::Num(_) | GroundExpr::Duration => {}
            GroundExpr::Fluent(f) => out.push(*f),
            GroundExpr::Add(xs) | GroundExpr::Mul(xs) => xs.iter().for_each(|x| x.fluents(out)),
            GroundExpr::Sub(a, b) | GroundExpr::Div(a, b) => {
                a.fluents(out);
                b.fluents(out);
            }
        }
    }

    pub fn mentions_duration(&self) -> bool {
        match self {
            GroundExpr::Duration => true,
            GroundExpr::Num(_) | GroundExpr::Fluent(_) => false,
            GroundExpr::Add(xs) | GroundExpr::Mul(xs) => xs.iter().any(GroundExpr::mentions_duration),
            GroundExpr::Sub(a, b) | GroundExpr::Div(a, b) => a.mentions_duration() || b.mentions_duration(),
        }
    }

    /// Linear form `(expr, duration coefficient)` when one exists.
    pub fn linearize(&self) -> Option<(LinearExpr, f64)> {
        // fluent id usize::MAX stands in for ?duration while linearizing
        const DUR: FluentId = usize::MAX;
        fn go(e: &GroundExpr) -> Option<LinearExpr> {
            Some(match e {
                GroundExpr::Num(v) => LinearExpr::constant(*v),
                GroundExpr::Fluent(f) => LinearExpr::fluent(*f),
                GroundExpr::Duration => LinearExpr::fluent(DUR),
                GroundExpr::Add(xs) => {
                    let mut acc = LinearExpr::default();
                    for x in xs {
                        acc = acc.plus(&go(x)?);
                    }
                    acc
                }
                GroundExpr::Sub(a, b) => go(a)?.plus(&go(b)?.scaled(-1.0)),
                GroundExpr::Mul(xs) => {
                    let mut acc = LinearExpr::constant(1.0);
                    for x in xs {
                        let y = go(x)?;
                        if acc.is_constant() {
                            acc = y.scaled(acc.constant);
                        } else if y.is_constant() {
                            acc = acc.scaled(y.constant);
                        } else {
                            return None;
                        }
                    }
                    acc
                }
                GroundExpr::Div(a, b) => {
                    let d = go(b)?;
                    if !d.is_constant() || d.constant == 0.0 {
                        return None;
                    }
                    go(a)?.scaled(1.0 / d.constant)
                }
            })
        }
        let mut e = go(self)?;
        let dur = e.coeff(DUR);
        e.add_term(DUR, -dur);
        Some((e, dur))
    }
}
