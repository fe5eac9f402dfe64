use std::fmt;

pub type VarId = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub lb: f64,
    pub ub: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowCmp {
    Le,
    Eq,
    Ge,
}

impl RowCmp {
    pub fn symbol(self) -> &'static str {
        match self {
            RowCmp::Le => "<=",
            RowCmp::Eq => "=",
            RowCmp::Ge => ">=",
        }
    }
}

/// `Σ coeff·var cmp rhs`
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub name: String,
    pub terms: Vec<(VarId, f64)>,
    pub cmp: RowCmp,
    pub rhs: f64,
}

impl Row {
    pub fn lhs(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, c)| c * values[v]).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Objective {
    pub sense: Sense,
    pub terms: Vec<(VarId, f64)>,
    pub constant: f64,
}

impl Objective {
    pub fn minimize(terms: Vec<(VarId, f64)>) -> Self {
        Objective { sense: Sense::Minimize, terms, constant: 0.0 }
    }

    pub fn maximize(terms: Vec<(VarId, f64)>) -> Self {
        Objective { sense: Sense::Maximize, terms, constant: 0.0 }
    }

    pub fn value(&self, values: &[f64]) -> f64 {
        self.constant + self.terms.iter().map(|&(v, c)| c * values[v]).sum::<f64>()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LpModel {
    pub vars: Vec<Variable>,
    pub rows: Vec<Row>,
    pub objective: Option<Objective>,
}

impl LpModel {
    pub fn new() -> Self {
        LpModel::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, lb: f64, ub: f64) -> VarId {
        self.vars.push(Variable { name: name.into(), lb, ub });
        self.vars.len() - 1
    }

    /// Adds a row; duplicate variables are merged and zero coefficients dropped.
    pub fn add_row(&mut self, name: impl Into<String>, terms: &[(VarId, f64)], cmp: RowCmp, rhs: f64) {
        let mut merged: Vec<(VarId, f64)> = Vec::with_capacity(terms.len());
        for &(v, c) in terms {
            assert!(v < self.vars.len(), "row references undeclared variable {v}");
            match merged.iter_mut().find(|(w, _)| *w == v) {
                Some(slot) => slot.1 += c,
                None => merged.push((v, c)),
            }
        }
        merged.retain(|&(_, c)| c != 0.0);
        self.rows.push(Row { name: name.into(), terms: merged, cmp, rhs });
    }

    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    /// Largest violation of any row or bound at `values`.
    pub fn max_violation(&self, values: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for (v, x) in self.vars.iter().zip(values) {
            worst = worst.max(v.lb - x).max(x - v.ub);
        }
        for r in &self.rows {
            let l = r.lhs(values);
            let viol = match r.cmp {
                RowCmp::Le => l - r.rhs,
                RowCmp::Ge => r.rhs - l,
                RowCmp::Eq => (l - r.rhs).abs(),
            };
            worst = worst.max(viol);
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub status: Status,
    /// Per-variable values; empty unless `Optimal`.
    pub values: Vec<f64>,
    pub objective: f64,
}

impl Solution {
    pub fn is_feasible(&self) -> bool {
        self.status != Status::Infeasible
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Optimal => "optimal",
            Status::Infeasible => "infeasible",
            Status::Unbounded => "unbounded",
        })
    }
}
