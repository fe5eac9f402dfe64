//! Elimination of free variables through equality rows.

use std::collections::BTreeMap;

use super::model::{LpModel, Objective, RowCmp, Variable};

/// Coefficients below this are dropped after substitution.
const DROP: f64 = 1e-12;

/// `x = (rhs - Σ terms) / coeff`, in original variable ids.
#[derive(Debug, Clone)]
struct Definition {
    var: usize,
    coeff: f64,
    terms: Vec<(usize, f64)>,
    rhs: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct Reduced {
    pub model: LpModel,
    pub objectives: Vec<Objective>,
    /// Original id of each reduced variable.
    kept: Vec<usize>,
    defs: Vec<Definition>,
    n_orig: usize,
    /// An eliminated row reduced to `0 cmp rhs` and failed.
    pub infeasible: bool,
}

impl Reduced {
    /// Values of all original variables from a point of the reduced model.
    pub fn expand(&self, reduced: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.n_orig];
        for (i, &v) in self.kept.iter().enumerate() {
            x[v] = reduced[i];
        }
        for d in self.defs.iter().rev() {
            let s: f64 = d.terms.iter().map(|&(v, c)| c * x[v]).sum();
            x[d.var] = (d.rhs - s) / d.coeff;
        }
        x
    }
}

type Sparse = BTreeMap<usize, f64>;

fn axpy(dst: &mut Sparse, src: &Sparse, k: f64, skip: usize) {
    for (&v, &c) in src {
        if v == skip {
            continue;
        }
        let e = dst.entry(v).or_insert(0.0);
        *e += k * c;
        if e.abs() < DROP {
            dst.remove(&v);
        }
    }
}

pub(crate) fn reduce(model: &LpModel, objectives: &[Objective]) -> Reduced {
    let n = model.vars.len();
    let free = |v: usize| model.vars[v].lb == f64::NEG_INFINITY && model.vars[v].ub == f64::INFINITY;
    let mut rows: Vec<Option<(Sparse, RowCmp, f64)>> =
        model.rows.iter().map(|r| Some((r.terms.iter().copied().collect(), r.cmp, r.rhs))).collect();
    let mut objs: Vec<(Sparse, f64)> =
        objectives.iter().map(|o| (o.terms.iter().copied().collect(), o.constant)).collect();
    let mut occurs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (r, row) in rows.iter().enumerate() {
        for &v in row.as_ref().unwrap().0.keys() {
            occurs[v].push(r);
        }
    }
    let mut eliminated = vec![false; n];
    let mut defs = Vec::new();
    for r in 0..rows.len() {
        let Some((terms, RowCmp::Eq, rhs)) = rows[r].clone() else { continue };
        let pick = terms
            .iter()
            .filter(|(&v, &c)| free(v) && c.abs() > 1e-9)
            .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap().then(b.0.cmp(a.0)))
            .map(|(&v, &c)| (v, c));
        let Some((x, a)) = pick else { continue };
        rows[r] = None;
        let targets = std::mem::take(&mut occurs[x]);
        for t in targets {
            let Some((tt, _, trhs)) = rows[t].as_mut() else { continue };
            let Some(b) = tt.remove(&x) else { continue };
            let k = -b / a;
            let before: Vec<usize> = tt.keys().copied().collect();
            axpy(tt, &terms, k, x);
            *trhs += k * rhs;
            for &v in tt.keys() {
                if before.binary_search(&v).is_err() {
                    occurs[v].push(t);
                }
            }
        }
        for (ot, oc) in objs.iter_mut() {
            if let Some(b) = ot.remove(&x) {
                let k = -b / a;
                axpy(ot, &terms, k, x);
                // objective gains b·x = b/a·rhs - ...
                *oc += b / a * rhs;
            }
        }
        eliminated[x] = true;
        defs.push(Definition {
            var: x,
            coeff: a,
            terms: terms.iter().filter(|(&v, _)| v != x).map(|(&v, &c)| (v, c)).collect(),
            rhs,
        });
    }
    let kept: Vec<usize> = (0..n).filter(|&v| !eliminated[v]).collect();
    let mut index = vec![usize::MAX; n];
    for (i, &v) in kept.iter().enumerate() {
        index[v] = i;
    }
    let mut out = LpModel::new();
    for &v in &kept {
        let Variable { name, lb, ub } = &model.vars[v];
        out.add_var(name.clone(), *lb, *ub);
    }
    let mut infeasible = false;
    for (r, row) in rows.into_iter().enumerate() {
        let Some((terms, cmp, rhs)) = row else { continue };
        if terms.is_empty() {
            let ok = match cmp {
                RowCmp::Le => rhs >= -1e-7,
                RowCmp::Ge => rhs <= 1e-7,
                RowCmp::Eq => rhs.abs() <= 1e-7,
            };
            infeasible |= !ok;
            continue;
        }
        let t: Vec<(usize, f64)> = terms.iter().map(|(&v, &c)| (index[v], c)).collect();
        out.add_row(model.rows[r].name.clone(), &t, cmp, rhs);
    }
    let objectives = objectives
        .iter()
        .zip(objs)
        .map(|(o, (terms, constant))| Objective {
            sense: o.sense,
            terms: terms.iter().map(|(&v, &c)| (index[v], c)).collect(),
            constant,
        })
        .collect();
    Reduced { model: out, objectives, kept, defs, n_orig: n, infeasible }
}
