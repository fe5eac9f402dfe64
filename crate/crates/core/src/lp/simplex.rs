//! Dense two-phase tableau simplex.

use super::model::{LpModel, Objective, RowCmp, Sense, Solution, Status};
use super::{presolve, LpError, LpSolver};

/// Pivot element magnitude below which a column entry counts as zero.
const PIVOT_EPS: f64 = 1e-9;
/// Consecutive degenerate pivots before switching to Bland's rule.
const DEGENERATE_LIMIT: usize = 50;

#[derive(Debug, Clone, Copy)]
pub struct Simplex {
    pub tolerance: f64,
    pub max_pivots: usize,
    /// Eliminate free variables through equality rows before pivoting.
    pub presolve: bool,
}

impl Default for Simplex {
    fn default() -> Self {
        Simplex { tolerance: 1e-6, max_pivots: 1_000_000, presolve: true }
    }
}

/// How an original variable maps onto nonnegative columns.
#[derive(Debug, Clone, Copy)]
enum Map {
    /// x = lb + c
    Shift(usize, f64),
    /// x = ub - c
    Flip(usize, f64),
    /// x = p - n
    Split(usize, usize),
}

struct Tableau {
    m: usize,
    cols: usize,
    /// m rows of `cols + 1` entries; the last is the right-hand side.
    a: Vec<f64>,
    basis: Vec<usize>,
    /// reduced costs, last entry is minus the objective value
    cost: Vec<f64>,
    artificial_from: usize,
    pivots: usize,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.a[r * (self.cols + 1) + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.a[r * (self.cols + 1) + self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.cols + 1;
        let p = self.a[r * w + c];
        {
            let row = &mut self.a[r * w..(r + 1) * w];
            for x in row.iter_mut() {
                *x /= p;
            }
            row[c] = 1.0;
        }
        let prow: Vec<f64> = self.a[r * w..(r + 1) * w].to_vec();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.a[i * w + c];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.a[i * w..(i + 1) * w];
            for (x, &y) in row.iter_mut().zip(&prow) {
                if y != 0.0 {
                    *x -= f * y;
                    if x.abs() < 1e-12 {
                        *x = 0.0;
                    }
                }
            }
            row[c] = 0.0;
        }
        let f = self.cost[c];
        if f != 0.0 {
            for (x, &y) in self.cost.iter_mut().zip(&prow) {
                if y != 0.0 {
                    *x -= f * y;
                }
            }
            self.cost[c] = 0.0;
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Installs a minimization cost vector over columns and prices out the basis.
    fn set_cost(&mut self, c: &[f64]) {
        let w = self.cols + 1;
        self.cost = c.to_vec();
        self.cost.push(0.0);
        for r in 0..self.m {
            let cb = c[self.basis[r]];
            if cb != 0.0 {
                for j in 0..w {
                    self.cost[j] -= cb * self.a[r * w + j];
                }
            }
        }
    }

    /// Runs primal simplex on the current cost row.
    fn optimize(&mut self, tol: f64, max_pivots: usize, allow_artificial: bool) -> Result<bool, LpError> {
        let limit = if allow_artificial { self.cols } else { self.artificial_from };
        let mut degenerate = 0usize;
        loop {
            if self.pivots >= max_pivots {
                return Err(LpError::NumericalFailure { pivots: self.pivots });
            }
            let bland = degenerate >= DEGENERATE_LIMIT;
            let mut enter = None;
            let mut best = -tol;
            for j in 0..limit {
                let d = self.cost[j];
                if d < best {
                    enter = Some(j);
                    if bland {
                        break;
                    }
                    best = d;
                }
            }
            let Some(c) = enter else { return Ok(true) };
            let mut leave: Option<usize> = None;
            let mut best_ratio = f64::INFINITY;
            for r in 0..self.m {
                let a = self.at(r, c);
                if a > PIVOT_EPS {
                    let ratio = self.rhs(r).max(0.0) / a;
                    let better = match leave {
                        None => true,
                        Some(l) => {
                            if ratio < best_ratio - 1e-12 {
                                true
                            } else if ratio <= best_ratio + 1e-12 {
                                if bland {
                                    self.basis[r] < self.basis[l]
                                } else {
                                    a > self.at(l, c)
                                }
                            } else {
                                false
                            }
                        }
                    };
                    if better {
                        leave = Some(r);
                        best_ratio = ratio;
                    }
                }
            }
            let Some(r) = leave else { return Ok(false) };
            if best_ratio <= 1e-12 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(r, c);
        }
    }
}

/// Standard-form problem plus the state needed to map back.
struct Prepared {
    tab: Tableau,
    maps: Vec<Map>,
    n_orig: usize,
}

impl Simplex {
    /// Builds the tableau and runs phase 1. `None` when infeasible.
    fn phase1(&self, model: &LpModel) -> Result<Option<Prepared>, LpError> {
        let mut maps = Vec::with_capacity(model.vars.len());
        let mut ncols = 0usize;
        // (column coefficients, cmp, rhs) in terms of structural columns
        let mut rows: Vec<(Vec<(usize, f64)>, RowCmp, f64)> = Vec::new();
        for v in &model.vars {
            if v.lb.is_finite() {
                maps.push(Map::Shift(ncols, v.lb));
                if v.ub.is_finite() {
                    rows.push((vec![(ncols, 1.0)], RowCmp::Le, v.ub - v.lb));
                }
                ncols += 1;
            } else if v.ub.is_finite() {
                maps.push(Map::Flip(ncols, v.ub));
                ncols += 1;
            } else {
                maps.push(Map::Split(ncols, ncols + 1));
                ncols += 2;
            }
        }
        for row in &model.rows {
            let mut terms = Vec::with_capacity(row.terms.len());
            let mut rhs = row.rhs;
            for &(v, c) in &row.terms {
                match maps[v] {
                    Map::Shift(col, lb) => {
                        terms.push((col, c));
                        rhs -= c * lb;
                    }
                    Map::Flip(col, ub) => {
                        terms.push((col, -c));
                        rhs -= c * ub;
                    }
                    Map::Split(p, n) => {
                        terms.push((p, c));
                        terms.push((n, -c));
                    }
                }
            }
            rows.push((terms, row.cmp, rhs));
        }
        // normalize to rhs >= 0
        for (terms, cmp, rhs) in rows.iter_mut() {
            if *rhs < 0.0 {
                *rhs = -*rhs;
                for t in terms.iter_mut() {
                    t.1 = -t.1;
                }
                *cmp = match *cmp {
                    RowCmp::Le => RowCmp::Ge,
                    RowCmp::Ge => RowCmp::Le,
                    RowCmp::Eq => RowCmp::Eq,
                };
            }
        }
        let m = rows.len();
        let n_slack = rows.iter().filter(|r| r.1 != RowCmp::Eq).count();
        let n_art = rows.iter().filter(|r| r.1 != RowCmp::Le).count();
        let cols = ncols + n_slack + n_art;
        let w = cols + 1;
        let mut a = vec![0.0; m * w];
        let mut basis = vec![0; m];
        let mut slack = ncols;
        let artificial_from = ncols + n_slack;
        let mut art = artificial_from;
        for (r, (terms, cmp, rhs)) in rows.iter().enumerate() {
            for &(c, v) in terms {
                a[r * w + c] += v;
            }
            a[r * w + cols] = *rhs;
            match cmp {
                RowCmp::Le => {
                    a[r * w + slack] = 1.0;
                    basis[r] = slack;
                    slack += 1;
                }
                RowCmp::Ge => {
                    a[r * w + slack] = -1.0;
                    slack += 1;
                    a[r * w + art] = 1.0;
                    basis[r] = art;
                    art += 1;
                }
                RowCmp::Eq => {
                    a[r * w + art] = 1.0;
                    basis[r] = art;
                    art += 1;
                }
            }
        }
        let mut tab = Tableau { m, cols, a, basis, cost: vec![0.0; w], artificial_from, pivots: 0 };
        if n_art > 0 {
            let mut c = vec![0.0; cols];
            for x in c.iter_mut().skip(artificial_from) {
                *x = 1.0;
            }
            tab.set_cost(&c);
            tab.optimize(self.tolerance * 1e-3, self.max_pivots, true)?;
            let infeas: f64 = (0..m).filter(|&r| tab.basis[r] >= artificial_from).map(|r| tab.rhs(r)).sum();
            if infeas > self.tolerance {
                return Ok(None);
            }
            // drive remaining (zero-valued) artificials out where possible
            for r in 0..m {
                if tab.basis[r] >= artificial_from {
                    if let Some(c) = (0..artificial_from).find(|&c| tab.at(r, c).abs() > 1e-7) {
                        tab.pivot(r, c);
                    }
                }
            }
        }
        Ok(Some(Prepared { tab, maps, n_orig: model.vars.len() }))
    }

    fn phase2(&self, p: &mut Prepared, model: &LpModel, obj: Option<&Objective>) -> Result<Solution, LpError> {
        let cols = p.tab.cols;
        let mut c = vec![0.0; cols];
        let sign = match obj.map(|o| o.sense) {
            Some(Sense::Maximize) => -1.0,
            _ => 1.0,
        };
        if let Some(o) = obj {
            for &(v, k) in &o.terms {
                match p.maps[v] {
                    Map::Shift(col, _) => c[col] += sign * k,
                    Map::Flip(col, _) => c[col] -= sign * k,
                    Map::Split(a, b) => {
                        c[a] += sign * k;
                        c[b] -= sign * k;
                    }
                }
            }
        }
        p.tab.set_cost(&c);
        let bounded = p.tab.optimize(self.tolerance * 1e-3, self.max_pivots, false)?;
        if !bounded {
            return Ok(Solution { status: Status::Unbounded, values: vec![], objective: sign * f64::NEG_INFINITY });
        }
        let mut colval = vec![0.0; cols];
        for r in 0..p.tab.m {
            colval[p.tab.basis[r]] = p.tab.rhs(r);
        }
        let values: Vec<f64> = (0..p.n_orig)
            .map(|v| match p.maps[v] {
                Map::Shift(col, lb) => lb + colval[col],
                Map::Flip(col, ub) => ub - colval[col],
                Map::Split(a, b) => colval[a] - colval[b],
            })
            .collect();
        let objective = obj.map(|o| o.value(&values)).unwrap_or(0.0);
        debug_assert!(model.max_violation(&values) < 1e-4, "simplex returned a violating point");
        Ok(Solution { status: Status::Optimal, values, objective })
    }

    fn infeasible() -> Solution {
        Solution { status: Status::Infeasible, values: vec![], objective: 0.0 }
    }
}

impl Simplex {
    fn run(&self, model: &LpModel, objectives: &[Option<Objective>]) -> Result<Vec<Solution>, LpError> {
        let single = |p: &mut Prepared, m: &LpModel, o: Option<&Objective>| self.phase2(p, m, o);
        if !self.presolve {
            return match self.phase1(model)? {
                None => Ok(objectives.iter().map(|_| Simplex::infeasible()).collect()),
                Some(mut p) => objectives.iter().map(|o| single(&mut p, model, o.as_ref())).collect(),
            };
        }
        let given: Vec<Objective> = objectives.iter().flatten().cloned().collect();
        let red = presolve::reduce(model, &given);
        if red.infeasible {
            return Ok(objectives.iter().map(|_| Simplex::infeasible()).collect());
        }
        let Some(mut p) = self.phase1(&red.model)? else {
            return Ok(objectives.iter().map(|_| Simplex::infeasible()).collect());
        };
        let mut reduced_objs = red.objectives.iter();
        let mut out = Vec::with_capacity(objectives.len());
        for o in objectives {
            let ro = o.as_ref().map(|_| reduced_objs.next().unwrap());
            let mut s = self.phase2(&mut p, &red.model, ro)?;
            if s.status == Status::Optimal {
                s.values = red.expand(&s.values);
                s.objective = o.as_ref().map_or(0.0, |o| o.value(&s.values));
            }
            out.push(s);
        }
        Ok(out)
    }
}

impl LpSolver for Simplex {
    fn solve(&self, model: &LpModel) -> Result<Solution, LpError> {
        Ok(self.run(model, std::slice::from_ref(&model.objective))?.pop().unwrap())
    }

    /// Phase 1 once; each objective warm-starts from the previous optimal basis.
    fn solve_many(&self, model: &LpModel, objectives: &[Objective]) -> Result<Vec<Solution>, LpError> {
        let objs: Vec<Option<Objective>> = objectives.iter().cloned().map(Some).collect();
        self.run(model, &objs)
    }
}
