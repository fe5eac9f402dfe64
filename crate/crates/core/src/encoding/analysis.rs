use super::{Affine, PlanEncoding};
use crate::lp::{LpError, LpSolver, Objective, Sense, Status};
use crate::model::FluentId;

/// Implied `lb <= t_j - t_i <= ub` found by the LP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tightening {
    pub i: usize,
    pub j: usize,
    pub lb: f64,
    pub ub: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Consistency {
    Consistent(Vec<Tightening>),
    Inconsistent,
}

/// Outcome of one LP run over an encoding.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Analysis {
    pub consistent: bool,
    pub tightenings: Vec<Tightening>,
    /// `(fluent, lb, ub)` after the last happening.
    pub bounds: Vec<(FluentId, f64, f64)>,
    /// Objective solves issued after the feasibility phase.
    pub objective_solves: usize,
}

fn objective(sense: Sense, e: &Affine) -> Objective {
    Objective { sense, terms: e.terms.clone(), constant: e.constant }
}

fn value(s: &crate::lp::Solution, sense: Sense) -> f64 {
    match (s.status, sense) {
        (Status::Unbounded, Sense::Minimize) => f64::NEG_INFINITY,
        (Status::Unbounded, Sense::Maximize) => f64::INFINITY,
        _ => s.objective,
    }
}

/// Feasibility, then min and max of `t_j - t_i` for each pair and of the
/// final value of each fluent, sharing one phase 1.
pub fn analyze(
    enc: &PlanEncoding,
    solver: &dyn LpSolver,
    pairs: &[(usize, usize)],
    fluents: &[FluentId],
) -> Result<Analysis, LpError> {
    let mut objs = Vec::new();
    for &(i, j) in pairs {
        let d = enc.time(j).minus(&enc.time(i));
        objs.push(objective(Sense::Minimize, &d));
        objs.push(objective(Sense::Maximize, &d));
    }
    let mut targets = Vec::new();
    let mut fixed = Vec::new();
    for &v in fluents {
        match enc.final_value(v) {
            Some(e) if !e.is_constant() => {
                objs.push(objective(Sense::Minimize, &e));
                objs.push(objective(Sense::Maximize, &e));
                targets.push(v);
            }
            Some(e) => fixed.push((v, e.constant, e.constant)),
            None => {}
        }
    }
    let sols = if objs.is_empty() {
        vec![solver.solve(&enc.model)?]
    } else {
        solver.solve_many(&enc.model, &objs)?
    };
    if sols[0].status == Status::Infeasible {
        return Ok(Analysis { consistent: false, objective_solves: objs.len(), ..Analysis::default() });
    }
    let mut a = Analysis { consistent: true, objective_solves: objs.len(), ..Analysis::default() };
    let mut it = sols.chunks(2);
    for &(i, j) in pairs {
        let s = it.next().unwrap();
        a.tightenings.push(Tightening { i, j, lb: value(&s[0], Sense::Minimize), ub: value(&s[1], Sense::Maximize) });
    }
    for v in targets {
        let s = it.next().unwrap();
        a.bounds.push((v, value(&s[0], Sense::Minimize), value(&s[1], Sense::Maximize)));
    }
    a.bounds.extend(fixed);
    a.bounds.sort_by_key(|b| b.0);
    Ok(a)
}

/// Feasibility plus write-back candidates for the given pairs.
pub fn check_consistency(enc: &PlanEncoding, solver: &dyn LpSolver, pairs: &[(usize, usize)]) -> Result<Consistency, LpError> {
    let a = analyze(enc, solver, pairs, &[])?;
    Ok(if a.consistent { Consistency::Consistent(a.tightenings) } else { Consistency::Inconsistent })
}

/// Bounds on the final value of each fluent; `None` when the encoding is infeasible.
pub fn extract_bounds(
    enc: &PlanEncoding,
    solver: &dyn LpSolver,
    fluents: &[FluentId],
) -> Result<Option<Vec<(FluentId, f64, f64)>>, LpError> {
    let a = analyze(enc, solver, &[], fluents)?;
    Ok(a.consistent.then_some(a.bounds))
}
