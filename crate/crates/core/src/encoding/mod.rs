//! LP encodings of a plan prefix and schedule-dependency tracking.

mod analysis;
mod full;
mod optimized;
mod timeline;
mod tracker;

use std::rc::Rc;

pub use analysis::{analyze, check_consistency, extract_bounds, Analysis, Consistency, Tightening};
pub use full::encode_full;
pub use optimized::encode_optimized;
pub use timeline::Timeline;
pub use tracker::{DependencyTracker, TrackError};

use crate::lp::{LpModel, RowCmp, VarId};
use crate::model::{
    AssignOp, Comparison, DiscreteEffect, FactSet, FluentId, GroundedProblem, NumericCondition, Rvalue, SnapRef,
    NUMERIC_TOLERANCE,
};
use crate::stn::Stn;

/// Durations within this width count as fixed.
pub const FIXED_DURATION_WIDTH: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EncodeError {
    #[error("rate of {0} depends on a schedule-dependent fluent")]
    NonconstantRate(FluentId),
    #[error("fluent {0} has no value")]
    UnboundFluent(FluentId),
    #[error("nonlinear effect over schedule-dependent values on fluent {0}")]
    Nonlinear(FluentId),
    #[error("division by zero")]
    DivisionByZero,
    #[error("duration depends on schedule-dependent fluent {0}")]
    ScheduleDependentDuration(FluentId),
    #[error("durative action {0} is not running")]
    NotRunning(usize),
    #[error(transparent)]
    Model(#[from] crate::model::ModelError),
}

/// One applied snap or instant action, with what the encoders need about it.
#[derive(Debug, Clone, PartialEq)]
pub struct Happening {
    pub snap: SnapRef,
    /// For end snaps, the happening number of the matching start.
    pub start: Option<usize>,
    /// Duration bounds of the owning durative action, fixed at its start.
    pub duration: (f64, f64),
    /// Literal fluent values after the happening; `None` when schedule-dependent or undefined.
    pub post: Rc<[Option<f64>]>,
    /// Schedule-dependent fluents after the happening.
    pub dependent: FactSet,
    /// Nonzero cumulative rates in the context that follows.
    pub rates: Vec<(FluentId, f64)>,
    /// Running durative actions after the happening: (action, start happening number).
    pub running: Vec<(usize, usize)>,
}

impl Happening {
    pub fn rate(&self, v: FluentId) -> f64 {
        self.rates.iter().find(|r| r.0 == v).map_or(0.0, |r| r.1)
    }

    pub fn fixed_duration(&self) -> bool {
        self.duration.1 - self.duration.0 <= FIXED_DURATION_WIDTH
    }
}

/// A plan prefix: happenings `1..=n` (STN nodes of the same number) and the network.
#[derive(Clone, Copy)]
pub struct Prefix<'a> {
    pub problem: &'a GroundedProblem,
    pub happenings: &'a [Rc<Happening>],
    pub stn: &'a Stn,
}

impl<'a> Prefix<'a> {
    pub fn n(&self) -> usize {
        self.happenings.len()
    }

    pub fn at(&self, h: usize) -> &'a Happening {
        &self.happenings[h - 1]
    }

    /// Literal values in force just before happening `h` (`h = n + 1` gives the final state).
    pub fn pre_literal(&self, h: usize) -> &'a [Option<f64>] {
        if h == 1 {
            &self.problem.init_values
        } else {
            &self.happenings[h - 2].post
        }
    }

    pub fn dependent_before(&self, h: usize, v: FluentId) -> bool {
        h > 1 && self.happenings[h - 2].dependent.contains(v)
    }

    /// Rate of `v` over the context that ends at happening `h`.
    pub fn rate_before(&self, h: usize, v: FluentId) -> f64 {
        if h == 1 {
            0.0
        } else {
            self.happenings[h - 2].rate(v)
        }
    }

    pub fn running_before(&self, h: usize) -> &'a [(usize, usize)] {
        if h == 1 {
            &[]
        } else {
            &self.happenings[h - 2].running
        }
    }

    /// Fluents schedule-dependent at some point of the prefix.
    pub fn ever_dependent(&self) -> Vec<FluentId> {
        let mut all = FactSet::default();
        for h in self.happenings {
            for v in h.dependent.iter() {
                all.insert(v);
            }
        }
        all.iter().collect()
    }

    pub fn effects(&self, h: usize) -> &'a [DiscreteEffect] {
        self.problem.snap(self.at(h).snap).effects
    }
}

/// `Σ coeff·var + constant` over LP variables.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Affine {
    pub terms: Vec<(VarId, f64)>,
    pub constant: f64,
}

impl Affine {
    pub fn constant(c: f64) -> Self {
        Affine { terms: vec![], constant: c }
    }

    pub fn var(v: VarId) -> Self {
        Affine { terms: vec![(v, 1.0)], constant: 0.0 }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_scaled(&mut self, other: &Affine, k: f64) {
        if k == 0.0 {
            return;
        }
        for &(v, c) in &other.terms {
            match self.terms.iter_mut().find(|t| t.0 == v) {
                Some(t) => t.1 += k * c,
                None => self.terms.push((v, k * c)),
            }
        }
        self.terms.retain(|t| t.1 != 0.0);
        self.constant += k * other.constant;
    }

    pub fn scaled(&self, k: f64) -> Affine {
        let mut a = Affine::default();
        a.add_scaled(self, k);
        a
    }

    pub fn minus(&self, other: &Affine) -> Affine {
        let mut a = self.clone();
        a.add_scaled(other, -1.0);
        a
    }

    pub fn value(&self, values: &[f64]) -> f64 {
        self.constant + self.terms.iter().map(|&(v, c)| c * values[v]).sum::<f64>()
    }
}

/// An encoded prefix.
#[derive(Debug, Clone)]
pub struct PlanEncoding {
    pub model: LpModel,
    /// `t_h` for `h = 1..=n` at index `h - 1`.
    pub time_vars: Vec<VarId>,
    /// Value of each encoded fluent after the last happening.
    pub final_values: Vec<(FluentId, Affine)>,
    /// Literal values after the last happening, for fluents not encoded.
    pub final_literal: Rc<[Option<f64>]>,
    /// Number of fluents ever schedule-dependent in the prefix.
    pub dependent_count: usize,
}

impl PlanEncoding {
    /// `t_h` as an affine expression; `t_0 = 0`.
    pub fn time(&self, h: usize) -> Affine {
        if h == 0 {
            Affine::constant(0.0)
        } else {
            Affine::var(self.time_vars[h - 1])
        }
    }

    /// Value of fluent `v` after the last happening.
    pub fn final_value(&self, v: FluentId) -> Option<Affine> {
        match self.final_values.iter().find(|f| f.0 == v) {
            Some(f) => Some(f.1.clone()),
            None => self.final_literal[v].map(Affine::constant),
        }
    }

    /// Adds rows requiring `cond` after the last happening.
    pub fn add_goal_rows(&mut self, cond: &crate::model::Condition) -> Result<(), EncodeError> {
        for c in &cond.numeric {
            let mut e = Affine::constant(0.0);
            for (f, k) in c.expr.terms() {
                let v = self.final_value(f).ok_or(EncodeError::UnboundFluent(f))?;
                e.add_scaled(&v, k);
            }
            emit_condition(&mut self.model, "goal", &e, c);
        }
        Ok(())
    }

    /// Affine form of the problem metric after the last happening.
    pub fn metric(&self, problem: &GroundedProblem) -> Result<Option<(bool, Affine)>, EncodeError> {
        let Some(m) = &problem.metric else { return Ok(None) };
        let mut e = Affine::constant(m.expr.constant);
        for (f, k) in m.expr.terms() {
            let v = self.final_value(f).ok_or(EncodeError::UnboundFluent(f))?;
            e.add_scaled(&v, k);
        }
        if m.total_time != 0.0 {
            e.add_scaled(&self.time(self.time_vars.len()), m.total_time);
        }
        Ok(Some((m.minimize, e)))
    }
}

pub(crate) fn row_cmp(c: Comparison) -> RowCmp {
    match c {
        Comparison::Lt | Comparison::Le => RowCmp::Le,
        Comparison::Gt | Comparison::Ge => RowCmp::Ge,
        Comparison::Eq => RowCmp::Eq,
    }
}

/// Adds `e cmp rhs`; constant rows are checked directly and a violation
/// makes the model infeasible.
pub(crate) fn emit(model: &mut LpModel, name: &str, e: &Affine, cmp: RowCmp, rhs: f64) {
    let rhs = rhs - e.constant;
    if e.is_constant() {
        let ok = match cmp {
            RowCmp::Le => 0.0 <= rhs + NUMERIC_TOLERANCE,
            RowCmp::Ge => 0.0 >= rhs - NUMERIC_TOLERANCE,
            RowCmp::Eq => rhs.abs() <= NUMERIC_TOLERANCE,
        };
        if !ok {
            model.add_row(format!("{name}_violated"), &[], RowCmp::Ge, 1.0);
        }
        return;
    }
    model.add_row(name, &e.terms, cmp, rhs);
}

pub(crate) fn emit_condition(model: &mut LpModel, name: &str, e: &Affine, c: &NumericCondition) {
    emit(model, name, e, row_cmp(c.cmp), c.rhs);
}

/// STN constraints as rows over time variables.
pub(crate) fn emit_stn_rows(model: &mut LpModel, stn: &Stn, time: &dyn Fn(usize) -> Affine) {
    for c in stn.constraints() {
        if c.i == 0 && c.lb <= 0.0 && c.ub == f64::INFINITY {
            // implied by t >= 0
            continue;
        }
        let d = time(c.j).minus(&time(c.i));
        if c.lb.is_finite() && c.ub.is_finite() && (c.ub - c.lb).abs() <= FIXED_DURATION_WIDTH {
            emit(model, "stn", &d, RowCmp::Eq, c.lb);
            continue;
        }
        if c.lb.is_finite() {
            emit(model, "stn", &d, RowCmp::Ge, c.lb);
        }
        if c.ub.is_finite() {
            emit(model, "stn", &d, RowCmp::Le, c.ub);
        }
    }
}

/// Duration variables for actions whose discrete effects mention `?duration`
/// and whose duration is not fixed; keyed by start happening.
pub(crate) fn duration_vars(model: &mut LpModel, prefix: &Prefix<'_>) -> Vec<Option<VarId>> {
    let mut out = vec![None; prefix.n() + 1];
    for h in 1..=prefix.n() {
        let hp = prefix.at(h);
        if let SnapRef::Start(a) = hp.snap {
            let act = &prefix.problem.durative[a];
            let uses = act.start_effects.iter().chain(&act.end_effects).any(|e| match e {
                DiscreteEffect::Numeric(n) => n.rvalue.mentions_duration(),
                _ => false,
            });
            if uses && !hp.fixed_duration() {
                out[h] = Some(model.add_var(format!("d{h}"), hp.duration.0, hp.duration.1));
            }
        }
    }
    out
}

/// `?duration` of the action owning the snap at `h`.
pub(crate) fn duration_affine(prefix: &Prefix<'_>, h: usize, dvars: &[Option<VarId>], time: &dyn Fn(usize) -> Affine) -> Affine {
    let hp = prefix.at(h);
    let s = hp.start.unwrap_or(h);
    let start = prefix.at(s);
    if start.fixed_duration() {
        return Affine::constant(start.duration.0);
    }
    if let Some(d) = dvars[s] {
        return Affine::var(d);
    }
    time(h).minus(&time(s))
}

/// Rows tying each duration variable to its action's endpoints.
pub(crate) fn emit_duration_rows(model: &mut LpModel, prefix: &Prefix<'_>, dvars: &[Option<VarId>], time: &dyn Fn(usize) -> Affine) {
    for h in 1..=prefix.n() {
        if let Some(s) = prefix.at(h).start {
            if let Some(d) = dvars[s] {
                let mut e = time(h).minus(&time(s));
                e.add_scaled(&Affine::var(d), -1.0);
                emit(model, "dur", &e, RowCmp::Eq, 0.0);
            }
        }
    }
}

/// Post-value of a numeric effect given the pre-value of its lvalue and a
/// resolver for the rvalue's fluents.
pub(crate) fn effect_value(
    op: AssignOp,
    rvalue: &Rvalue,
    lvalue: FluentId,
    pre: &Affine,
    value_of: &dyn Fn(FluentId) -> Result<Affine, EncodeError>,
    literal_of: &dyn Fn(FluentId) -> Option<f64>,
    duration: &Affine,
) -> Result<Affine, EncodeError> {
    let rv = match rvalue {
        Rvalue::Linear { expr, duration_coeff } => {
            let mut e = Affine::constant(expr.constant);
            for (f, k) in expr.terms() {
                e.add_scaled(&value_of(f)?, k);
            }
            e.add_scaled(duration, *duration_coeff);
            e
        }
        Rvalue::Nonlinear(g) => {
            let mut fl = Vec::new();
            g.fluents(&mut fl);
            let vals: Vec<Option<f64>> = (0..fl.iter().copied().max().map_or(0, |m| m + 1)).map(literal_of).collect();
            let d = if duration.is_constant() { Some(duration.constant) } else { None };
            match g.evaluate(&vals, d) {
                Ok(v) => Affine::constant(v),
                Err(crate::model::ModelError::DivisionByZero) => return Err(EncodeError::DivisionByZero),
                Err(_) => return Err(EncodeError::Nonlinear(lvalue)),
            }
        }
    };
    Ok(match op {
        AssignOp::Assign => rv,
        AssignOp::Increase => {
            let mut e = pre.clone();
            e.add_scaled(&rv, 1.0);
            e
        }
        AssignOp::Decrease => pre.minus(&rv),
        AssignOp::ScaleUp | AssignOp::ScaleDown => {
            if !rv.is_constant() {
                return Err(EncodeError::Nonlinear(lvalue));
            }
            let k = rv.constant;
            if op == AssignOp::ScaleUp {
                pre.scaled(k)
            } else {
                if k == 0.0 {
                    return Err(EncodeError::DivisionByZero);
                }
                pre.scaled(1.0 / k)
            }
        }
    })
}

/// Cumulative rate per fluent for a running set, evaluated on literal values.
pub fn context_rates(
    problem: &GroundedProblem,
    running: &[(usize, usize)],
    literal: &[Option<f64>],
) -> Result<Vec<(FluentId, f64)>, EncodeError> {
    let mut rates: Vec<(FluentId, f64)> = Vec::new();
    for &(a, _) in running {
        for ce in &problem.durative[a].continuous {
            let r = ce.rate.evaluate(literal).map_err(|_| EncodeError::NonconstantRate(ce.fluent))?;
            match rates.iter_mut().find(|x| x.0 == ce.fluent) {
                Some(x) => x.1 += r,
                None => rates.push((ce.fluent, r)),
            }
        }
    }
    rates.retain(|r| r.1 != 0.0);
    rates.sort_by_key(|r| r.0);
    Ok(rates)
}

#[cfg(test)]
mod tests;
