//! Grounded problem representation shared by search, encoding and validation.

mod expr;
mod facts;

pub use expr::{GroundExpr, LinearExpr};
pub use facts::FactSet;

pub use crate::pddl::ast::Comparison;

pub type FactId = usize;
pub type FluentId = usize;

/// Satisfaction tolerance for numeric conditions.
pub const NUMERIC_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("fluent {0} has no value")]
    UnboundFluent(FluentId),
    #[error("division by zero")]
    DivisionByZero,
    #[error("?duration used where the duration is unknown")]
    UnknownDuration,
    #[error("fluent {0} is assigned twice in one happening")]
    ConflictingEffects(FluentId),
}

/// `expr cmp rhs` with the constant folded into `rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericCondition {
    pub expr: LinearExpr,
    pub cmp: Comparison,
    pub rhs: f64,
}

impl NumericCondition {
    pub fn new(mut expr: LinearExpr, cmp: Comparison, rhs: f64) -> Self {
        let rhs = rhs - expr.constant;
        expr.constant = 0.0;
        NumericCondition { expr, cmp, rhs }
    }

    pub fn holds_value(&self, lhs: f64) -> bool {
        compare(lhs, self.cmp, self.rhs, NUMERIC_TOLERANCE)
    }

    pub fn holds(&self, values: &[Option<f64>]) -> Result<bool, ModelError> {
        Ok(self.holds_value(self.expr.evaluate(values)?))
    }

    /// Whether some point in the box makes the condition true.
    pub fn satisfiable_in(&self, bounds: &[(f64, f64)]) -> bool {
        let (lo, hi) = self.expr.interval(bounds);
        let t = NUMERIC_TOLERANCE;
        match self.cmp {
            Comparison::Lt | Comparison::Le => lo <= self.rhs + t,
            Comparison::Gt | Comparison::Ge => hi >= self.rhs - t,
            Comparison::Eq => lo <= self.rhs + t && hi >= self.rhs - t,
        }
    }

    pub fn fluents(&self) -> impl Iterator<Item = FluentId> + '_ {
        self.expr.fluents()
    }
}

/// Tolerant comparison; strict operators are relaxed to their closed form.
pub fn compare(lhs: f64, cmp: Comparison, rhs: f64, tol: f64) -> bool {
    match cmp {
        Comparison::Lt | Comparison::Le => lhs <= rhs + tol,
        Comparison::Gt | Comparison::Ge => lhs >= rhs - tol,
        Comparison::Eq => (lhs - rhs).abs() <= tol,
    }
}

/// Conjunction of fact literals and numeric conditions.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Condition {
    pub positive: Vec<FactId>,
    pub negative: Vec<FactId>,
    pub numeric: Vec<NumericCondition>,
}

impl Condition {
    pub fn is_empty(&self) -> bool {
        self.positive.is_empty() && self.negative.is_empty() && self.numeric.is_empty()
    }

    pub fn facts_hold(&self, facts: &FactSet) -> bool {
        self.positive.iter().all(|&f| facts.contains(f)) && self.negative.iter().all(|&f| !facts.contains(f))
    }

    pub fn fluents(&self) -> impl Iterator<Item = FluentId> + '_ {
        self.numeric.iter().flat_map(|c| c.fluents())
    }

    pub fn extend(&mut self, other: &Condition) {
        self.positive.extend_from_slice(&other.positive);
        self.negative.extend_from_slice(&other.negative);
        self.numeric.extend(other.numeric.iter().cloned());
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssignOp {
    Assign,
    Increase,
    Decrease,
    ScaleUp,
    ScaleDown,
}

/// Right-hand side of a numeric effect.
#[derive(Debug, Clone, PartialEq)]
pub enum Rvalue {
    /// `expr + duration_coeff·?duration`
    Linear { expr: LinearExpr, duration_coeff: f64 },
    /// Retained symbolically; only evaluable when every input is known.
    Nonlinear(GroundExpr),
}

impl Rvalue {
    pub fn evaluate(&self, values: &[Option<f64>], duration: Option<f64>) -> Result<f64, ModelError> {
        match self {
            Rvalue::Linear { expr, duration_coeff } => {
                let mut v = expr.evaluate(values)?;
                if *duration_coeff != 0.0 {
                    v += duration_coeff * duration.ok_or(ModelError::UnknownDuration)?;
                }
                Ok(v)
            }
            Rvalue::Nonlinear(g) => g.evaluate(values, duration),
        }
    }

    pub fn fluents(&self) -> Vec<FluentId> {
        match self {
            Rvalue::Linear { expr, .. } => expr.fluents().collect(),
            Rvalue::Nonlinear(g) => {
                let mut v = Vec::new();
                g.fluents(&mut v);
                v.sort_unstable();
                v.dedup();
                v
            }
        }
    }

    pub fn mentions_duration(&self) -> bool {
        match self {
            Rvalue::Linear { duration_coeff, .. } => *duration_coeff != 0.0,
            Rvalue::Nonlinear(g) => g.mentions_duration(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumericEffect {
    pub fluent: FluentId,
    pub op: AssignOp,
    pub rvalue: Rvalue,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DiscreteEffect {
    Add(FactId),
    Delete(FactId),
    Numeric(NumericEffect),
}

/// `d/dt fluent += rate` while the owning action runs; decreases carry a negated rate.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousEffect {
    pub fluent: FluentId,
    pub rate: LinearExpr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DurationCmp {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DurationConstraint {
    pub cmp: DurationCmp,
    pub expr: LinearExpr,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstantAction {
    pub name: String,
    pub args: Vec<String>,
    pub pre: Condition,
    pub effects: Vec<DiscreteEffect>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DurativeAction {
    pub name: String,
    pub args: Vec<String>,
    pub duration: Vec<DurationConstraint>,
    pub start_cond: Condition,
    pub end_cond: Condition,
    pub invariant: Condition,
    pub start_effects: Vec<DiscreteEffect>,
    pub end_effects: Vec<DiscreteEffect>,
    pub continuous: Vec<ContinuousEffect>,
}

impl DurativeAction {
    /// `[lb, ub]` of the duration given the values at the start happening.
    pub fn duration_bounds(&self, values: &[Option<f64>]) -> Result<(f64, f64), ModelError> {
        let (mut lb, mut ub) = (0.0f64, f64::INFINITY);
        for d in &self.duration {
            let v = d.expr.evaluate(values)?;
            match d.cmp {
                DurationCmp::Le => ub = ub.min(v),
                DurationCmp::Ge => lb = lb.max(v),
                DurationCmp::Eq => {
                    lb = lb.max(v);
                    ub = ub.min(v);
                }
            }
        }
        Ok((lb, ub))
    }

    pub fn has_duration_dependent_effect(&self) -> bool {
        !self.continuous.is_empty()
            || self.start_effects.iter().chain(&self.end_effects).any(|e| match e {
                DiscreteEffect::Numeric(n) => n.rvalue.mentions_duration(),
                _ => false,
            })
    }

    pub fn display_name(&self) -> String {
        display_name(&self.name, &self.args)
    }
}

impl InstantAction {
    pub fn display_name(&self) -> String {
        display_name(&self.name, &self.args)
    }
}

fn display_name(name: &str, args: &[String]) -> String {
    let mut s = format!("({name}");
    for a in args {
        s.push(' ');
        s.push_str(a);
    }
    s.push(')');
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    Start,
    End,
    Instant,
}

/// Identifies a discrete transition: an instant action or one endpoint of a durative action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SnapRef {
    Instant(usize),
    Start(usize),
    End(usize),
}

impl SnapRef {
    pub fn endpoint(self) -> Endpoint {
        match self {
            SnapRef::Instant(_) => Endpoint::Instant,
            SnapRef::Start(_) => Endpoint::Start,
            SnapRef::End(_) => Endpoint::End,
        }
    }

    pub fn durative(self) -> Option<usize> {
        match self {
            SnapRef::Start(a) | SnapRef::End(a) => Some(a),
            SnapRef::Instant(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SnapAction<'a> {
    pub owner: SnapRef,
    pub pre: &'a Condition,
    pub effects: &'a [DiscreteEffect],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    pub minimize: bool,
    pub expr: LinearExpr,
    /// Coefficient of `(total-time)`.
    pub total_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundedProblem {
    pub name: String,
    pub facts: Vec<String>,
    pub fluents: Vec<String>,
    pub instant: Vec<InstantAction>,
    pub durative: Vec<DurativeAction>,
    pub init_facts: FactSet,
    pub init_values: Vec<Option<f64>>,
    pub goal: Condition,
    pub metric: Option<Metric>,
}

impl GroundedProblem {
    /// The snap action for `r`.
    pub fn snap(&self, r: SnapRef) -> SnapAction<'_> {
        match r {
            SnapRef::Instant(i) => SnapAction { owner: r, pre: &self.instant[i].pre, effects: &self.instant[i].effects },
            SnapRef::Start(a) => {
                SnapAction { owner: r, pre: &self.durative[a].start_cond, effects: &self.durative[a].start_effects }
            }
            SnapRef::End(a) => {
                SnapAction { owner: r, pre: &self.durative[a].end_cond, effects: &self.durative[a].end_effects }
            }
        }
    }

    pub fn snap_name(&self, r: SnapRef) -> String {
        match r {
            SnapRef::Instant(i) => self.instant[i].display_name(),
            SnapRef::Start(a) => format!("{}-start", self.durative[a].display_name()),
            SnapRef::End(a) => format!("{}-end", self.durative[a].display_name()),
        }
    }

    pub fn fact_id(&self, name: &str) -> Option<FactId> {
        self.facts.iter().position(|f| f == name)
    }

    pub fn fluent_id(&self, name: &str) -> Option<FluentId> {
        self.fluents.iter().position(|f| f == name)
    }

    pub fn durative_by_name(&self, display: &str) -> Option<usize> {
        self.durative.iter().position(|a| a.display_name() == display)
    }

    pub fn instant_by_name(&self, display: &str) -> Option<usize> {
        self.instant.iter().position(|a| a.display_name() == display)
    }
}

/// Start and end snap actions of a durative action.
pub fn snap_actions(problem: &GroundedProblem, action: usize) -> (SnapAction<'_>, SnapAction<'_>) {
    (problem.snap(SnapRef::Start(action)), problem.snap(SnapRef::End(action)))
}

/// Applies effects with simultaneous-read semantics: every rvalue is evaluated
/// against the pre-state, deletes are applied before adds.
pub fn apply_discrete(
    values: &[Option<f64>],
    facts: &FactSet,
    effects: &[DiscreteEffect],
    duration: Option<f64>,
) -> Result<(Vec<Option<f64>>, FactSet), ModelError> {
    let mut out_values = values.to_vec();
    let mut out_facts = facts.clone();
    let mut written: Vec<FluentId> = Vec::new();
    for e in effects {
        if let DiscreteEffect::Numeric(n) = e {
            if written.contains(&n.fluent) {
                return Err(ModelError::ConflictingEffects(n.fluent));
            }
            written.push(n.fluent);
            out_values[n.fluent] = Some(numeric_update(values, n, duration)?);
        }
    }
    for e in effects {
        if let DiscreteEffect::Delete(f) = e {
            out_facts.remove(*f);
        }
    }
    for e in effects {
        if let DiscreteEffect::Add(f) = e {
            out_facts.insert(*f);
        }
    }
    Ok((out_values, out_facts))
}

/// New value of `n.fluent` under `values`.
pub fn numeric_update(values: &[Option<f64>], n: &NumericEffect, duration: Option<f64>) -> Result<f64, ModelError> {
    let rv = n.rvalue.evaluate(values, duration)?;
    if n.op == AssignOp::Assign {
        return Ok(rv);
    }
    let cur = values[n.fluent].ok_or(ModelError::UnboundFluent(n.fluent))?;
    Ok(match n.op {
        AssignOp::Increase => cur + rv,
        AssignOp::Decrease => cur - rv,
        AssignOp::ScaleUp => cur * rv,
        AssignOp::ScaleDown => {
            if rv == 0.0 {
                return Err(ModelError::DivisionByZero);
            }
            cur / rv
        }
        AssignOp::Assign => unreachable!(),
    })
}
