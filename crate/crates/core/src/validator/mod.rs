//! Plan validation by piecewise-linear simulation.

use std::fmt;

use serde::Serialize;

use crate::model::{
    apply_discrete, compare, Condition, FactSet, GroundedProblem, ModelError, SnapRef, NUMERIC_TOLERANCE,
};
use crate::plan::Plan;

/// Minimum separation between distinct happenings.
pub const DEFAULT_EPSILON: f64 = 0.001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum FailureKind {
    Precondition,
    Invariant,
    Duration,
    Separation,
    Goal,
    RunningAtEnd,
}

impl fmt::Display for FailureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailureKind::Precondition => "precondition",
            FailureKind::Invariant => "invariant",
            FailureKind::Duration => "duration",
            FailureKind::Separation => "separation",
            FailureKind::Goal => "goal",
            FailureKind::RunningAtEnd => "runningAtEnd",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub time: f64,
    pub kind: FailureKind,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub valid: bool,
    pub failures: Vec<Failure>,
}

impl Verdict {
    pub fn has(&self, kind: FailureKind) -> bool {
        self.failures.iter().any(|f| f.kind == kind)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.valid {
            return writeln!(f, "valid");
        }
        writeln!(f, "invalid")?;
        for x in &self.failures {
            writeln!(f, "  {}: {} ({})", x.time, x.kind, x.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MalformedPlan {
    #[error("unknown action {0}")]
    UnknownAction(String),
    #[error("durative action {0} has no duration")]
    MissingDuration(String),
    #[error("instantaneous action {0} has a duration")]
    UnexpectedDuration(String),
    #[error("action {0} starts again before it ends")]
    SelfOverlap(String),
}

/// One stretch of constant rates between two happenings.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub from: f64,
    pub to: f64,
    /// Values at `from`.
    pub values: Vec<Option<f64>>,
    /// Cumulative rate per fluent.
    pub rates: Vec<f64>,
    /// Durative actions running over the segment.
    pub running: Vec<usize>,
}

/// Simulation trace: verdict plus the linear segments walked.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub verdict: Verdict,
    pub segments: Vec<Segment>,
    pub final_values: Vec<Option<f64>>,
}

struct Event {
    time: f64,
    snap: SnapRef,
    /// Plan duration of the owning durative action.
    duration: Option<f64>,
    order: usize,
}

pub fn validate(problem: &GroundedProblem, plan: &Plan) -> Result<Verdict, MalformedPlan> {
    validate_with(problem, plan, DEFAULT_EPSILON)
}

pub fn validate_with(problem: &GroundedProblem, plan: &Plan, epsilon: f64) -> Result<Verdict, MalformedPlan> {
    Ok(simulate(problem, plan, epsilon)?.verdict)
}

fn events(problem: &GroundedProblem, plan: &Plan) -> Result<Vec<Event>, MalformedPlan> {
    let mut out = Vec::new();
    for step in &plan.steps {
        if let Some(a) = problem.durative_by_name(&step.name) {
            let d = step.duration.ok_or_else(|| MalformedPlan::MissingDuration(step.name.clone()))?;
            out.push(Event { time: step.time, snap: SnapRef::Start(a), duration: Some(d), order: out.len() });
            out.push(Event { time: step.time + d, snap: SnapRef::End(a), duration: Some(d), order: out.len() });
        } else if let Some(i) = problem.instant_by_name(&step.name) {
            if step.duration.is_some() {
                return Err(MalformedPlan::UnexpectedDuration(step.name.clone()));
            }
            out.push(Event { time: step.time, snap: SnapRef::Instant(i), duration: None, order: out.len() });
        } else {
            return Err(MalformedPlan::UnknownAction(step.name.clone()));
        }
    }
    out.sort_by(|a, b| a.time.total_cmp(&b.time).then(a.order.cmp(&b.order)));
    Ok(out)
}

struct Sim<'a> {
    problem: &'a GroundedProblem,
    values: Vec<Option<f64>>,
    facts: FactSet,
    failures: Vec<Failure>,
}

impl Sim<'_> {
    fn fail(&mut self, time: f64, kind: FailureKind, detail: String) {
        let f = Failure { time, kind, detail };
        // invariants are checked on both sides of a happening
        if !self.failures.contains(&f) {
            self.failures.push(f);
        }
    }

    /// Checks `c`; numeric conditions over undefined fluents fail.
    fn check(&mut self, time: f64, kind: FailureKind, c: &Condition, what: &str) {
        let facts = &self.problem.facts;
        for &f in &c.positive {
            if !self.facts.contains(f) {
                self.fail(time, kind, format!("{what}: {} is false", facts[f]));
            }
        }
        for &f in &c.negative {
            if self.facts.contains(f) {
                self.fail(time, kind, format!("{what}: {} is true", facts[f]));
            }
        }
        for n in &c.numeric {
            match n.expr.evaluate(&self.values) {
                Ok(v) if compare(v, n.cmp, n.rhs, NUMERIC_TOLERANCE) => {}
                Ok(v) => self.fail(time, kind, format!("{what}: numeric condition fails with value {v}")),
                Err(e) => self.fail(time, kind, format!("{what}: {e}")),
            }
        }
    }

    fn rates(&self, running: &[(usize, f64, f64)]) -> Result<Vec<f64>, ModelError> {
        let mut r = vec![0.0; self.values.len()];
        for &(a, _, _) in running {
            for ce in &self.problem.durative[a].continuous {
                r[ce.fluent] += ce.rate.evaluate(&self.values)?;
            }
        }
        Ok(r)
    }

    fn check_invariants(&mut self, time: f64, running: &[(usize, f64, f64)]) {
        for &(a, _, _) in running {
            let name = self.problem.durative[a].display_name();
            let inv = &self.problem.durative[a].invariant;
            self.check(time, FailureKind::Invariant, inv, &name);
        }
    }
}

/// Runs the plan and records every failure found.
pub fn simulate(problem: &GroundedProblem, plan: &Plan, epsilon: f64) -> Result<Trace, MalformedPlan> {
    let events = events(problem, plan)?;
    let mut sim = Sim { problem, values: problem.init_values.clone(), facts: problem.init_facts.clone(), failures: Vec::new() };
    // (action, start time, plan duration)
    let mut running: Vec<(usize, f64, f64)> = Vec::new();
    let mut segments = Vec::new();
    let mut now = 0.0f64;
    let mut last_event: Option<f64> = None;

    for ev in &events {
        let t = ev.time;
        if t < -NUMERIC_TOLERANCE {
            sim.fail(t, FailureKind::Separation, "happening before time 0".into());
        }
        if let Some(prev) = last_event {
            if t - prev < epsilon - NUMERIC_TOLERANCE {
                sim.fail(t, FailureKind::Separation, format!("only {} after the previous happening", t - prev));
            }
        }
        last_event = Some(t);

        // advance the continuous state
        let rates = match sim.rates(&running) {
            Ok(r) => r,
            Err(e) => {
                sim.fail(t, FailureKind::Invariant, format!("rate undefined: {e}"));
                vec![0.0; sim.values.len()]
            }
        };
        let dt = (t - now).max(0.0);
        segments.push(Segment {
            from: now,
            to: now + dt,
            values: sim.values.clone(),
            rates: rates.clone(),
            running: running.iter().map(|r| r.0).collect(),
        });
        for (v, r) in rates.iter().enumerate() {
            if *r != 0.0 {
                sim.values[v] = sim.values[v].map(|x| x + r * dt);
            }
        }
        now = now.max(t);
        sim.check_invariants(t, &running);

        let name = problem.snap_name(ev.snap);
        let sa = problem.snap(ev.snap);
        match ev.snap {
            SnapRef::Start(a) => {
                if running.iter().any(|r| r.0 == a) {
                    return Err(MalformedPlan::SelfOverlap(problem.durative[a].display_name()));
                }
                let d = ev.duration.expect("durative");
                match problem.durative[a].duration_bounds(&sim.values) {
                    Ok((lb, ub)) => {
                        if d < lb - NUMERIC_TOLERANCE || d > ub + NUMERIC_TOLERANCE {
                            sim.fail(t, FailureKind::Duration, format!("{name}: duration {d} outside [{lb}, {ub}]"));
                        }
                    }
                    Err(e) => sim.fail(t, FailureKind::Duration, format!("{name}: {e}")),
                }
            }
            SnapRef::End(a) => {
                if let Some(pos) = running.iter().position(|r| r.0 == a) {
                    running.remove(pos);
                }
            }
            SnapRef::Instant(_) => {}
        }
        sim.check(t, FailureKind::Precondition, sa.pre, &name);
        match apply_discrete(&sim.values, &sim.facts, sa.effects, ev.duration) {
            Ok((v, f)) => {
                sim.values = v;
                sim.facts = f;
            }
            Err(e) => sim.fail(t, FailureKind::Precondition, format!("{name}: effect fails: {e}")),
        }
        if let SnapRef::Start(a) = ev.snap {
            running.push((a, t, ev.duration.expect("durative")));
        }
        sim.check_invariants(t, &running);
    }

    let end = last_event.unwrap_or(0.0);
    for &(a, _, _) in &running {
        let name = problem.durative[a].display_name();
        sim.fail(end, FailureKind::RunningAtEnd, name);
    }
    let goal = problem.goal.clone();
    sim.check(end, FailureKind::Goal, &goal, "goal");
    let failures = sim.failures;
    Ok(Trace {
        verdict: Verdict { valid: failures.is_empty(), failures },
        segments,
        final_values: sim.values,
    })
}
