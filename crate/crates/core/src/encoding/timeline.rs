//! Incremental construction of a plan prefix.

use std::rc::Rc;

use super::{context_rates, DependencyTracker, EncodeError, Happening, Prefix, TrackError, FIXED_DURATION_WIDTH};
use crate::model::{
    numeric_update, AssignOp, DiscreteEffect, FactSet, FluentId, GroundedProblem, ModelError, SnapRef,
};
use crate::stn::Stn;

/// Facts, literal values, happenings, and temporal network of a prefix.
#[derive(Debug, Clone)]
pub struct Timeline {
    pub happenings: Vec<Rc<Happening>>,
    pub stn: Stn,
    pub facts: FactSet,
    pub tracker: DependencyTracker,
    /// Literal values after the last happening; schedule-dependent fluents are `None`.
    pub literal: Rc<[Option<f64>]>,
    pub running: Vec<(usize, usize)>,
}

impl Timeline {
    pub fn new(problem: &GroundedProblem) -> Self {
        Timeline {
            happenings: Vec::new(),
            stn: Stn::new(),
            facts: problem.init_facts.clone(),
            tracker: DependencyTracker::default(),
            literal: problem.init_values.clone().into(),
            running: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.happenings.len()
    }

    pub fn prefix<'a>(&'a self, problem: &'a GroundedProblem) -> Prefix<'a> {
        Prefix { problem, happenings: &self.happenings, stn: &self.stn }
    }

    /// Start happening of the running instance of durative action `a`.
    pub fn start_of(&self, a: usize) -> Option<usize> {
        self.running.iter().find(|r| r.0 == a).map(|r| r.1)
    }

    /// Rate of `v` in the context after the last happening.
    pub fn rate(&self, v: FluentId) -> f64 {
        self.happenings.last().map_or(0.0, |h| h.rate(v))
    }

    /// Appends `snap` at a new happening separated from the previous one by
    /// at least `epsilon`. The network may come out inconsistent; callers check.
    pub fn push(&self, problem: &GroundedProblem, snap: SnapRef, epsilon: f64) -> Result<Timeline, EncodeError> {
        let h = self.n() + 1;
        let mut running = self.running.clone();
        let (start, duration) = match snap {
            SnapRef::Instant(_) => (None, (0.0, 0.0)),
            SnapRef::Start(a) => {
                let d = problem.durative[a].duration_bounds(&self.literal).map_err(|e| match e {
                    ModelError::UnboundFluent(v) => EncodeError::ScheduleDependentDuration(v),
                    e => EncodeError::Model(e),
                })?;
                running.push((a, h));
                (None, d)
            }
            SnapRef::End(a) => {
                let pos = running.iter().position(|r| r.0 == a).ok_or(EncodeError::NotRunning(a))?;
                let s = running.remove(pos).1;
                (Some(s), self.happenings[s - 1].duration)
            }
        };
        let fixed = duration.1 - duration.0 <= FIXED_DURATION_WIDTH;
        let tracker = self
            .tracker
            .track(problem, snap, fixed, &running)
            .map_err(|TrackError::NonlinearUnderSchedule(v)| EncodeError::Nonlinear(v))?;

        let effects = problem.snap(snap).effects;
        let mut literal: Vec<Option<f64>> = self.literal.to_vec();
        let mut written: Vec<FluentId> = Vec::new();
        let dur = if fixed { Some(duration.0) } else { None };
        for e in effects {
            let DiscreteEffect::Numeric(n) = e else { continue };
            if written.contains(&n.fluent) {
                return Err(EncodeError::Model(ModelError::ConflictingEffects(n.fluent)));
            }
            written.push(n.fluent);
            let fl = n.rvalue.fluents();
            let unknown_rv = fl.iter().any(|&f| self.literal[f].is_none()) || (n.rvalue.mentions_duration() && !fixed);
            let unknown_lv = n.op != AssignOp::Assign && self.literal[n.fluent].is_none();
            literal[n.fluent] = if unknown_rv || unknown_lv {
                None
            } else {
                match numeric_update(&self.literal, n, dur) {
                    Ok(v) => Some(v),
                    Err(ModelError::DivisionByZero) => return Err(EncodeError::DivisionByZero),
                    Err(e) => return Err(EncodeError::Model(e)),
                }
            };
        }
        for v in tracker.dependent.iter() {
            literal[v] = None;
        }
        let mut facts = self.facts.clone();
        for e in effects {
            if let DiscreteEffect::Delete(f) = e {
                facts.remove(*f);
            }
        }
        for e in effects {
            if let DiscreteEffect::Add(f) = e {
                facts.insert(*f);
            }
        }
        let rates = context_rates(problem, &running, &literal)?;

        let mut stn = self.stn.clone();
        let node = stn.add_happening();
        debug_assert_eq!(node, h);
        stn.add_constraint(h - 1, h, epsilon, f64::INFINITY);
        if let Some(s) = start {
            stn.add_constraint(s, h, duration.0, duration.1);
        }
        // anything still running ends at least epsilon later
        for &(_, s) in &running {
            let ub = self.happenings.get(s - 1).map_or(duration.1, |x| x.duration.1);
            if ub.is_finite() {
                stn.add_constraint(s, h, f64::NEG_INFINITY, ub - epsilon);
            }
        }

        let literal: Rc<[Option<f64>]> = literal.into();
        let happening = Happening {
            snap,
            start,
            duration,
            post: literal.clone(),
            dependent: tracker.dependent.clone(),
            rates,
            running: running.clone(),
        };
        let mut happenings = self.happenings.clone();
        happenings.push(Rc::new(happening));
        Ok(Timeline { happenings, stn, facts, tracker, literal, running })
    }

    /// Records that `v` has a single possible value after the last happening.
    pub fn resolve(&mut self, v: FluentId, value: f64) {
        self.tracker.resolve(v);
        let mut lit = self.literal.to_vec();
        lit[v] = Some(value);
        self.literal = lit.into();
        if let Some(last) = self.happenings.last_mut() {
            let h = Rc::make_mut(last);
            h.dependent.remove(v);
            h.post = self.literal.clone();
        }
    }
}
