//! Temporal search states and single-happening progression.

use std::rc::Rc;

use crate::encoding::{Timeline, FIXED_DURATION_WIDTH};
use crate::model::{Condition, DiscreteEffect, FactSet, FluentId, GroundedProblem, NumericCondition, SnapRef};

/// Search node: facts, optimistic fluent bounds, happenings, running actions
/// and temporal network (all inside `tl`), plus goal-check bookkeeping.
#[derive(Debug, Clone)]
pub struct TemporalState {
    pub tl: Timeline,
    /// `[lb, ub]` per fluent; literal fluents are points, undefined ones NaN.
    pub bounds: Rc<[(f64, f64)]>,
    pub lpgc: bool,
    /// Most recent happening whose LP was solved (0 = none).
    pub last_lp: usize,
}

impl TemporalState {
    pub fn initial(problem: &GroundedProblem) -> Self {
        let tl = Timeline::new(problem);
        let bounds = literal_bounds(&tl.literal, &FactSet::default(), &[]);
        TemporalState { tl, bounds, lpgc: false, last_lp: 0 }
    }

    pub fn n(&self) -> usize {
        self.tl.n()
    }

    pub fn running(&self) -> &[(usize, usize)] {
        &self.tl.running
    }

    pub fn dependent(&self) -> &FactSet {
        &self.tl.tracker.dependent
    }

    /// Whether `c` mentions a schedule-dependent fluent.
    pub fn touches_dependent(&self, c: &NumericCondition) -> bool {
        c.fluents().any(|f| self.dependent().contains(f))
    }

    /// Value of a condition over literal fluents; `None` if it mentions a dependent fluent.
    /// Undefined fluents make the condition false.
    pub fn literal_holds(&self, c: &NumericCondition) -> Option<bool> {
        if self.touches_dependent(c) {
            return None;
        }
        Some(c.holds(&self.tl.literal).unwrap_or(false))
    }
}

/// Bounds vector from literal values; `dependent` fluents take `carried` or `(-inf, inf)`.
pub(crate) fn literal_bounds(literal: &[Option<f64>], dependent: &FactSet, carried: &[(FluentId, f64, f64)]) -> Rc<[(f64, f64)]> {
    literal
        .iter()
        .enumerate()
        .map(|(v, x)| {
            if dependent.contains(v) {
                carried.iter().find(|c| c.0 == v).map_or((f64::NEG_INFINITY, f64::INFINITY), |c| (c.1, c.2))
            } else {
                x.map_or((f64::NAN, f64::NAN), |x| (x, x))
            }
        })
        .collect()
}

fn bounds_satisfy(c: &NumericCondition, bounds: &[(f64, f64)]) -> bool {
    c.fluents().all(|f| !bounds[f].0.is_nan()) && c.satisfiable_in(bounds)
}

fn condition_satisfiable(c: &Condition, s: &TemporalState) -> bool {
    c.facts_hold(&s.tl.facts) && c.numeric.iter().all(|n| bounds_satisfy(n, &s.bounds))
}

/// Snaps whose preconditions are satisfiable in `s` under optimistic bounds.
pub fn applicable(problem: &GroundedProblem, s: &TemporalState) -> Vec<SnapRef> {
    let mut out = Vec::new();
    for (i, a) in problem.instant.iter().enumerate() {
        if condition_satisfiable(&a.pre, s) {
            out.push(SnapRef::Instant(i));
        }
    }
    for (i, a) in problem.durative.iter().enumerate() {
        if s.tl.start_of(i).is_none() && condition_satisfiable(&a.start_cond, s) {
            out.push(SnapRef::Start(i));
        }
    }
    for &(a, _) in s.running() {
        if condition_satisfiable(&problem.durative[a].end_cond, s) {
            out.push(SnapRef::End(a));
        }
    }
    out
}

/// Fact invariants and literal numeric invariants of every action running in `next`.
pub fn invariants_hold(problem: &GroundedProblem, next: &TemporalState) -> bool {
    next.running().iter().all(|&(a, _)| {
        let inv = &problem.durative[a].invariant;
        inv.facts_hold(&next.tl.facts) && inv.numeric.iter().all(|c| next.literal_holds(c) != Some(false))
    })
}

fn mentions(c: &Condition, set: &FactSet) -> bool {
    c.fluents().any(|f| set.contains(f))
}

/// Whether the LP must be solved after applying `snap` to `prev`, giving `next`.
pub fn needs_lp(problem: &GroundedProblem, prev: &TemporalState, snap: SnapRef, next: &TemporalState) -> bool {
    let before = prev.dependent();
    let after = next.dependent();
    let sa = problem.snap(snap);
    if mentions(sa.pre, before) {
        return true;
    }
    if let Some(a) = snap.durative() {
        let act = &problem.durative[a];
        if mentions(&act.invariant, before) || mentions(&act.invariant, after) || !act.continuous.is_empty() {
            return true;
        }
    }
    let fixed = match snap {
        SnapRef::Instant(_) => true,
        SnapRef::Start(_) | SnapRef::End(_) => {
            let h = next.tl.happenings.last().expect("pushed happening");
            h.duration.1 - h.duration.0 <= FIXED_DURATION_WIDTH
        }
    };
    let mut written = Vec::new();
    for e in sa.effects {
        let DiscreteEffect::Numeric(n) = e else { continue };
        if before.contains(n.fluent) || after.contains(n.fluent) {
            return true;
        }
        if n.rvalue.fluents().iter().any(|&f| before.contains(f)) {
            return true;
        }
        if n.rvalue.mentions_duration() && !fixed {
            return true;
        }
        written.push(n.fluent);
    }
    if matches!(snap, SnapRef::End(_)) && !fixed && !before.is_empty() {
        return true;
    }
    // invariants of other running actions are evaluated at this happening too
    for &(a, _) in prev.running() {
        if Some(a) == snap.durative() {
            continue;
        }
        for c in &problem.durative[a].invariant.numeric {
            let dep = c.fluents().any(|f| before.contains(f));
            let moving = c.fluents().any(|f| before.contains(f) && prev.tl.rate(f) != 0.0);
            let hit = c.fluents().any(|f| written.contains(&f));
            if dep && (moving || hit) {
                return true;
            }
        }
    }
    false
}

/// Fluents whose value `snap` can change: discrete lvalues plus, for durative
/// endpoints, the owner's continuously changed fluents.
pub fn affected(problem: &GroundedProblem, snap: SnapRef) -> Vec<FluentId> {
    let mut out: Vec<FluentId> = problem
        .snap(snap)
        .effects
        .iter()
        .filter_map(|e| match e {
            DiscreteEffect::Numeric(n) => Some(n.fluent),
            _ => None,
        })
        .collect();
    if let Some(a) = snap.durative() {
        out.extend(problem.durative[a].continuous.iter().map(|c| c.fluent));
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn grid(x: f64) -> i64 {
    if x.is_nan() {
        i64::MIN
    } else {
        // saturating cast maps infinities to the extremes
        (x * 1e6).round() as i64
    }
}

/// Duplicate-detection key.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateKey {
    facts: FactSet,
    running: Vec<usize>,
    values: Vec<i64>,
    dependent: FactSet,
    gaps: Vec<i64>,
    lpgc: bool,
}

impl StateKey {
    pub fn of(s: &TemporalState) -> Self {
        let n = s.n();
        let mut gaps = Vec::new();
        for &(_, st) in s.running() {
            let (lb, ub) = s.tl.stn.bounds(st, n).unwrap_or((f64::NAN, f64::NAN));
            gaps.push(grid(lb));
            gaps.push(grid(ub));
        }
        StateKey {
            facts: s.tl.facts.clone(),
            running: s.running().iter().map(|r| r.0).collect(),
            values: s.bounds.iter().flat_map(|b| [grid(b.0), grid(b.1)]).collect(),
            dependent: s.dependent().clone(),
            gaps,
            lpgc: s.lpgc,
        }
    }
}
