//! Relaxed-plan heuristic over snap actions with interval numeric semantics.

use std::collections::BTreeSet;

use crate::model::{
    AssignOp, Condition, DiscreteEffect, FactSet, FluentId, GroundedProblem, LinearExpr, NumericCondition, Rvalue,
    SnapRef,
};

const MAX_LAYERS: usize = 200;

type Iv = (f64, f64);

fn defined(x: Iv) -> bool {
    !x.0.is_nan()
}

fn hull(a: Iv, b: Iv) -> Iv {
    if !defined(a) {
        return b;
    }
    if !defined(b) {
        return a;
    }
    (a.0.min(b.0), a.1.max(b.1))
}

fn add(a: Iv, b: Iv) -> Iv {
    (a.0 + b.0, a.1 + b.1)
}

fn mul(a: Iv, b: Iv) -> Iv {
    let p = [a.0 * b.0, a.0 * b.1, a.1 * b.0, a.1 * b.1];
    let p: Vec<f64> = p.iter().map(|x| if x.is_nan() { 0.0 } else { *x }).collect();
    (p.iter().copied().fold(f64::INFINITY, f64::min), p.iter().copied().fold(f64::NEG_INFINITY, f64::max))
}

fn satisfiable(c: &NumericCondition, v: &[Iv]) -> bool {
    c.fluents().all(|f| defined(v[f])) && c.satisfiable_in(v)
}

#[derive(Debug)]
struct Op {
    snap: SnapRef,
    pre: Condition,
    adds: Vec<usize>,
    numeric: Vec<(FluentId, AssignOp, Rvalue)>,
    flows: Vec<(FluentId, LinearExpr)>,
}

/// Grounded snap actions prepared for relaxed reachability.
#[derive(Debug)]
pub struct Relaxation {
    ops: Vec<Op>,
    goal: Condition,
    /// Index of the end op for each durative action.
    end_op: Vec<usize>,
    start_op: Vec<usize>,
}

/// Per-state input to the heuristic.
pub struct Snapshot<'a> {
    pub facts: &'a FactSet,
    /// Undefined fluents carry `(NaN, NaN)`.
    pub bounds: &'a [(f64, f64)],
    pub running: &'a [(usize, usize)],
    pub literal: &'a [Option<f64>],
}

impl Relaxation {
    pub fn new(problem: &GroundedProblem) -> Self {
        let mut ops = Vec::new();
        let mut start_op = Vec::new();
        let mut end_op = Vec::new();
        let split = |effects: &[DiscreteEffect]| {
            let mut adds = Vec::new();
            let mut numeric = Vec::new();
            for e in effects {
                match e {
                    DiscreteEffect::Add(f) => adds.push(*f),
                    DiscreteEffect::Numeric(n) => numeric.push((n.fluent, n.op, n.rvalue.clone())),
                    DiscreteEffect::Delete(_) => {}
                }
            }
            (adds, numeric)
        };
        for (i, a) in problem.instant.iter().enumerate() {
            let (adds, numeric) = split(&a.effects);
            ops.push(Op { snap: SnapRef::Instant(i), pre: a.pre.clone(), adds, numeric, flows: vec![] });
        }
        for (i, a) in problem.durative.iter().enumerate() {
            let flows: Vec<_> = a.continuous.iter().map(|c| (c.fluent, c.rate.clone())).collect();
            let mut pre = a.start_cond.clone();
            pre.extend(&a.invariant);
            let (adds, numeric) = split(&a.start_effects);
            start_op.push(ops.len());
            ops.push(Op { snap: SnapRef::Start(i), pre, adds, numeric, flows: flows.clone() });
            let mut pre = a.end_cond.clone();
            pre.positive.extend(a.invariant.positive.iter().copied());
            let (adds, numeric) = split(&a.end_effects);
            end_op.push(ops.len());
            ops.push(Op { snap: SnapRef::End(i), pre, adds, numeric, flows });
        }
        Relaxation { ops, goal: problem.goal.clone(), end_op, start_op }
    }

    /// Relaxed plan length; `None` when the goal is relaxed-unreachable.
    pub fn estimate(&self, problem: &GroundedProblem, s: &Snapshot<'_>) -> Option<usize> {
        let nf = problem.facts.len();
        let mut fact_layer = vec![usize::MAX; nf];
        for f in s.facts.iter() {
            fact_layer[f] = 0;
        }
        let mut iv: Vec<Iv> = s.bounds.to_vec();
        let mut started = vec![usize::MAX; problem.durative.len()];
        for &(a, _) in s.running {
            started[a] = 0;
        }
        let durations: Vec<Iv> = problem
            .durative
            .iter()
            .map(|a| a.duration_bounds(s.literal).unwrap_or((0.0, f64::INFINITY)))
            .collect();

        let mut op_layer = vec![usize::MAX; self.ops.len()];
        let mut applied: Vec<usize> = Vec::new();
        let mut history: Vec<Vec<Iv>> = vec![iv.clone()];
        let mut goal_layer = None;
        for layer in 0..MAX_LAYERS {
            if self.goal.positive.iter().all(|&f| fact_layer[f] <= layer)
                && self.goal.numeric.iter().all(|c| satisfiable(c, &iv))
            {
                goal_layer = Some(layer);
                break;
            }
            let mut fresh = Vec::new();
            for (k, op) in self.ops.iter().enumerate() {
                if op_layer[k] != usize::MAX {
                    continue;
                }
                match op.snap {
                    SnapRef::Start(a) if s.running.iter().any(|r| r.0 == a) => continue,
                    SnapRef::End(a) if started[a] > layer => continue,
                    _ => {}
                }
                if op.pre.positive.iter().all(|&f| fact_layer[f] <= layer)
                    && op.pre.numeric.iter().all(|c| satisfiable(c, &iv))
                {
                    fresh.push(k);
                }
            }
            for &k in &fresh {
                op_layer[k] = layer;
                for &f in &self.ops[k].adds {
                    if fact_layer[f] == usize::MAX {
                        fact_layer[f] = layer + 1;
                    }
                }
                if let SnapRef::Start(a) = self.ops[k].snap {
                    started[a] = started[a].min(layer + 1);
                }
            }
            applied.extend(&fresh);
            let before = iv.clone();
            for &k in &applied {
                let op = &self.ops[k];
                let dur = op.snap.durative().map_or((0.0, 0.0), |a| durations[a]);
                for (f, aop, rv) in &op.numeric {
                    let r = rvalue_interval(rv, &before, dur);
                    let cur = before[*f];
                    let next = match aop {
                        AssignOp::Assign => r,
                        AssignOp::Increase => add(cur, r),
                        AssignOp::Decrease => add(cur, (-r.1, -r.0)),
                        AssignOp::ScaleUp => mul(cur, r),
                        AssignOp::ScaleDown => {
                            if r.0 <= 0.0 && r.1 >= 0.0 {
                                (f64::NEG_INFINITY, f64::INFINITY)
                            } else {
                                mul(cur, (1.0 / r.1, 1.0 / r.0))
                            }
                        }
                    };
                    if defined(next) {
                        iv[*f] = hull(iv[*f], next);
                    }
                }
                for (f, rate) in &op.flows {
                    let r = rate.interval(&before);
                    let span = match op.snap {
                        SnapRef::End(a) if !s.running.iter().any(|r| r.0 == a) => dur,
                        _ => (0.0, dur.1),
                    };
                    let delta = mul(r, span);
                    if defined(before[*f]) && defined(delta) {
                        iv[*f] = hull(iv[*f], add(before[*f], delta));
                    }
                }
            }
            let grew = iv.iter().zip(&before).any(|(a, b)| a != b && (defined(*a) || defined(*b)));
            history.push(iv.clone());
            if fresh.is_empty() && !grew {
                return None;
            }
        }
        goal_layer?;

        // extraction
        let mut chosen: BTreeSet<usize> = BTreeSet::new();
        let mut fact_goals: Vec<usize> = self.goal.positive.clone();
        let mut num_goals: Vec<NumericCondition> = self.goal.numeric.clone();
        let mut done_facts = vec![false; nf];
        let mut pending_ops: Vec<usize> = s.running.iter().map(|r| self.end_op[r.0]).collect();
        loop {
            if let Some(k) = pending_ops.pop() {
                if !chosen.insert(k) {
                    continue;
                }
                let op = &self.ops[k];
                fact_goals.extend(op.pre.positive.iter().copied());
                num_goals.extend(op.pre.numeric.iter().cloned());
                match op.snap {
                    SnapRef::Start(a) => pending_ops.push(self.end_op[a]),
                    SnapRef::End(a) if !s.running.iter().any(|r| r.0 == a) => pending_ops.push(self.start_op[a]),
                    _ => {}
                }
                continue;
            }
            if let Some(f) = fact_goals.pop() {
                if done_facts[f] || fact_layer[f] == 0 {
                    continue;
                }
                done_facts[f] = true;
                let lf = fact_layer[f];
                let achiever = (0..self.ops.len()).find(|&k| op_layer[k] != usize::MAX && op_layer[k] + 1 == lf && self.ops[k].adds.contains(&f));
                if let Some(k) = achiever {
                    pending_ops.push(k);
                }
                continue;
            }
            if let Some(c) = num_goals.pop() {
                let first = (0..history.len()).find(|&l| satisfiable(&c, &history[l])).unwrap_or(0);
                if first == 0 {
                    continue;
                }
                let fl: Vec<FluentId> = c.fluents().collect();
                let achiever = (0..self.ops.len())
                    .filter(|&k| op_layer[k] < first)
                    .filter(|&k| {
                        let op = &self.ops[k];
                        op.numeric.iter().any(|n| fl.contains(&n.0)) || op.flows.iter().any(|f| fl.contains(&f.0))
                    })
                    .find(|k| !chosen.contains(k));
                if let Some(k) = achiever {
                    pending_ops.push(k);
                }
                continue;
            }
            break;
        }
        Some(chosen.len())
    }
}

fn rvalue_interval(rv: &Rvalue, v: &[Iv], dur: Iv) -> Iv {
    match rv {
        Rvalue::Linear { expr, duration_coeff } => {
            let e = expr.interval(v);
            if *duration_coeff == 0.0 {
                e
            } else {
                add(e, mul((*duration_coeff, *duration_coeff), dur))
            }
        }
        Rvalue::Nonlinear(_) => (f64::NEG_INFINITY, f64::INFINITY),
    }
}
