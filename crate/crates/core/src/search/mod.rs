//! Best-first search over temporal states with selective LP checks.

mod heuristic;
mod state;

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::fmt;
use std::path::PathBuf;
use std::rc::Rc;
use std::time::{Duration, Instant};

use serde::Serialize;

pub use heuristic::{Relaxation, Snapshot};
pub use state::{affected, applicable, invariants_hold, needs_lp, StateKey, TemporalState};

use crate::encoding::{analyze, encode_full, encode_optimized, EncodeError, PlanEncoding, Prefix, Timeline};
use crate::lp::{to_lp_format, LpModel, LpSolver, Objective, Sense, Simplex, Status};
use crate::model::{FactSet, FluentId, GroundedProblem, SnapRef};
use crate::plan::{Plan, TimedAction};
use crate::stn::{Stn, Verdict};
use state::literal_bounds;

/// Slack added to LP-derived bounds before writing them into the network.
const WRITE_BACK_SLACK: f64 = 1e-9;
/// A fluent whose LP range is narrower than this is treated as literal.
const COLLAPSE_WIDTH: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// LP only when the happening can interact with schedule-dependent fluents.
    Lazy,
    /// LP at every generated state.
    AlwaysLp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EncodingKind {
    Optimized,
    Full,
}

/// Which schedule-dependent fluents get fresh bounds after an LP.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundsMode {
    Conditions,
    All,
    Off,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub strategy: Strategy,
    pub encoding: EncodingKind,
    pub bounds: BoundsMode,
    pub epsilon: f64,
    pub timeout: Duration,
    /// `None` is greedy best-first; `Some(w)` is weighted A* with `f = g + w*h`.
    pub weight: Option<f64>,
    pub write_back: bool,
    /// States with more happenings are not expanded.
    pub max_happenings: Option<usize>,
    /// Every LP model is written here in LP text format, named by run number.
    pub lp_dump: Option<PathBuf>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            strategy: Strategy::Lazy,
            encoding: EncodingKind::Optimized,
            bounds: BoundsMode::Conditions,
            epsilon: 0.001,
            timeout: Duration::from_secs(1800),
            weight: None,
            write_back: true,
            max_happenings: None,
            lp_dump: None,
        }
    }
}

impl SearchConfig {
    /// The reference configuration for the always-LP baseline.
    pub fn always_lp() -> Self {
        SearchConfig { strategy: Strategy::AlwaysLp, encoding: EncodingKind::Full, ..SearchConfig::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchStatus {
    Solved,
    Unsolvable,
    Timeout,
}

impl fmt::Display for SearchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchStatus::Solved => "solved",
            SearchStatus::Unsolvable => "unsolvable",
            SearchStatus::Timeout => "timeout",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stats {
    pub plan_happenings: usize,
    pub states_expanded: usize,
    pub lp_runs: usize,
    pub lp_time_ms: f64,
    pub stn_checks: usize,
    pub total_time_ms: f64,
    pub status: SearchStatus,
    #[serde(skip)]
    pub states_generated: usize,
    /// LP goal checks issued.
    #[serde(skip)]
    pub goal_lp_checks: usize,
    /// States with no running actions, literal goals true, some dependent goal fluent, and `lpgc` set.
    #[serde(skip)]
    pub goal_candidates: usize,
    /// States with no running actions and all fact goals true.
    #[serde(skip)]
    pub fact_goal_states: usize,
    #[serde(skip)]
    pub objective_solves: usize,
}

impl Default for Stats {
    fn default() -> Self {
        Stats {
            plan_happenings: 0,
            states_expanded: 0,
            lp_runs: 0,
            lp_time_ms: 0.0,
            stn_checks: 0,
            total_time_ms: 0.0,
            status: SearchStatus::Unsolvable,
            states_generated: 0,
            goal_lp_checks: 0,
            goal_candidates: 0,
            fact_goal_states: 0,
            objective_solves: 0,
        }
    }
}

impl Stats {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("stats serialize")
    }
}

#[derive(Debug, Clone)]
pub struct PlanResult {
    pub plan: Option<Plan>,
    pub stats: Stats,
    pub status: SearchStatus,
    /// Snap sequence of the plan, one per happening.
    pub happenings: Vec<SnapRef>,
    /// Temporal network of the goal state.
    pub stn: Option<Stn>,
}

/// Why a successor was discarded.
#[derive(Debug, Clone, PartialEq)]
pub enum Pruned {
    Invariant,
    StnInconsistent,
    LpInconsistent,
    Unsupported(String),
}

impl From<EncodeError> for Pruned {
    fn from(e: EncodeError) -> Self {
        Pruned::Unsupported(e.to_string())
    }
}

/// Search context: the problem, configuration, solver, and counters.
pub struct Planner<'a> {
    pub problem: &'a GroundedProblem,
    pub config: SearchConfig,
    pub stats: Stats,
    solver: Simplex,
    relaxation: Relaxation,
    condition_fluents: FactSet,
    goal_fluents: FactSet,
}

impl<'a> Planner<'a> {
    pub fn new(problem: &'a GroundedProblem, config: SearchConfig) -> Self {
        let mut condition_fluents = FactSet::default();
        let mut goal_fluents = FactSet::default();
        for v in problem.goal.fluents() {
            condition_fluents.insert(v);
            goal_fluents.insert(v);
        }
        for a in &problem.instant {
            a.pre.fluents().for_each(|v| condition_fluents.insert(v));
        }
        for a in &problem.durative {
            for c in [&a.start_cond, &a.end_cond, &a.invariant] {
                c.fluents().for_each(|v| condition_fluents.insert(v));
            }
        }
        Planner {
            problem,
            config,
            stats: Stats::default(),
            solver: Simplex::default(),
            relaxation: Relaxation::new(problem),
            condition_fluents,
            goal_fluents,
        }
    }

    fn dump(&self, model: &LpModel, tag: &str) {
        if let Some(dir) = &self.config.lp_dump {
            let path = dir.join(format!("lp-{:06}-{tag}.lp", self.stats.lp_runs));
            if let Err(e) = std::fs::write(&path, to_lp_format(model)) {
                eprintln!("cannot write {}: {e}", path.display());
            }
        }
    }

    fn encode(&self, tl: &Timeline) -> Result<PlanEncoding, EncodeError> {
        let prefix: Prefix<'_> = tl.prefix(self.problem);
        match self.config.encoding {
            EncodingKind::Optimized => encode_optimized(&prefix),
            EncodingKind::Full => encode_full(&prefix),
        }
    }

    /// Applies `snap` to `s`; runs the LP when the strategy asks for it.
    pub fn apply(&mut self, s: &TemporalState, snap: SnapRef) -> Result<TemporalState, Pruned> {
        let p = self.problem;
        let mut tl = s.tl.push(p, snap, self.config.epsilon)?;
        self.stats.stn_checks += 1;
        if !tl.stn.is_consistent() {
            return Err(Pruned::StnInconsistent);
        }
        let provisional = TemporalState {
            bounds: carry_forward(s, &tl),
            tl: tl.clone(),
            lpgc: s.lpgc,
            last_lp: s.last_lp,
        };
        if !invariants_hold(p, &provisional) {
            return Err(Pruned::Invariant);
        }
        let run_lp = match self.config.strategy {
            Strategy::AlwaysLp => true,
            Strategy::Lazy => needs_lp(p, s, snap, &provisional),
        };
        let mut next = if run_lp {
            let n = tl.n();
            let enc = self.encode(&tl)?;
            let mut pairs = Vec::new();
            if self.config.write_back {
                pairs.push((0, n));
                let h = tl.happenings.last().expect("pushed");
                let starts: Vec<usize> = tl.running.iter().map(|r| r.1).filter(|&st| st < n).chain(h.start).collect();
                for (k, &a) in starts.iter().enumerate() {
                    pairs.push((a, n));
                    for &b in &starts[k + 1..] {
                        pairs.push((a.min(b), a.max(b)));
                    }
                }
            }
            let fluents: Vec<FluentId> = tl
                .tracker
                .dependent
                .iter()
                .filter(|&v| match self.config.bounds {
                    BoundsMode::All => true,
                    BoundsMode::Conditions => self.condition_fluents.contains(v),
                    BoundsMode::Off => false,
                })
                .collect();
            self.dump(&enc.model, "state");
            let t0 = Instant::now();
            let result = analyze(&enc, &self.solver, &pairs, &fluents);
            self.stats.lp_time_ms += t0.elapsed().as_secs_f64() * 1e3;
            self.stats.lp_runs += 1;
            let a = result.map_err(|e| Pruned::Unsupported(e.to_string()))?;
            self.stats.objective_solves += a.objective_solves;
            if !a.consistent {
                return Err(Pruned::LpInconsistent);
            }
            for t in &a.tightenings {
                let lb = if t.lb.is_finite() { t.lb - WRITE_BACK_SLACK } else { f64::NEG_INFINITY };
                let ub = if t.ub.is_finite() { t.ub + WRITE_BACK_SLACK } else { f64::INFINITY };
                if tl.stn.tighten(t.i, t.j, lb, ub) == Verdict::Inconsistent {
                    return Err(Pruned::StnInconsistent);
                }
            }
            for &(v, lb, ub) in &a.bounds {
                let flowing = tl.running.iter().any(|&(r, _)| p.durative[r].continuous.iter().any(|c| c.fluent == v));
                if ub - lb <= COLLAPSE_WIDTH && !flowing {
                    tl.resolve(v, 0.5 * (lb + ub));
                }
            }
            let bounds = literal_bounds(&tl.literal, &tl.tracker.dependent, &a.bounds);
            let last_lp = tl.n();
            TemporalState { tl, bounds, lpgc: s.lpgc, last_lp }
        } else {
            provisional
        };
        next.lpgc = s.lpgc || {
            let aff = affected(p, snap);
            aff.iter().any(|&v| next.dependent().contains(v) && self.goal_fluents.contains(v))
        };
        Ok(next)
    }

    /// Goal test for a freshly generated state; may run the LP goal check.
    pub fn goal_check(&mut self, s: &mut TemporalState) -> bool {
        let g = &self.problem.goal;
        if !s.running().is_empty() {
            return false;
        }
        if !g.facts_hold(&s.tl.facts) {
            return false;
        }
        self.stats.fact_goal_states += 1;
        if !g.numeric.iter().all(|c| s.literal_holds(c) != Some(false)) {
            return false;
        }
        let dependent_goal = g.fluents().any(|v| s.dependent().contains(v));
        if !dependent_goal {
            return true;
        }
        let check = match self.config.strategy {
            Strategy::Lazy => s.lpgc,
            Strategy::AlwaysLp => true,
        };
        if s.lpgc {
            self.stats.goal_candidates += 1;
        }
        if !check {
            return false;
        }
        s.lpgc = false;
        self.stats.goal_lp_checks += 1;
        self.lp_goal_check(s)
    }

    /// Feasibility of the prefix LP with the goal rows added.
    pub fn lp_goal_check(&mut self, s: &TemporalState) -> bool {
        let Ok(mut enc) = self.encode(&s.tl) else { return false };
        if enc.add_goal_rows(&self.problem.goal).is_err() {
            return false;
        }
        self.dump(&enc.model, "goal");
        let t0 = Instant::now();
        let sol = self.solver.solve(&enc.model);
        self.stats.lp_time_ms += t0.elapsed().as_secs_f64() * 1e3;
        self.stats.lp_runs += 1;
        matches!(sol, Ok(ref x) if x.status != Status::Infeasible)
    }

    /// Final LP over a goal state: goal rows plus the metric (or makespan) objective.
    pub fn schedule(&mut self, s: &TemporalState) -> Option<Plan> {
        let p = self.problem;
        let mut enc = self.encode(&s.tl).ok()?;
        enc.add_goal_rows(&p.goal).ok()?;
        let n = s.n();
        let makespan = Objective { sense: Sense::Minimize, terms: enc.time(n).terms, constant: 0.0 };
        let mut objectives = vec![makespan];
        if let Ok(Some((minimize, e))) = enc.metric(p) {
            let sense = if minimize { Sense::Minimize } else { Sense::Maximize };
            objectives.insert(0, Objective { sense, terms: e.terms, constant: e.constant });
        }
        self.dump(&enc.model, "schedule");
        let t0 = Instant::now();
        let sols = self.solver.solve_many(&enc.model, &objectives);
        self.stats.lp_time_ms += t0.elapsed().as_secs_f64() * 1e3;
        self.stats.lp_runs += 1;
        let sols = sols.ok()?;
        let sol = sols.iter().find(|x| x.status == Status::Optimal)?;
        let time = |h: usize| if h == 0 { 0.0 } else { sol.values[enc.time_vars[h - 1]] };
        let mut steps = Vec::new();
        for (k, hp) in s.tl.happenings.iter().enumerate() {
            let h = k + 1;
            match hp.snap {
                SnapRef::Instant(i) => {
                    steps.push(TimedAction { time: time(h), name: p.instant[i].display_name(), duration: None })
                }
                SnapRef::Start(a) => {
                    let end = s.tl.happenings.iter().position(|x| x.start == Some(h))? + 1;
                    steps.push(TimedAction {
                        time: time(h),
                        name: p.durative[a].display_name(),
                        duration: Some(time(end) - time(h)),
                    });
                }
                SnapRef::End(_) => {}
            }
        }
        Some(Plan { steps })
    }

    pub fn heuristic(&self, s: &TemporalState) -> Option<usize> {
        let snap = Snapshot { facts: &s.tl.facts, bounds: &s.bounds, running: s.running(), literal: &s.tl.literal };
        self.relaxation.estimate(self.problem, &snap)
    }

    fn priority(&self, g: usize, h: usize) -> i64 {
        match self.config.weight {
            None => h as i64,
            Some(w) => ((g as f64 + w * h as f64) * 1e6).round() as i64,
        }
    }

    /// Runs the search to completion, exhaustion or timeout.
    pub fn run(mut self) -> PlanResult {
        let start = Instant::now();
        let mut nodes: Vec<Rc<TemporalState>> = Vec::new();
        let mut open: BinaryHeap<Reverse<(i64, usize, usize)>> = BinaryHeap::new();
        let mut seen: HashSet<StateKey> = HashSet::new();

        let mut s0 = TemporalState::initial(self.problem);
        let finish = |mut this: Planner<'_>, status: SearchStatus, found: Option<(Plan, &TemporalState)>| {
            this.stats.total_time_ms = start.elapsed().as_secs_f64() * 1e3;
            this.stats.status = status;
            let (plan, happenings, stn) = match found {
                Some((p, s)) => (Some(p), s.tl.happenings.iter().map(|h| h.snap).collect(), Some(s.tl.stn.clone())),
                None => (None, Vec::new(), None),
            };
            this.stats.plan_happenings = happenings.len();
            PlanResult { plan, stats: this.stats, status, happenings, stn }
        };
        if self.goal_check(&mut s0) {
            return finish(self, SearchStatus::Solved, Some((Plan::default(), &s0)));
        }
        let Some(h0) = self.heuristic(&s0) else {
            return finish(self, SearchStatus::Unsolvable, None);
        };
        seen.insert(StateKey::of(&s0));
        open.push(Reverse((self.priority(0, h0), 0, 0)));
        nodes.push(Rc::new(s0));

        while let Some(Reverse((_, _, id))) = open.pop() {
            if start.elapsed() > self.config.timeout {
                return finish(self, SearchStatus::Timeout, None);
            }
            let s = Rc::clone(&nodes[id]);
            if self.config.max_happenings.is_some_and(|m| s.n() >= m) {
                continue;
            }
            self.stats.states_expanded += 1;
            for snap in applicable(self.problem, &s) {
                let Ok(mut next) = self.apply(&s, snap) else { continue };
                self.stats.states_generated += 1;
                if !seen.insert(StateKey::of(&next)) {
                    continue;
                }
                if self.goal_check(&mut next) {
                    if let Some(plan) = self.schedule(&next) {
                        return finish(self, SearchStatus::Solved, Some((plan, &next)));
                    }
                }
                let Some(h) = self.heuristic(&next) else { continue };
                let g = next.n();
                let key = (self.priority(g, h), g, nodes.len());
                nodes.push(Rc::new(next));
                open.push(Reverse(key));
                if start.elapsed() > self.config.timeout {
                    return finish(self, SearchStatus::Timeout, None);
                }
            }
        }
        finish(self, SearchStatus::Unsolvable, None)
    }
}

/// Bounds for `tl` derived from `s` without an LP: dependent fluents move by
/// their rate times the possible gap since the previous happening.
fn carry_forward(s: &TemporalState, tl: &Timeline) -> Rc<[(f64, f64)]> {
    let n = tl.n();
    let gap = tl.stn.bounds(n - 1, n).unwrap_or((0.0, f64::INFINITY));
    let dep = &tl.tracker.dependent;
    let carried: Vec<(FluentId, f64, f64)> = dep
        .iter()
        .filter(|&v| s.dependent().contains(v))
        .map(|v| {
            let (lb, ub) = s.bounds[v];
            let r = s.tl.rate(v);
            let d = if r >= 0.0 { (r * gap.0, r * gap.1) } else { (r * gap.1, r * gap.0) };
            let d = (if d.0.is_nan() { 0.0 } else { d.0 }, if d.1.is_nan() { 0.0 } else { d.1 });
            (v, lb + d.0, ub + d.1)
        })
        .collect();
    literal_bounds(&tl.literal, dep, &carried)
}

/// Searches `problem` under `config`.
pub fn search(problem: &GroundedProblem, config: SearchConfig) -> PlanResult {
    Planner::new(problem, config).run()
}
