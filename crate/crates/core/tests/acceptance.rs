//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use lazyplan::benchgen::{gen_generator, gen_micro, Family, GenSpec};
use lazyplan::encoding::{analyze, check_consistency, encode_optimized, Consistency, Timeline};
use lazyplan::lp::{LpModel, LpSolver, Objective, RowCmp, Sense, Simplex, Status};
use lazyplan::model::SnapRef::{End, Start};
use lazyplan::pddl::load;
use lazyplan::plan::Plan;
use lazyplan::search::{search, SearchConfig, SearchStatus};
use lazyplan::stn::{Stn, Verdict};
use lazyplan::validator::{simulate, validate, FailureKind, DEFAULT_EPSILON};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// pinned tolerances and budgets
const MICRO_PROBLEMS: u64 = 200;
const MICRO_MAX_HAPPENINGS: usize = 10;
const MICRO_BUDGET: Duration = Duration::from_secs(300);
const PREFIXES: u64 = 300;
const BOUND_TOL: f64 = 1e-6;
const TIGHTENING_TOL: f64 = 1e-6;
const CARPOOL_BUDGET: Duration = Duration::from_secs(600);
const REDUCTION_FLOOR: f64 = 0.20;
const GEN1_BUDGET: Duration = Duration::from_secs(5);
const GEN1_HAPPENINGS: usize = 4;
const FUEL_GOAL: f64 = 10.0;
const MUTANTS: usize = 100;
const STN_NETWORKS: u64 = 500;
const STN_MAX_NODES: usize = 12;
const STN_TOL: f64 = 1e-9;
const LPS: u64 = 100;
const OBJ_TOL: f64 = 1e-6;
const VERTEX_TOL: f64 = 1e-7;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

// 1
fn strategy_equivalence() -> Outcome {
    let t0 = Instant::now();
    let mut mismatches = Vec::new();
    let mut invalid = Vec::new();
    let mut too_long = Vec::new();
    let (mut solved, mut unsolvable) = (0, 0);
    for seed in 0..MICRO_PROBLEMS {
        let g = gen_micro(seed);
        let p = load(&g.domain, &g.problem).expect("micro problems load");
        let lazy = search(&p, SearchConfig::default());
        let always = search(&p, SearchConfig::always_lp());
        if lazy.status != always.status || lazy.status == SearchStatus::Timeout {
            mismatches.push(seed);
        }
        match lazy.status {
            SearchStatus::Solved => solved += 1,
            SearchStatus::Unsolvable => unsolvable += 1,
            SearchStatus::Timeout => {}
        }
        for r in [&lazy, &always] {
            if let Some(plan) = &r.plan {
                if !validate(&p, plan).is_ok_and(|v| v.valid) {
                    invalid.push(seed);
                }
                if r.happenings.len() > MICRO_MAX_HAPPENINGS {
                    too_long.push(seed);
                }
            }
        }
    }
    let elapsed = t0.elapsed();
    outcome(
        mismatches.is_empty() && invalid.is_empty() && too_long.is_empty() && elapsed < MICRO_BUDGET,
        format!(
            "{solved} solved, {unsolvable} unsolvable; status mismatches {mismatches:?}; invalid plans {invalid:?}; over {MICRO_MAX_HAPPENINGS} happenings {too_long:?}; {:.1}s (budget {}s)",
            elapsed.as_secs_f64(),
            MICRO_BUDGET.as_secs()
        ),
    )
}

// 2 and 6 share the prefixes
fn encoding_suite() -> (Outcome, Outcome) {
    let runs: Vec<_> = (0..PREFIXES).map(common::compare_encodings).collect();
    let built: Vec<_> = runs.iter().filter(|c| !c.both_failed).collect();
    let one_failed: Vec<u64> = runs.iter().filter(|c| c.one_failed).map(|c| c.seed).collect();
    let disagree: Vec<u64> = built.iter().filter(|c| c.full_feasible != c.opt_feasible).map(|c| c.seed).collect();
    let worst = built.iter().map(|c| c.max_bound_gap).fold(0.0, f64::max);
    let feasible = built.iter().filter(|c| c.full_feasible && c.m > 0).count();
    let two = outcome(
        one_failed.is_empty() && disagree.is_empty() && worst <= BOUND_TOL,
        format!(
            "{} prefixes encoded, {feasible} feasible with dependent fluents; feasibility disagreements {disagree:?}; one-sided failures {one_failed:?}; worst bound gap {worst:.2e} (tol {BOUND_TOL:.0e})",
            built.len()
        ),
    );

    let below: Vec<u64> = built.iter().filter(|c| c.full_vars < c.n * (2 * c.m + 1)).map(|c| c.seed).collect();
    let above: Vec<u64> = built.iter().filter(|c| c.opt_vars > c.full_vars).map(|c| c.seed).collect();
    let strict_cases: Vec<_> = built.iter().filter(|c| c.m > 0 && c.unaffected).collect();
    let not_strict: Vec<u64> = strict_cases.iter().filter(|c| c.opt_vars >= c.full_vars).map(|c| c.seed).collect();
    let six = outcome(
        below.is_empty() && above.is_empty() && not_strict.is_empty() && !strict_cases.is_empty(),
        format!(
            "full below n(2m+1): {below:?}; optimized above full: {above:?}; {} prefixes with an unaffected fluent, not strictly smaller: {not_strict:?}",
            strict_cases.len()
        ),
    );
    (two, six)
}

// 3
fn overlap_regression() -> Outcome {
    const DOMAIN: &str = "(define (domain overlap)
      (:requirements :durative-actions :fluents :continuous-effects)
      (:functions (v))
      (:durative-action a :parameters () :duration (= ?duration 10)
        :condition (and) :effect (and (increase (v) (* #t 1))))
      (:durative-action b :parameters () :duration (= ?duration 10)
        :condition (and (at start (<= (v) 3))) :effect (and))
      (:durative-action c :parameters () :duration (= ?duration 5)
        :condition (and) :effect (and)))";
    const PROBLEM: &str = "(define (problem overlap-1) (:domain overlap) (:init (= (v) 0)) (:goal (and)))";
    let p = load(DOMAIN, PROBLEM).expect("loads");
    let id = |n: &str| p.durative_by_name(n).expect("action");
    let (a, b, c) = (id("(a)"), id("(b)"), id("(c)"));
    let seq = [Start(a), Start(b), End(a), Start(c), End(c), End(b)];
    let solver = Simplex::default();
    let eps = DEFAULT_EPSILON;

    let mut plain = Timeline::new(&p);
    let mut first_lp_conflict = None;
    for (k, &s) in seq.iter().enumerate() {
        plain = plain.push(&p, s, eps).expect("push");
        let lp = check_consistency(&encode_optimized(&plain.prefix(&p)).expect("encode"), &solver, &[]).expect("lp");
        if lp == Consistency::Inconsistent && first_lp_conflict.is_none() {
            first_lp_conflict = Some(k + 1);
        }
    }
    let stn_alone = plain.stn.is_consistent();

    // write back the LP bound found once b has started
    let mut wb = Timeline::new(&p);
    for &s in &seq[..2] {
        wb = wb.push(&p, s, eps).expect("push");
    }
    let r = analyze(&encode_optimized(&wb.prefix(&p)).expect("encode"), &solver, &[(1, 2)], &[]).expect("lp");
    let tight = r.tightenings.iter().find(|t| (t.i, t.j) == (1, 2)).copied();
    let ub_ok = tight.is_some_and(|t| (t.ub - 3.0).abs() <= TIGHTENING_TOL);
    if let Some(t) = tight {
        wb.stn.tighten(t.i, t.j, t.lb, t.ub);
    }
    let mut first_stn_conflict = None;
    for (k, &s) in seq.iter().enumerate().skip(2) {
        wb = wb.push(&p, s, eps).expect("push");
        if !wb.stn.is_consistent() && first_stn_conflict.is_none() {
            first_stn_conflict = Some(k + 1);
        }
    }
    outcome(
        stn_alone && first_lp_conflict.is_some() && ub_ok && first_stn_conflict.is_some() && first_stn_conflict == first_lp_conflict,
        format!(
            "STN alone consistent: {stn_alone}; LP first inconsistent at happening {first_lp_conflict:?}; written-back bound {:?} (expect ub 3 within {TIGHTENING_TOL:.0e}); STN with write-back inconsistent at {first_stn_conflict:?}",
            tight.map(|t| (t.lb, t.ub))
        ),
    )
}

// 4
fn carpool_reduction() -> Outcome {
    let t0 = Instant::now();
    let mut rows = Vec::new();
    let mut ok = true;
    let mut reductions = Vec::new();
    for k in 1..=5 {
        let g = GenSpec::ladder(Family::Carpool, k, 1).generate();
        let p = load(&g.domain, &g.problem).expect("loads");
        let budget = CARPOOL_BUDGET.saturating_sub(t0.elapsed());
        let lazy = search(&p, SearchConfig { timeout: budget, ..SearchConfig::default() });
        let budget = CARPOOL_BUDGET.saturating_sub(t0.elapsed());
        let always = search(&p, SearchConfig { timeout: budget, ..SearchConfig::always_lp() });
        let solved = lazy.status == SearchStatus::Solved && always.status == SearchStatus::Solved;
        let valid = lazy.plan.as_ref().is_some_and(|pl| validate(&p, pl).is_ok_and(|v| v.valid));
        let (l, a) = (lazy.stats.lp_runs, always.stats.lp_runs);
        ok &= solved && valid && l < a;
        if solved {
            reductions.push(1.0 - l as f64 / a as f64);
        }
        rows.push(format!("#{k} {l}/{a}{}", if solved { "" } else { " unsolved" }));
    }
    let mean = if reductions.len() == 5 { reductions.iter().sum::<f64>() / 5.0 } else { 0.0 };
    let elapsed = t0.elapsed();
    outcome(
        ok && mean >= REDUCTION_FLOOR && elapsed < CARPOOL_BUDGET,
        format!(
            "lazy/always lp_runs {}; mean reduction {:.1}% (floor {:.0}%); {:.1}s (budget {}s)",
            rows.join(", "),
            100.0 * mean,
            100.0 * REDUCTION_FLOOR,
            elapsed.as_secs_f64(),
            CARPOOL_BUDGET.as_secs()
        ),
    )
}

// 5
fn goal_check_economy() -> Outcome {
    let mut ok = true;
    let mut rows = Vec::new();
    for k in 1..=5 {
        let g = gen_generator(k, 0);
        let p = load(&g.domain, &g.problem).expect("loads");
        let r = search(&p, SearchConfig::default());
        let s = &r.stats;
        ok &= r.status == SearchStatus::Solved && s.goal_lp_checks == s.goal_candidates && s.goal_candidates < s.fact_goal_states;
        rows.push(format!("#{k} checks {} candidates {} fact-goal {}", s.goal_lp_checks, s.goal_candidates, s.fact_goal_states));
    }
    outcome(ok, format!("{} (need checks == candidates < fact-goal)", rows.join("; ")))
}

// 7
fn generator_one_shape() -> Outcome {
    let t0 = Instant::now();
    let g = gen_generator(1, 0);
    let p = load(&g.domain, &g.problem).expect("loads");
    let r = search(&p, SearchConfig::default());
    let elapsed = t0.elapsed();
    let Some(plan) = r.plan else {
        return outcome(false, format!("status {}", r.status));
    };
    let span = |prefix: &str| {
        plan.steps.iter().find(|s| s.name.starts_with(prefix)).map(|s| (s.time, s.time + s.duration.unwrap_or(0.0)))
    };
    let inside = match (span("(generate"), span("(refuel")) {
        (Some(gen), Some(re)) => gen.0 < re.0 && re.1 < gen.1,
        _ => false,
    };
    let fuel = p.fluent_id("(fuellevel gen)").expect("fluent");
    let trace = simulate(&p, &plan, DEFAULT_EPSILON).expect("well formed");
    let end_fuel = trace.final_values[fuel].unwrap_or(f64::NAN);
    outcome(
        r.happenings.len() == GEN1_HAPPENINGS && inside && end_fuel >= FUEL_GOAL - BOUND_TOL && trace.verdict.valid && elapsed < GEN1_BUDGET,
        format!(
            "{} happenings (want {GEN1_HAPPENINGS}); refuel strictly inside generate: {inside}; end fuel {end_fuel:.4} (want >= {FUEL_GOAL}); valid {}; {:.3}s (budget {}s)",
            r.happenings.len(),
            trace.verdict.valid,
            elapsed.as_secs_f64(),
            GEN1_BUDGET.as_secs()
        ),
    )
}

// 8
fn validator_cross_check() -> Outcome {
    let bases: Vec<_> = (1..=5)
        .map(|k| {
            let g = gen_generator(k, 0);
            let p = load(&g.domain, &g.problem).expect("loads");
            let plan = search(&p, SearchConfig::default()).plan.expect("generator ladder solves");
            (p, plan)
        })
        .collect();
    let kinds = [FailureKind::Duration, FailureKind::Separation, FailureKind::Invariant, FailureKind::Goal];
    let (mut expected_seen, mut false_accepts, mut built) = (0, 0, 0);
    let mut misses = Vec::new();
    for i in 0..MUTANTS {
        let kind = kinds[i % 4];
        let (p, base) = &bases[(i / 4) % 5];
        let j = (i / 20) as f64;
        let Some(plan) = mutate(p, base, kind, i, j) else { continue };
        built += 1;
        match validate(p, &plan) {
            Ok(v) => {
                if v.valid {
                    false_accepts += 1;
                }
                if v.has(kind) {
                    expected_seen += 1;
                } else {
                    misses.push(format!("#{i} {kind}"));
                }
            }
            Err(e) => misses.push(format!("#{i} malformed: {e}")),
        }
    }
    outcome(
        built == MUTANTS && expected_seen == MUTANTS && false_accepts == 0,
        format!("{built} mutants, {expected_seen} with the expected failure, {false_accepts} false accepts; misses {misses:?}"),
    )
}

fn refuels(plan: &Plan) -> Vec<usize> {
    plan.steps.iter().enumerate().filter(|(_, s)| s.name.starts_with("(refuel")).map(|(k, _)| k).collect()
}

fn mutate(p: &lazyplan::model::GroundedProblem, base: &Plan, kind: FailureKind, i: usize, j: f64) -> Option<Plan> {
    let mut plan = base.clone();
    let rs = refuels(&plan);
    let gen = plan.steps.iter().position(|s| s.name.starts_with("(generate"))?;
    let r = rs[i % rs.len()];
    match kind {
        FailureKind::Duration => {
            // alternate above the maximum and below the minimum
            let d = if i % 8 < 4 { 15.5 + 0.25 * j } else { 7.5 - 0.25 * j };
            plan.steps[r].duration = Some(d);
        }
        FailureKind::Separation => {
            plan.steps[r].time = plan.steps[gen].time + DEFAULT_EPSILON * (0.2 + 0.1 * j);
        }
        FailureKind::Invariant => {
            // refuel now happens before generate starts
            let (tg, tr) = (plan.steps[gen].time, plan.steps[r].time);
            plan.steps[gen].time = tr;
            plan.steps[r].time = tg;
        }
        FailureKind::Goal => {
            // shrink refuels, longest first, until the end fuel drops below the goal
            let fuel = p.fluent_id("(fuellevel gen)")?;
            let end = simulate(p, base, DEFAULT_EPSILON).ok()?.final_values[fuel]?;
            let mut need = (end - FUEL_GOAL) / 2.0 + 0.25 + 0.05 * j;
            let mut order = rs.clone();
            order.sort_by(|a, b| plan.steps[*b].duration.partial_cmp(&plan.steps[*a].duration).expect("finite"));
            for k in order {
                let d = plan.steps[k].duration?;
                let cut = need.min(d - 8.0).max(0.0);
                plan.steps[k].duration = Some(d - cut);
                need -= cut;
            }
            if need > 0.0 {
                return None;
            }
        }
        _ => return None,
    }
    Some(plan)
}

// 9
fn micro_oracles() -> Outcome {
    let mut stn_bad = Vec::new();
    for seed in 0..STN_NETWORKS {
        if !stn_matches_floyd_warshall(seed) {
            stn_bad.push(seed);
        }
    }
    let mut lp_bad = Vec::new();
    let (mut optimal, mut infeasible) = (0, 0);
    for seed in 0..LPS {
        match lp_matches_vertices(seed) {
            Some(true) => optimal += 1,
            Some(false) => infeasible += 1,
            None => lp_bad.push(seed),
        }
    }
    outcome(
        stn_bad.is_empty() && lp_bad.is_empty(),
        format!(
            "STN vs Floyd-Warshall: {} / {STN_NETWORKS} networks differ {stn_bad:?}; simplex vs vertices: {} / {LPS} differ {lp_bad:?} ({optimal} optimal, {infeasible} infeasible; tol {OBJ_TOL:.0e})",
            stn_bad.len(),
            lp_bad.len()
        ),
    )
}

fn floyd_warshall(n: usize, edges: &[(usize, usize, f64)]) -> Vec<Vec<f64>> {
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for &(u, v, w) in edges {
        d[u][v] = d[u][v].min(w);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

fn stn_matches_floyd_warshall(seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nodes = rng.gen_range(2..=STN_MAX_NODES);
    let mut stn = Stn::new();
    // every happening comes after the origin
    let mut edges = Vec::new();
    for _ in 1..nodes {
        let j = stn.add_happening();
        edges.push((j, 0, 0.0));
    }
    let count = rng.gen_range(1..=2 * nodes);
    for _ in 0..count {
        let i = rng.gen_range(0..nodes);
        let j = rng.gen_range(0..nodes);
        if i == j {
            continue;
        }
        let lb = if rng.gen_bool(0.8) { rng.gen_range(-10..=10) as f64 } else { f64::NEG_INFINITY };
        let ub = if rng.gen_bool(0.8) { lb.max(-10.0) + rng.gen_range(0..=15) as f64 } else { f64::INFINITY };
        let verdict = stn.add_constraint(i, j, lb, ub);
        if ub.is_finite() {
            edges.push((i, j, ub));
        }
        if lb.is_finite() {
            edges.push((j, i, -lb));
        }
        let d = floyd_warshall(nodes, &edges);
        let consistent = (0..nodes).all(|k| d[k][k] >= -STN_TOL);
        if (verdict == Verdict::Consistent) != consistent || stn.is_consistent() != consistent {
            return false;
        }
        if !consistent {
            return true;
        }
        for a in 0..nodes {
            for b in 0..nodes {
                let Ok((lo, hi)) = stn.bounds(a, b) else { return false };
                let close = |x: f64, y: f64| x == y || (x - y).abs() <= STN_TOL;
                if !close(hi, d[a][b]) || !close(lo, -d[b][a]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Solves `a x = b` by Gaussian elimination; `None` when singular.
fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).expect("finite"))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// `Some(true)` when both agree on an optimum, `Some(false)` when both say
/// infeasible, `None` on disagreement.
fn lp_matches_vertices(seed: u64) -> Option<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nv = rng.gen_range(2..=3);
    let mut m = LpModel::new();
    let mut bounds = Vec::new();
    for k in 0..nv {
        let lo = rng.gen_range(-5..=2) as f64;
        let hi = lo + rng.gen_range(1..=8) as f64;
        m.add_var(format!("x{k}"), lo, hi);
        bounds.push((lo, hi));
    }
    // hyperplanes as (coefficients, rhs, cmp)
    let mut planes: Vec<(Vec<f64>, f64, RowCmp)> = Vec::new();
    for r in 0..rng.gen_range(1..=4) {
        let coef: Vec<f64> = (0..nv).map(|_| rng.gen_range(-4..=4) as f64).collect();
        let rhs = rng.gen_range(-6..=10) as f64;
        let cmp = match rng.gen_range(0..10) {
            0 => RowCmp::Eq,
            1..=5 => RowCmp::Le,
            _ => RowCmp::Ge,
        };
        let terms: Vec<(usize, f64)> = coef.iter().copied().enumerate().collect();
        m.add_row(format!("r{r}"), &terms, cmp, rhs);
        planes.push((coef, rhs, cmp));
    }
    let obj: Vec<f64> = (0..nv).map(|_| rng.gen_range(-5..=5) as f64).collect();
    let sense = if rng.gen_bool(0.5) { Sense::Minimize } else { Sense::Maximize };
    let terms: Vec<(usize, f64)> = obj.iter().copied().enumerate().collect();
    m.objective = Some(Objective { sense, terms, constant: 0.0 });

    let feasible = |x: &[f64]| {
        bounds.iter().zip(x).all(|(&(lo, hi), &v)| v >= lo - VERTEX_TOL && v <= hi + VERTEX_TOL)
            && planes.iter().all(|(c, rhs, cmp)| {
                let l: f64 = c.iter().zip(x).map(|(a, b)| a * b).sum();
                match cmp {
                    RowCmp::Le => l <= rhs + VERTEX_TOL,
                    RowCmp::Ge => l >= rhs - VERTEX_TOL,
                    RowCmp::Eq => (l - rhs).abs() <= VERTEX_TOL,
                }
            })
    };
    let mut all = planes.iter().map(|(c, r, _)| (c.clone(), *r)).collect::<Vec<_>>();
    for (k, &(lo, hi)) in bounds.iter().enumerate() {
        let mut e = vec![0.0; nv];
        e[k] = 1.0;
        all.push((e.clone(), lo));
        all.push((e, hi));
    }
    let mut best: Option<f64> = None;
    for pick in combinations(all.len(), nv) {
        let a = pick.iter().map(|&i| all[i].0.clone()).collect();
        let b = pick.iter().map(|&i| all[i].1).collect();
        let Some(x) = solve_square(a, b) else { continue };
        if !feasible(&x) {
            continue;
        }
        let v: f64 = obj.iter().zip(&x).map(|(a, b)| a * b).sum();
        best = Some(match (best, sense) {
            (None, _) => v,
            (Some(b), Sense::Minimize) => b.min(v),
            (Some(b), Sense::Maximize) => b.max(v),
        });
    }
    let sol = Simplex::default().solve(&m).ok()?;
    match (best, sol.status) {
        (None, Status::Infeasible) => Some(false),
        (Some(b), Status::Optimal) if (b - sol.objective).abs() <= OBJ_TOL * (1.0 + b.abs()) => Some(true),
        _ => None,
    }
}

fn main() {
    let (two, six) = encoding_suite();
    let results = [
        (1, "strategy equivalence", strategy_equivalence()),
        (2, "encoding equivalence", two),
        (3, "write-back regression", overlap_regression()),
        (4, "lp-run reduction", carpool_reduction()),
        (5, "goal-check economy", goal_check_economy()),
        (6, "variable-count bound", six),
        (7, "generator instance 1 plan shape", generator_one_shape()),
        (8, "validator cross-check", validator_cross_check()),
        (9, "stn/lp micro-oracles", micro_oracles()),
    ];
    let mut failed = 0;
    for (id, name, o) in &results {
        println!("criterion {id} {}: {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
