//! Shared fixtures for the integration suites.
#![allow(dead_code)]

use lazyplan::benchgen::{gen_generator, gen_micro};
use lazyplan::encoding::Timeline;
use lazyplan::model::{GroundedProblem, SnapRef};
use lazyplan::pddl::load;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const EPSILON: f64 = 0.001;

/// Snaps whose propositional conditions hold; numeric conditions are left
/// for the encodings to judge.
fn candidates(p: &GroundedProblem, t: &Timeline) -> Vec<SnapRef> {
    let mut out = Vec::new();
    for (i, a) in p.instant.iter().enumerate() {
        if a.pre.facts_hold(&t.facts) {
            out.push(SnapRef::Instant(i));
        }
    }
    for (i, a) in p.durative.iter().enumerate() {
        if t.start_of(i).is_some() {
            if a.end_cond.facts_hold(&t.facts) {
                out.push(SnapRef::End(i));
            }
        } else if a.start_cond.facts_hold(&t.facts) {
            out.push(SnapRef::Start(i));
        }
    }
    out
}

/// A random prefix over a micro domain, or over a generator instance for
/// every fifth seed. The prefix may be temporally or numerically infeasible.
pub fn random_prefix(seed: u64) -> (GroundedProblem, Timeline) {
    let g = if seed % 5 == 4 { gen_generator(1 + (seed as usize / 5) % 3, seed) } else { gen_micro(seed) };
    let p = load(&g.domain, &g.problem).expect("generated problems load");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let len = rng.gen_range(1..=8);
    let mut t = Timeline::new(&p);
    for _ in 0..len {
        let c = candidates(&p, &t);
        let Some(&snap) = c.choose(&mut rng) else { break };
        match t.push(&p, snap, EPSILON) {
            Ok(next) => t = next,
            Err(_) => break,
        }
    }
    (p, t)
}

/// What the two encodings of one random prefix said.
#[derive(Debug, Default)]
pub struct EncodingComparison {
    pub seed: u64,
    pub n: usize,
    /// Fluents encoded by the full form.
    pub m: usize,
    pub full_vars: usize,
    pub opt_vars: usize,
    /// Both encoders refused the prefix.
    pub both_failed: bool,
    /// Exactly one encoder refused.
    pub one_failed: bool,
    pub full_feasible: bool,
    pub opt_feasible: bool,
    /// Largest gap between co-encoded fluent bounds; 0 when infeasible.
    pub max_bound_gap: f64,
    /// Some encoded fluent has no discrete effect at some happening.
    pub unaffected: bool,
}

fn gap(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else if a.is_infinite() || b.is_infinite() {
        f64::INFINITY
    } else {
        (a - b).abs() / (1.0 + a.abs().max(b.abs()))
    }
}

pub fn compare_encodings(seed: u64) -> EncodingComparison {
    use lazyplan::encoding::{check_consistency, encode_full, encode_optimized, extract_bounds, Consistency};
    use lazyplan::lp::Simplex;
    use lazyplan::model::DiscreteEffect;

    let (p, t) = random_prefix(seed);
    let prefix = t.prefix(&p);
    let mut c = EncodingComparison { seed, n: t.n(), ..Default::default() };
    let (full, opt) = match (encode_full(&prefix), encode_optimized(&prefix)) {
        (Ok(f), Ok(o)) => (f, o),
        (Err(_), Err(_)) => {
            c.both_failed = true;
            return c;
        }
        _ => {
            c.one_failed = true;
            return c;
        }
    };
    c.m = full.dependent_count;
    c.full_vars = full.model.var_count();
    c.opt_vars = opt.model.var_count();
    let dependent = prefix.ever_dependent();
    c.unaffected = t.happenings.iter().any(|h| {
        let effects = p.snap(h.snap).effects;
        dependent.iter().any(|&v| !effects.iter().any(|e| matches!(e, DiscreteEffect::Numeric(n) if n.fluent == v)))
    });

    let s = Simplex::default();
    c.full_feasible = check_consistency(&full, &s, &[]).expect("solver") != Consistency::Inconsistent;
    c.opt_feasible = check_consistency(&opt, &s, &[]).expect("solver") != Consistency::Inconsistent;
    if c.full_feasible && c.opt_feasible {
        let fb = extract_bounds(&full, &s, &dependent).expect("solver").expect("feasible");
        let ob = extract_bounds(&opt, &s, &dependent).expect("solver").expect("feasible");
        if fb.len() != ob.len() {
            c.max_bound_gap = f64::INFINITY;
        }
        for (a, b) in fb.iter().zip(&ob) {
            let g = if a.0 != b.0 { f64::INFINITY } else { gap(a.1, b.1).max(gap(a.2, b.2)) };
            c.max_bound_gap = c.max_bound_gap.max(g);
        }
    }
    c
}
