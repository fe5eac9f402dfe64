//! Small random temporal-numeric domains: up to 4 fluents and 5 single-use
//! actions, so no plan exceeds 10 happenings.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Generated;

const PREDICATES: usize = 4;

fn cond_numeric(rng: &mut ChaCha8Rng, fluents: usize, lo: i32, hi: i32) -> String {
    let x = rng.gen_range(0..fluents);
    let c = rng.gen_range(lo..=hi);
    if rng.gen_bool(0.6) {
        format!("(>= (x{x}) {c})")
    } else {
        format!("(<= (x{x}) {})", c + 4)
    }
}

fn action(rng: &mut ChaCha8Rng, i: usize, fluents: usize, added: &mut Vec<usize>) -> String {
    let durative = rng.gen_bool(0.7);
    let mut pre = vec![format!("(fresh{i})")];
    if rng.gen_bool(0.5) {
        pre.push(format!("(p{})", rng.gen_range(0..PREDICATES)));
    }
    if rng.gen_bool(0.4) {
        pre.push(cond_numeric(rng, fluents, -1, 4));
    }
    let add = rng.gen_range(0..PREDICATES);
    added.push(add);
    let mut eff = vec![format!("(not (fresh{i}))"), format!("(p{add})")];
    if rng.gen_bool(0.3) {
        let del = rng.gen_range(0..PREDICATES);
        if del != add {
            eff.push(format!("(not (p{del}))"));
        }
    }
    let mut xs: Vec<usize> = (0..fluents).collect();
    xs.shuffle(rng);
    let mut xs = xs.into_iter();

    if !durative {
        if rng.gen_bool(0.5) {
            if let Some(x) = xs.next() {
                let c = rng.gen_range(1..=3);
                eff.push(if rng.gen_bool(0.7) { format!("(increase (x{x}) {c})") } else { format!("(assign (x{x}) {c})") });
            }
        }
        return format!(
            "  (:action a{i} :parameters ()\n    :precondition (and {})\n    :effect (and {}))\n",
            pre.join(" "),
            eff.join(" ")
        );
    }

    let duration = if rng.gen_bool(0.5) {
        format!("(= ?duration {})", rng.gen_range(1..=5))
    } else {
        format!("(and (>= ?duration {}) (<= ?duration {}))", rng.gen_range(1..=3), rng.gen_range(4..=8))
    };
    let mut cond: Vec<String> = pre.iter().map(|c| format!("(at start {c})")).collect();
    if rng.gen_bool(0.3) {
        cond.push(format!("(over all {})", cond_numeric(rng, fluents, -3, 0)));
    }
    if rng.gen_bool(0.25) {
        cond.push(format!("(at end {})", cond_numeric(rng, fluents, -1, 3)));
    }
    let (first, rest) = eff.split_at(1);
    let mut effects = vec![format!("(at start {})", first[0])];
    effects.extend(rest.iter().map(|e| format!("(at end {e})")));
    if rng.gen_bool(0.6) {
        if let Some(x) = xs.next() {
            let r = *[0.5, 1.0, 2.0].choose(rng).expect("nonempty");
            let op = if rng.gen_bool(0.7) { "increase" } else { "decrease" };
            effects.push(format!("({op} (x{x}) (* #t {r}))"));
        }
    }
    if rng.gen_bool(0.3) {
        if let Some(x) = xs.next() {
            let c = rng.gen_range(1..=2);
            effects.push(if rng.gen_bool(0.5) {
                format!("(at end (increase (x{x}) (* ?duration {c})))")
            } else {
                format!("(at end (decrease (x{x}) {c}))")
            });
        }
    }
    format!(
        "  (:durative-action a{i} :parameters ()\n    :duration {duration}\n    :condition (and {})\n    :effect (and {}))\n",
        cond.join(" "),
        effects.join(" ")
    )
}

/// A random micro problem; the same seed gives the same text.
pub fn gen_micro(seed: u64) -> Generated {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fluents = rng.gen_range(1..=4);
    let actions = rng.gen_range(2..=5);
    let mut added = Vec::new();
    let mut body = String::new();
    for i in 0..actions {
        body.push_str(&action(&mut rng, i, fluents, &mut added));
    }
    let preds: String = (0..PREDICATES).map(|p| format!(" (p{p})")).chain((0..actions).map(|i| format!(" (fresh{i})"))).collect();
    let funcs: String = (0..fluents).map(|x| format!(" (x{x})")).collect();
    let domain = format!(
        "(define (domain micro-{seed})\n  (:requirements :durative-actions :fluents :continuous-effects)\n  (:predicates{preds})\n  (:functions{funcs})\n{body})\n"
    );

    let mut init: Vec<String> = (0..actions).map(|i| format!("(fresh{i})")).collect();
    for x in 0..fluents {
        init.push(format!("(= (x{x}) {})", rng.gen_range(0..=3)));
    }
    added.sort_unstable();
    added.dedup();
    let mut goal: Vec<String> = Vec::new();
    let n_goals = rng.gen_range(1..=2).min(added.len());
    for &g in added.choose_multiple(&mut rng, n_goals) {
        goal.push(format!("(p{g})"));
    }
    if rng.gen_bool(0.4) {
        goal.push(format!("(>= (x{}) {})", rng.gen_range(0..fluents), rng.gen_range(0..=6)));
    }
    let problem = format!(
        "(define (problem micro-{seed}-p)\n  (:domain micro-{seed})\n  (:init {})\n  (:goal (and {})))\n",
        init.join(" "),
        goal.join(" ")
    );
    Generated { domain, problem }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pddl::load;

    #[test]
    fn micro_problems_ground_within_limits() {
        for seed in 0..300 {
            let g = gen_micro(seed);
            let p = load(&g.domain, &g.problem).unwrap_or_else(|e| panic!("seed {seed}: {e}\n{}", g.domain));
            assert!(p.fluents.len() <= 4);
            assert!(p.instant.len() + p.durative.len() <= 6);
        }
    }
}
