//! Linear generator with variable-duration refuelling and an end-fuel goal.
//!
//! Drain is 1 per time unit, each refuel adds 2 per time unit for 8 to 15
//! units. Instance `k` starts with 10 fuel and runs the generator for
//! `30k - 4`, so `k - 1` refuels at full length leave end fuel below 10
//! while `k` refuels can reach it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{num, Generated};

const DOMAIN: &str = "(define (domain linear-generator)
  (:requirements :typing :durative-actions :fluents :continuous-effects)
  (:types generator tank)
  (:predicates (generator-ran) (generating ?g - generator) (available ?t - tank))
  (:functions (fuelLevel ?g - generator) (drain-rate ?g - generator) (gen-time ?g - generator)
              (refuel-rate ?g - generator) (tank-capacity ?t - tank))
  (:durative-action generate
    :parameters (?g - generator)
    :duration (= ?duration (gen-time ?g))
    :condition (and (over all (>= (fuelLevel ?g) 0)))
    :effect (and (at start (generating ?g))
                 (at end (not (generating ?g)))
                 (at end (generator-ran))
                 (decrease (fuelLevel ?g) (* #t (drain-rate ?g)))))
  (:durative-action refuel
    :parameters (?g - generator ?t - tank)
    :duration (and (>= ?duration 8) (<= ?duration 15)
                   (<= ?duration (/ (tank-capacity ?t) (refuel-rate ?g))))
    :condition (and (at start (available ?t)) (over all (generating ?g)))
    :effect (and (at start (not (available ?t)))
                 (increase (fuelLevel ?g) (* #t (refuel-rate ?g))))))
";

fn problem(tanks: usize, init_fuel: f64, gen_time: f64, capacities: &[f64]) -> String {
    let mut s = format!("(define (problem generator-{tanks})\n  (:domain linear-generator)\n  (:objects gen - generator");
    for t in 1..=tanks {
        s.push_str(&format!(" tank{t}"));
    }
    if tanks > 0 {
        s.push_str(" - tank");
    }
    s.push_str(")\n  (:init\n");
    s.push_str(&format!("    (= (fuelLevel gen) {})\n", num(init_fuel)));
    s.push_str(&format!("    (= (gen-time gen) {})\n", num(gen_time)));
    s.push_str("    (= (drain-rate gen) 1)\n    (= (refuel-rate gen) 2)\n");
    for (t, c) in capacities.iter().enumerate() {
        s.push_str(&format!("    (available tank{})\n    (= (tank-capacity tank{}) {})\n", t + 1, t + 1, num(*c)));
    }
    s.push_str("  )\n  (:goal (and (generator-ran)\n              (>= (fuelLevel gen) 10))))\n");
    s
}

/// Instance needing exactly `tanks` refuels. Tank capacities vary with the
/// seed but never bind.
pub fn gen_generator(tanks: usize, seed: u64) -> Generated {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let caps: Vec<f64> = (0..tanks).map(|_| rng.gen_range(40..=90) as f64).collect();
    let (fuel, time) = if tanks == 0 { (30.0, 20.0) } else { (10.0, 30.0 * tanks as f64 - 4.0) };
    Generated { domain: DOMAIN.to_string(), problem: problem(tanks, fuel, time, &caps) }
}

/// One tank whose capacity limits the refuel to 12.5 time units, so end fuel
/// can reach at most 9.
pub fn gen_generator_capped(_seed: u64) -> Generated {
    Generated { domain: DOMAIN.to_string(), problem: problem(1, 10.0, 26.0, &[25.0]) }
}
