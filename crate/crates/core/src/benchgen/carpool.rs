//! Cab-sharing domain: cars drive a road network, collect trips and drop them off.
//!
//! Roads form a ring with chords seven stops apart. Trips are kept local to
//! the car that will serve them: each pick-up is at most one hop from where
//! the previous trip of that car ended, each drop-off one or two hops further.
//! Each car is fuelled for its own route with a small margin.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

use super::{num, Generated};

const DOMAIN: &str = "(define (domain carpool)
  (:requirements :typing :durative-actions :fluents :continuous-effects)
  (:types car location trip)
  (:predicates (parked-at ?c - car ?l - location)
               (driving-at ?c - car ?l - location)
               (pickup-point ?t - trip ?l - location)
               (dropoff-point ?t - trip ?l - location)
               (waiting ?t - trip)
               (in ?t - trip ?c - car)
               (fulfilled ?t - trip))
  (:functions (distance ?from ?to - location) (avg-speed ?from ?to - location)
              (fuel ?c - car) (total-traveled ?c - car)
              (passengers ?t - trip) (capacity ?c - car) (onboard ?c - car))
  (:durative-action drive
    :parameters (?c - car ?from ?to - location)
    :duration (= ?duration
      (/ (distance ?from ?to)
         (avg-speed ?from ?to)))
    :condition (and
      (at start (driving-at ?c ?from))
      (at start (> (distance ?from ?to) 0))
      (over all (>= (fuel ?c) 1)))
    :effect (and
      (at start (not (driving-at ?c ?from)))
      (at end (driving-at ?c ?to))
      (increase (total-traveled ?c)
         (* #t (avg-speed ?from ?to)))
      (decrease (fuel ?c)
         (* #t (/ (avg-speed ?from ?to) 100)))))
  (:durative-action depart
    :parameters (?c - car ?l - location)
    :duration (= ?duration 1)
    :condition (and (at start (parked-at ?c ?l)))
    :effect (and (at start (not (parked-at ?c ?l))) (at end (driving-at ?c ?l))))
  (:durative-action park
    :parameters (?c - car ?l - location)
    :duration (= ?duration 1)
    :condition (and (at start (driving-at ?c ?l)))
    :effect (and (at start (not (driving-at ?c ?l))) (at end (parked-at ?c ?l))))
  (:durative-action pickup-trip
    :parameters (?t - trip ?c - car ?l - location)
    :duration (= ?duration (passengers ?t))
    :condition (and (at start (waiting ?t))
                    (at start (pickup-point ?t ?l))
                    (at start (<= (+ (onboard ?c) (passengers ?t)) (capacity ?c)))
                    (over all (parked-at ?c ?l)))
    :effect (and (at start (not (waiting ?t)))
                 (at start (increase (onboard ?c) (passengers ?t)))
                 (at end (in ?t ?c))))
  (:durative-action dropoff-trip
    :parameters (?t - trip ?c - car ?l - location)
    :duration (= ?duration (passengers ?t))
    :condition (and (at start (in ?t ?c))
                    (at start (dropoff-point ?t ?l))
                    (over all (parked-at ?c ?l)))
    :effect (and (at start (not (in ?t ?c)))
                 (at end (decrease (onboard ?c) (passengers ?t)))
                 (at end (fulfilled ?t)))))
";

const CHORD: usize = 7;
const FUEL_RESERVE: f64 = 1.0;
const FUEL_MARGIN: f64 = 0.5;

fn neighbours(l: usize, n: usize) -> Vec<usize> {
    let mut v = vec![(l + 1) % n, (l + n - 1) % n];
    if n > 2 * CHORD {
        v.push((l + CHORD) % n);
        v.push((l + n - CHORD) % n);
    }
    v.sort_unstable();
    v.dedup();
    v.retain(|&x| x != l);
    v
}

/// Random walk; also returns the fuel burnt on the way.
fn walk(rng: &mut ChaCha8Rng, from: usize, hops: usize, n: usize, dist: &HashMap<(usize, usize), f64>) -> (usize, f64) {
    let mut at = from;
    let mut fuel = 0.0;
    for _ in 0..hops {
        let next = *neighbours(at, n).choose(rng).unwrap_or(&at);
        fuel += dist.get(&(at, next)).copied().unwrap_or(0.0) / 100.0;
        at = next;
    }
    (at, fuel)
}

pub fn gen_carpool(trips: usize, cars: usize, locations: usize, seed: u64) -> Generated {
    let (trips, cars, n) = (trips.max(1), cars.max(1), locations.max(2));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut init = Vec::new();
    let mut dist = HashMap::new();

    for a in 0..n {
        for b in neighbours(a, n) {
            if a < b {
                let d = rng.gen_range(10..=60) as f64;
                let s = rng.gen_range(30..=90) as f64;
                dist.insert((a, b), d);
                dist.insert((b, a), d);
                for (x, y) in [(a, b), (b, a)] {
                    init.push(format!("(= (distance l{} l{}) {})", x + 1, y + 1, num(d)));
                    init.push(format!("(= (avg-speed l{} l{}) {})", x + 1, y + 1, num(s)));
                }
            }
        }
    }
    let mut car_at: Vec<usize> = Vec::new();
    for c in 0..cars {
        let l = rng.gen_range(0..n);
        car_at.push(l);
        init.push(format!("(parked-at c{} l{})", c + 1, l + 1));
        init.push(format!("(= (total-traveled c{}) 0)", c + 1));
        init.push(format!("(= (capacity c{}) 4)", c + 1));
        init.push(format!("(= (onboard c{}) 0)", c + 1));
    }
    let mut need = vec![0.0; cars];
    for t in 0..trips {
        let c = t % cars;
        let hops = rng.gen_range(0..=1);
        let (pick, f1) = walk(&mut rng, car_at[c], hops, n, &dist);
        let hops = rng.gen_range(1..=2);
        let (mut drop, f2) = walk(&mut rng, pick, hops, n, &dist);
        need[c] += f1 + f2;
        if drop == pick {
            drop = neighbours(pick, n)[0];
            need[c] += dist[&(pick, drop)] / 100.0;
        }
        car_at[c] = drop;
        init.push(format!("(waiting t{})", t + 1));
        init.push(format!("(pickup-point t{} l{})", t + 1, pick + 1));
        init.push(format!("(dropoff-point t{} l{})", t + 1, drop + 1));
        init.push(format!("(= (passengers t{}) {})", t + 1, rng.gen_range(1..=3)));
    }

    // the intended route plus the reserve kept by the drive invariant and a
    // small margin; a loose tank lets search wander the ring
    for (c, f) in need.iter().enumerate() {
        init.push(format!("(= (fuel c{}) {})", c + 1, num(((f + FUEL_RESERVE + FUEL_MARGIN) * 100.0).ceil() / 100.0)));
    }

    let mut p = format!("(define (problem carpool-{trips}-{cars})\n  (:domain carpool)\n  (:objects");
    p.push_str(&(1..=cars).map(|c| format!(" c{c}")).collect::<String>());
    p.push_str(" - car");
    p.push_str(&(1..=n).map(|l| format!(" l{l}")).collect::<String>());
    p.push_str(" - location");
    p.push_str(&(1..=trips).map(|t| format!(" t{t}")).collect::<String>());
    p.push_str(" - trip)\n  (:init\n");
    for f in &init {
        p.push_str("    ");
        p.push_str(f);
        p.push('\n');
    }
    p.push_str("  )\n  (:goal (and");
    for t in 1..=trips {
        p.push_str(&format!(" (fulfilled t{t})"));
    }
    p.push_str(")))\n");
    Generated { domain: DOMAIN.to_string(), problem: p }
}
