//! Pump control. Reconstructed from a prose description and not authoritative.
//!
//! Pumps feed one reservoir. `fill` raises `current-volume` at the combined
//! `current-flow-rate` of the running pumps, so flow changes made while it
//! runs change its rate. Each process draws from the reservoir with `use`,
//! which also caps the pressure (combined flow) over its whole run. Tasks
//! are performed either during a given process (`perform-during`, which must
//! overlap it) or after it has been supplied (`perform-after`). Pumps must
//! be ramped down to zero flow before they stop, and all must be stopped at
//! the end.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{num, Generated};

const DOMAIN: &str = "(define (domain pump-control)
  (:requirements :typing :durative-actions :fluents :continuous-effects :negative-preconditions)
  (:types pump process task)
  (:predicates (pump-on ?p - pump) (running ?r - process) (supplied ?r - process)
               (during ?k - task ?r - process) (after ?k - task ?r - process) (task-done ?k - task))
  (:functions (flow ?p - pump) (max-flow ?p - pump) (current-flow-rate) (current-volume)
              (demand ?r - process) (consumption ?r - process) (demand-time ?r - process)
              (max-pressure ?r - process) (task-time ?k - task))
  (:action start-pump
    :parameters (?p - pump)
    :precondition (and (not (pump-on ?p)))
    :effect (and (pump-on ?p)))
  (:action stop-pump
    :parameters (?p - pump)
    :precondition (and (pump-on ?p) (<= (flow ?p) 0))
    :effect (and (not (pump-on ?p))))
  (:action increase-pump-flow
    :parameters (?p - pump)
    :precondition (and (pump-on ?p) (<= (+ (flow ?p) 1) (max-flow ?p)))
    :effect (and (increase (flow ?p) 1) (increase (current-flow-rate) 1)))
  (:action decrease-pump-flow
    :parameters (?p - pump)
    :precondition (and (pump-on ?p) (>= (flow ?p) 1))
    :effect (and (decrease (flow ?p) 1) (decrease (current-flow-rate) 1)))
  (:durative-action fill
    :parameters ()
    :duration (and (>= ?duration 1) (<= ?duration 30))
    :condition (and (over all (>= (current-flow-rate) 1)))
    :effect (and (increase (current-volume) (* #t (current-flow-rate)))))
  (:durative-action use
    :parameters (?r - process)
    :duration (= ?duration (demand-time ?r))
    :condition (and (at start (not (supplied ?r)))
                    (at start (>= (current-volume) (demand ?r)))
                    (over all (>= (current-volume) 0))
                    (over all (<= (current-flow-rate) (max-pressure ?r))))
    :effect (and (at start (running ?r))
                 (at end (not (running ?r)))
                 (at end (supplied ?r))
                 (decrease (current-volume) (* #t (consumption ?r)))))
  (:durative-action perform-during
    :parameters (?k - task ?r - process)
    :duration (= ?duration (task-time ?k))
    :condition (and (at start (during ?k ?r)) (over all (running ?r)))
    :effect (and (at end (task-done ?k))))
  (:durative-action perform-after
    :parameters (?k - task ?r - process)
    :duration (= ?duration (task-time ?k))
    :condition (and (at start (after ?k ?r)) (at start (supplied ?r)))
    :effect (and (at end (task-done ?k)))))
";

pub fn gen_pump(pumps: usize, processes: usize, tasks: usize, seed: u64) -> Generated {
    let (pumps, processes, tasks) = (pumps.max(1), processes.max(1), tasks.max(1));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut init = vec!["(= (current-flow-rate) 0)".to_string(), "(= (current-volume) 0)".to_string()];
    for p in 1..=pumps {
        init.push(format!("(= (flow p{p}) 0)"));
        init.push(format!("(= (max-flow p{p}) {})", rng.gen_range(2..=4)));
    }
    let mut times = Vec::new();
    for r in 1..=processes {
        let time = rng.gen_range(4..=8) as f64;
        let cons = rng.gen_range(1..=2) as f64;
        times.push(time);
        // enough stock for the whole run is required up front
        init.push(format!("(= (demand r{r}) {})", num(time * cons)));
        init.push(format!("(= (consumption r{r}) {})", num(cons)));
        init.push(format!("(= (demand-time r{r}) {})", num(time)));
        init.push(format!("(= (max-pressure r{r}) {})", rng.gen_range(3..=6)));
    }
    for k in 1..=tasks {
        let r = rng.gen_range(1..=processes);
        let kind = if rng.gen_bool(0.5) { "during" } else { "after" };
        // short enough to fit inside the process
        let t = (times[r - 1] - 1.0).min(rng.gen_range(1..=3) as f64);
        init.push(format!("({kind} k{k} r{r})"));
        init.push(format!("(= (task-time k{k}) {})", num(t)));
    }
    let mut p = format!("(define (problem pump-{pumps}-{processes}-{tasks})\n  (:domain pump-control)\n  (:objects");
    p.push_str(&(1..=pumps).map(|i| format!(" p{i}")).collect::<String>());
    p.push_str(" - pump");
    p.push_str(&(1..=processes).map(|i| format!(" r{i}")).collect::<String>());
    p.push_str(" - process");
    p.push_str(&(1..=tasks).map(|i| format!(" k{i}")).collect::<String>());
    p.push_str(" - task)\n  (:init\n");
    for f in &init {
        p.push_str(&format!("    {f}\n"));
    }
    p.push_str("  )\n  (:goal (and");
    for r in 1..=processes {
        p.push_str(&format!(" (supplied r{r})"));
    }
    for k in 1..=tasks {
        p.push_str(&format!(" (task-done k{k})"));
    }
    for i in 1..=pumps {
        p.push_str(&format!(" (not (pump-on p{i}))"));
    }
    p.push_str(")))\n");
    Generated { domain: DOMAIN.to_string(), problem: p }
}
