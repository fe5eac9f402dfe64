//! Encode a plan prefix as an LP in both forms and let the LP find a
//! scheduling conflict the temporal network alone misses.
//!
//! `a` raises v at rate 1 for 10 units. `b` needs v <= 3 when it starts, so it
//! has to start within 3 units of `a`. `c` (5 units) starts after `a` ends and
//! ends before `b` ends, which needs `b` to start at least 5 units after `a`.

use lazyplan::encoding::{analyze, check_consistency, encode_full, encode_optimized, Consistency, Timeline};
use lazyplan::lp::Simplex;
use lazyplan::model::SnapRef::{End, Start};
use lazyplan::pddl::load;

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

fn main() {
    let p = load(DOMAIN, PROBLEM).expect("loads");
    let id = |n: &str| p.durative_by_name(n).expect("action");
    let (a, b, c) = (id("(a)"), id("(b)"), id("(c)"));
    let solver = Simplex::default();
    let eps = 0.001;

    let mut t = Timeline::new(&p);
    for s in [Start(a), Start(b)] {
        t = t.push(&p, s, eps).expect("push");
    }
    let full = encode_full(&t.prefix(&p)).expect("encode");
    let opt = encode_optimized(&t.prefix(&p)).expect("encode");
    println!("after b start: full {} vars, optimized {} vars", full.model.var_count(), opt.model.var_count());
    let r = analyze(&opt, &solver, &[(1, 2)], &[]).expect("lp");
    let w = r.tightenings[0];
    println!("LP says {:.3} <= t2 - t1 <= {:.3}", w.lb, w.ub);

    let mut with_wb = t.clone();
    with_wb.stn.tighten(w.i, w.j, w.lb, w.ub);
    for s in [End(a), Start(c), End(c), End(b)] {
        t = t.push(&p, s, eps).expect("push");
        with_wb = with_wb.push(&p, s, eps).expect("push");
        let lp = check_consistency(&encode_optimized(&t.prefix(&p)).expect("encode"), &solver, &[]).expect("lp");
        println!(
            "{:<10} stn alone: {:<5} stn with write-back: {:<5} lp: {}",
            p.snap_name(s),
            t.stn.is_consistent(),
            with_wb.stn.is_consistent(),
            lp != Consistency::Inconsistent
        );
    }
}
