use super::*;
use crate::lp::Simplex;
use crate::model::SnapRef::{End, Start};
use crate::pddl::load;

const EPS: f64 = 0.001;

const OVERLAP_DOMAIN: &str = "(define (domain overlap)
  (:requirements :durative-actions :fluents :continuous-effects)
  (:functions (v))
  (:durative-action a :parameters () :duration (= ?duration 10)
    :condition (and) :effect (and (increase (v) (* #t 1))))
  (:durative-action b :parameters () :duration (= ?duration 10)
    :condition (and (at start (<= (v) 3))) :effect (and))
  (:durative-action c :parameters () :duration (= ?duration 5)
    :condition (and) :effect (and)))";

const OVERLAP_PROBLEM: &str = "(define (problem overlap-1) (:domain overlap)
  (:init (= (v) 0)) (:goal (and)))";

fn push_all(p: &GroundedProblem, snaps: &[SnapRef]) -> Timeline {
    let mut t = Timeline::new(p);
    for &s in snaps {
        t = t.push(p, s, EPS).unwrap();
    }
    t
}

fn overlap() -> (GroundedProblem, [SnapRef; 6]) {
    let p = load(OVERLAP_DOMAIN, OVERLAP_PROBLEM).unwrap();
    let (a, b, c) = (p.durative_by_name("(a)").unwrap(), p.durative_by_name("(b)").unwrap(), p.durative_by_name("(c)").unwrap());
    (p, [Start(a), Start(b), End(a), Start(c), End(c), End(b)])
}

#[test]
fn overlap_stn_alone_misses_conflict() {
    let (p, seq) = overlap();
    let t = push_all(&p, &seq);
    assert!(t.stn.is_consistent());
    for enc in [encode_full(&t.prefix(&p)).unwrap(), encode_optimized(&t.prefix(&p)).unwrap()] {
        assert_eq!(check_consistency(&enc, &Simplex::default(), &[]).unwrap(), Consistency::Inconsistent);
    }
}

#[test]
fn overlap_tightening_at_b_start() {
    let (p, seq) = overlap();
    let t = push_all(&p, &seq[..2]);
    let enc = encode_optimized(&t.prefix(&p)).unwrap();
    let Consistency::Consistent(ts) = check_consistency(&enc, &Simplex::default(), &[(1, 2)]).unwrap() else {
        panic!("prefix up to b start is consistent")
    };
    assert!((ts[0].ub - 3.0).abs() < 1e-6);
    assert!((ts[0].lb - EPS).abs() < 1e-6);
}

#[test]
fn overlap_write_back_lets_stn_catch_it() {
    let (p, seq) = overlap();
    let mut t = push_all(&p, &seq[..2]);
    t.stn.tighten(1, 2, EPS, 3.0);
    for &s in &seq[2..5] {
        t = t.push(&p, s, EPS).unwrap();
    }
    assert!(!t.stn.is_consistent());
}

#[test]
fn no_dependent_fluents_means_stn_rows_only() {
    let (p, seq) = overlap();
    let c = seq[3].durative().unwrap();
    let t = push_all(&p, &[Start(c), End(c)]);
    let enc = encode_full(&t.prefix(&p)).unwrap();
    assert_eq!(enc.dependent_count, 0);
    assert!(enc.model.rows.iter().all(|r| r.name == "stn"));
    assert_eq!(check_consistency(&enc, &Simplex::default(), &[]).unwrap() != Consistency::Inconsistent, t.stn.is_consistent());
}

#[test]
fn full_variable_count_lower_bound() {
    // two fluents both driven by one running action; four happenings
    let dom = "(define (domain two)
      (:requirements :durative-actions :fluents :continuous-effects)
      (:functions (x) (y))
      (:durative-action run :parameters () :duration (and (>= ?duration 1) (<= ?duration 4))
        :condition (and) :effect (and (increase (x) (* #t 2)) (decrease (y) (* #t 1))))
      (:durative-action idle :parameters () :duration (= ?duration 1) :condition (and) :effect (and)))";
    let prob = "(define (problem two-1) (:domain two) (:init (= (x) 0) (= (y) 9)) (:goal (and)))";
    let p = load(dom, prob).unwrap();
    let (run, idle) = (p.durative_by_name("(run)").unwrap(), p.durative_by_name("(idle)").unwrap());
    let t = push_all(&p, &[Start(run), Start(idle), End(idle), End(run)]);
    let full = encode_full(&t.prefix(&p)).unwrap();
    let opt = encode_optimized(&t.prefix(&p)).unwrap();
    assert_eq!(full.dependent_count, 2);
    assert!(full.model.var_count() >= 4 * (2 * 2 + 1));
    assert!(opt.model.var_count() < full.model.var_count());
    let s = Simplex::default();
    let fb = extract_bounds(&full, &s, &[0, 1]).unwrap().unwrap();
    let ob = extract_bounds(&opt, &s, &[0, 1]).unwrap().unwrap();
    for (f, o) in fb.iter().zip(&ob) {
        assert_eq!(f.0, o.0);
        assert!((f.1 - o.1).abs() < 1e-6 && (f.2 - o.2).abs() < 1e-6, "{f:?} vs {o:?}");
    }
    // x grows at 2 over a duration in [1 + 2eps, 4]; idle sits strictly inside run
    let x = p.fluent_id("(x)").unwrap();
    let bx = fb.iter().find(|b| b.0 == x).unwrap();
    assert!((bx.1 - 2.0 * (1.0 + 2.0 * EPS)).abs() < 1e-6 && (bx.2 - 8.0).abs() < 1e-6);
}

#[test]
fn assignment_resolves_dependency() {
    let dom = "(define (domain reset)
      (:requirements :durative-actions :fluents :continuous-effects)
      (:functions (v))
      (:durative-action grow :parameters () :duration (and (>= ?duration 1) (<= ?duration 4))
        :condition (and) :effect (and (increase (v) (* #t 1))))
      (:action set :parameters () :precondition (and) :effect (assign (v) 5)))";
    let prob = "(define (problem reset-1) (:domain reset) (:init (= (v) 0)) (:goal (and)))";
    let p = load(dom, prob).unwrap();
    let g = p.durative_by_name("(grow)").unwrap();
    let set = p.instant_by_name("(set)").unwrap();
    let t = push_all(&p, &[Start(g), End(g)]);
    assert!(t.tracker.is_dependent(0));
    let t = t.push(&p, SnapRef::Instant(set), EPS).unwrap();
    assert!(!t.tracker.is_dependent(0));
    assert_eq!(t.literal[0], Some(5.0));
}

#[test]
fn drive_rate_from_static_speed() {
    let dom = "(define (domain road)
      (:requirements :typing :durative-actions :fluents :continuous-effects)
      (:types car loc)
      (:predicates (at ?c - car ?l - loc))
      (:functions (fuel ?c - car) (avg-speed ?a ?b - loc) (distance ?a ?b - loc))
      (:durative-action drive :parameters (?c - car ?from ?to - location)
        :duration (= ?duration (/ (distance ?from ?to) (avg-speed ?from ?to)))
        :condition (and (at start (at ?c ?from)) (over all (>= (fuel ?c) 1)))
        :effect (and (at start (not (at ?c ?from))) (at end (at ?c ?to))
                     (decrease (fuel ?c) (* #t (/ (avg-speed ?from ?to) 100))))))"
        .replace("- location", "- loc");
    let prob = "(define (problem road-1) (:domain road) (:objects k - car l1 l2 - loc)
      (:init (at k l1) (= (fuel k) 5) (= (avg-speed l1 l2) 60) (= (distance l1 l2) 120))
      (:goal (at k l2)))";
    let p = load(&dom, prob).unwrap();
    let d = p.durative_by_name("(drive k l1 l2)").unwrap();
    let t = push_all(&p, &[Start(d)]);
    let fuel = p.fluent_id("(fuel k)").unwrap();
    assert!((t.rate(fuel) + 0.6).abs() < 1e-12);
    assert_eq!(t.happenings[0].duration, (2.0, 2.0));
    let t = t.push(&p, End(d), EPS).unwrap();
    let enc = encode_full(&t.prefix(&p)).unwrap();
    let b = extract_bounds(&enc, &Simplex::default(), &[fuel]).unwrap().unwrap();
    assert!((b[0].1 - 3.8).abs() < 1e-6 && (b[0].2 - 3.8).abs() < 1e-6);
}
