//! Incremental simple temporal network: bounds, inconsistency, DOT output.

use lazyplan::stn::{Stn, Verdict};

fn main() {
    let mut stn = Stn::new();
    let a = stn.add_happening();
    let b = stn.add_happening();
    let c = stn.add_happening();
    stn.add_constraint(a, b, 2.0, 5.0);
    stn.add_constraint(b, c, 1.0, 3.0);
    println!("c - a in {:?}", stn.bounds(a, c).unwrap());
    println!("a after origin by {:?}", stn.bounds(0, a).unwrap());

    println!("{}", stn.to_dot());

    // a cycle the other way round cannot be met
    let v = stn.add_constraint(c, a, 1.0, 10.0);
    assert_eq!(v, Verdict::Inconsistent);
    println!("after c - a >= ... with a - c >= 1: {v:?}");
}
