//! Validate a plan, show the fuel trace, then break it in a few ways.

use lazyplan::benchgen::gen_generator;
use lazyplan::pddl::load;
use lazyplan::plan::Plan;
use lazyplan::validator::{simulate, validate, DEFAULT_EPSILON};

fn main() {
    let g = gen_generator(1, 0);
    let p = load(&g.domain, &g.problem).expect("loads");
    let good = Plan::parse("0: (generate gen) [26]\n5: (refuel gen tank1) [14]\n").expect("parses");
    let trace = simulate(&p, &good, DEFAULT_EPSILON).expect("well formed");
    let fuel = p.fluent_id("(fuellevel gen)").expect("fluent");
    for s in &trace.segments {
        println!("[{:>6.3}, {:>6.3}] fuel {:>7.3} rate {:+}", s.from, s.to, s.values[fuel].unwrap_or(f64::NAN), s.rates[fuel]);
    }
    print!("original: {}", trace.verdict);

    let broken = [
        ("refuel too long", "0: (generate gen) [26]\n5: (refuel gen tank1) [16]\n"),
        ("refuel too short for the goal", "0: (generate gen) [26]\n5: (refuel gen tank1) [12]\n"),
        ("refuel outside generate", "0: (refuel gen tank1) [12]\n20: (generate gen) [26]\n"),
        ("starts too close together", "0: (generate gen) [26]\n0.0005: (refuel gen tank1) [14]\n"),
    ];
    for (what, text) in broken {
        let plan = Plan::parse(text).expect("parses");
        print!("{what}: {}", validate(&p, &plan).expect("well formed"));
    }
}
