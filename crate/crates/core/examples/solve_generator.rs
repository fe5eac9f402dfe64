//! Solve a generator instance with both strategies and print plans and stats.
//!
//! cargo run --release --example solve_generator [-- TANKS]

use lazyplan::benchgen::gen_generator;
use lazyplan::pddl::load;
use lazyplan::search::{search, SearchConfig};

fn main() {
    let tanks = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let g = gen_generator(tanks, 0);
    let p = load(&g.domain, &g.problem).expect("generated instance loads");
    for (label, cfg) in [("lazy", SearchConfig::default()), ("always-lp", SearchConfig::always_lp())] {
        let r = search(&p, cfg);
        println!("== {label}: {}", r.status);
        if let Some(plan) = &r.plan {
            print!("{plan}");
        }
        for h in &r.happenings {
            println!("  {}", p.snap_name(*h));
        }
        println!("{}", r.stats.to_json());
    }
}
