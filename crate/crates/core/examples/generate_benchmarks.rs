//! Write the first instances of each benchmark ladder to a directory.
//!
//! cargo run --example generate_benchmarks [-- OUT_DIR]

use std::path::PathBuf;

use lazyplan::benchgen::{write_instance, Family, GenSpec};
use lazyplan::pddl::load;

fn main() {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "benchmarks".into()));
    for family in [Family::Carpool, Family::Pump, Family::Generator] {
        for k in 1..=3 {
            let spec = GenSpec::ladder(family, k, 0);
            let g = spec.generate();
            let p = load(&g.domain, &g.problem).expect("generated instances ground");
            let (d, pr) = write_instance(&out, family, k, &g).expect("writable");
            println!(
                "{:?}: {} + {} ({} facts, {} fluents, {} durative actions)",
                spec.size,
                d.display(),
                pr.display(),
                p.facts.len(),
                p.fluents.len(),
                p.durative.len()
            );
        }
    }
}
