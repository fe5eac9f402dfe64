//! Parse a domain/problem pair and list what grounding produced.
//!
//! cargo run --example ground_problem [-- DOMAIN PROBLEM]

use lazyplan::benchgen::gen_generator;
use lazyplan::pddl::load;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (domain, problem) = match args.as_slice() {
        [d, p] => (std::fs::read_to_string(d).expect("domain"), std::fs::read_to_string(p).expect("problem")),
        _ => {
            let g = gen_generator(2, 0);
            (g.domain, g.problem)
        }
    };
    let p = match load(&domain, &problem) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    println!("problem {}", p.name);
    println!("{} facts, {} fluents", p.facts.len(), p.fluents.len());
    for (v, name) in p.fluents.iter().enumerate() {
        println!("  {name} = {:?}", p.init_values[v]);
    }
    for a in &p.instant {
        println!("instant  {}", a.display_name());
    }
    for a in &p.durative {
        let d = a.duration_bounds(&p.init_values).map(|(lo, hi)| format!("[{lo}, {hi}]")).unwrap_or_else(|_| "?".into());
        println!("durative {} duration {d}, {} continuous effect(s)", a.display_name(), a.continuous.len());
    }
}
