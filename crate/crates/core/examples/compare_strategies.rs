//! LP runs of lazy checking against an LP at every state on a benchmark ladder.
//!
//! cargo run --release --example compare_strategies [-- FAMILY MAX_INSTANCE]

use lazyplan::benchgen::{Family, GenSpec};
use lazyplan::pddl::load;
use lazyplan::search::{search, SearchConfig};
use lazyplan::validator::validate;

fn main() {
    let mut args = std::env::args().skip(1);
    let family: Family = args.next().unwrap_or_else(|| "carpool".into()).parse().unwrap_or_else(|e| panic!("{e}"));
    let max: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(3);
    println!("{:<14} {:>6} {:>8} {:>8} {:>7} {:>6}", "instance", "happ", "lazy", "always", "saved", "valid");
    for k in 1..=max {
        let g = GenSpec::ladder(family, k, 1).generate();
        let p = load(&g.domain, &g.problem).expect("loads");
        let lazy = search(&p, SearchConfig::default());
        let always = search(&p, SearchConfig::always_lp());
        let valid = lazy.plan.as_ref().is_some_and(|pl| validate(&p, pl).is_ok_and(|v| v.valid));
        let saved = 1.0 - lazy.stats.lp_runs as f64 / always.stats.lp_runs.max(1) as f64;
        println!(
            "{:<14} {:>6} {:>8} {:>8} {:>6.1}% {:>6}",
            format!("{}-{k}", family.name()),
            lazy.stats.plan_happenings,
            lazy.stats.lp_runs,
            always.stats.lp_runs,
            100.0 * saved,
            valid
        );
    }
}
