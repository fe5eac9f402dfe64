mod common;

use common::{compare_encodings, EncodingComparison};
use proptest::prelude::*;

const BOUND_TOL: f64 = 1e-6;

fn check(c: &EncodingComparison) -> Result<(), String> {
    if c.one_failed {
        return Err("only one encoding was built".into());
    }
    if c.both_failed {
        return Ok(());
    }
    if c.full_feasible != c.opt_feasible {
        return Err(format!("feasibility differs: full {} optimized {}", c.full_feasible, c.opt_feasible));
    }
    if c.max_bound_gap > BOUND_TOL {
        return Err(format!("bounds differ by {}", c.max_bound_gap));
    }
    if c.full_vars < c.n * (2 * c.m + 1) {
        return Err(format!("full has {} vars, below {}", c.full_vars, c.n * (2 * c.m + 1)));
    }
    if c.opt_vars > c.full_vars {
        return Err(format!("optimized has more vars: {} > {}", c.opt_vars, c.full_vars));
    }
    if c.m > 0 && c.unaffected && c.opt_vars >= c.full_vars {
        return Err(format!("optimized not smaller: {} vs {}", c.opt_vars, c.full_vars));
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn encodings_agree_on_random_prefixes(seed in any::<u64>()) {
        let c = compare_encodings(seed);
        prop_assert!(check(&c).is_ok(), "seed {}: {:?}", seed, check(&c));
    }
}

#[test]
fn fixed_seeds_agree() {
    for seed in 0..300 {
        let c = compare_encodings(seed);
        check(&c).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
    }
}
