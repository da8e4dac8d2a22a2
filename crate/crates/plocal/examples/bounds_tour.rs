//! The quantitative bounds: homotopy-group order bounds, stage sizes, the
//! headline bound, and the verified inequality chains behind them.
//!
//! ```sh
//! cargo run --example bounds_tour
//! ```

use num::bigint::BigUint;
use num::rational::Ratio;
use plocal::bounds::{
    final_bound, homotopy_order_bound_p, lemma53_chain, prop33_chain, rank_bound,
    stage_size_bound, torsion_exponent_bound, BoundConfig, FormulaMode,
};

fn main() {
    let cfg = BoundConfig::default();
    let c0 = BoundConfig::with_constant(Ratio::from_integer(0));

    println!("per-prime bounds at p = 2, h_p = 2, m_p = 1:");
    for n in 2..=6 {
        let rank = rank_bound(n, 2, &cfg);
        let tors = torsion_exponent_bound(n, 1);
        let order = homotopy_order_bound_p(n, 2, 1, 2, &cfg);
        println!(
            "  n = {n}: rank <= {}, annihilated by 2^{}, order <= {} (pre-absorption {})",
            rank.approx_string(),
            tors,
            order.value(FormulaMode::Closed).approx_string(),
            order.pre_absorption.approx_string(),
        );
    }

    // at C = 0 the pre-absorption value is exact: 2^16 at n = 2
    let b = homotopy_order_bound_p(2, 2, 1, 2, &c0);
    println!("pre-absorption at n = 2, C = 0: {}", b.pre_absorption.approx_string());

    // exact stage sizes
    println!(
        "stage size through degree 3 with |pi_2| = 2: {}",
        stage_size_bound(3, 2, &[BigUint::from(2u32)])
    );

    // the headline bound for a small profile
    let fb = final_bound(2, 1, 1, &BigUint::from(2u32), &cfg);
    println!("headline bound at (d, m, h, N) = (2, 1, 1, 2): {}", fb.value.approx_string());

    // the verified proof chains
    println!("order-bound chain at (n, p, m_p, h_p) = (3, 2, 1, 2):");
    for step in prop33_chain(3, 2, 1, 2, &cfg) {
        println!("  [{}] {}", if step.passed() { "ok" } else { "FAIL" }, step.label);
    }
    println!("stage-size chain at (d, m, h, N) = (3, 1, 2, 2):");
    for step in lemma53_chain(3, 1, 2, &BigUint::from(2u32), &cfg) {
        let mark = if step.holds {
            "ok"
        } else if step.skipped.is_some() {
            "skip"
        } else {
            "FAIL"
        };
        println!("  [{mark}] {}", step.label);
    }
}
