//! Twisting operators and the decomposition of the contractible model as a
//! twisted product of two K-models.
//!
//! ```sh
//! cargo run --example twisted_products
//! ```

use num::bigint::BigUint;
use plocal::abelian::FiniteAbelianGroup;
use plocal::em::{em_cardinality, Budget, EmKind, EmSpace};
use plocal::twist::{
    check_twisting_axioms, e_as_twisted_product_iso, twisted_product, TwistingOperator,
};

fn main() {
    let g = FiniteAbelianGroup::cyclic(2);

    // the canonical twisting on the base K(Z/2, 2) passes all four axioms
    let tau = TwistingOperator::canonical(g.clone(), 1);
    let axioms = check_twisting_axioms(&tau, 4, None);
    println!(
        "canonical twisting: {} base simplices checked, {} violations",
        axioms.checked,
        axioms.violations.len()
    );

    // K(Z/2,1) ×_τ K(Z/2,2) recovers the simplex counts of E(Z/2,1)
    let tw = twisted_product(
        &EmSpace::k(g.clone(), 1),
        &EmSpace::k(g.clone(), 2),
        &tau,
        4,
        &Budget::default(),
    )
    .expect("axioms hold and counts fit the budget");
    println!("twisted product (fiber K(Z/2,1), base K(Z/2,2)):");
    for n in 0..=4 {
        println!(
            "  degree {n}: {} simplices, |E(Z/2,1)_{n}| = {}",
            tw.set.simplex_count(n),
            em_cardinality(&g, 1, n, EmKind::E)
        );
        assert_eq!(
            BigUint::from(tw.set.simplex_count(n)),
            em_cardinality(&g, 1, n, EmKind::E)
        );
    }
    println!(
        "simplicial identities: {}",
        tw.set.check_simplicial_identities().is_valid()
    );

    // the explicit degreewise bijection, with all operators matched
    let report = e_as_twisted_product_iso(&FiniteAbelianGroup::cyclic(3), 1, 3);
    print!("{report}");
}
