//! Stage pullbacks along k-invariants: the trivial bundle, the pullback
//! along the identity, and the containment counts.
//!
//! ```sh
//! cargo run --example postnikov_stages
//! ```

use num::bigint::BigUint;
use plocal::abelian::FiniteAbelianGroup;
use plocal::em::{em_cardinality, Budget, EmKind, EmSkeleton, EmSpace};
use plocal::postnikov::{pullback_stage, EmValuedMap};
use plocal::sset::FinSimplicialSet;

fn main() {
    let g = FiniteAbelianGroup::cyclic(2);
    let budget = Budget::default();

    // constant k-invariant: the stage is the product with the fiber K-model
    let prev = FinSimplicialSet::standard(3).skeleton(2);
    let kinv = EmValuedMap::zero(&prev, g.clone(), 3);
    let stage = pullback_stage(&prev, &kinv, 3, &budget).expect("trivial bundle");
    println!("trivial bundle over ∂Δ^3 with fiber K(Z/2,2):");
    for n in 0..=3 {
        let lhs = BigUint::from(stage.set.simplex_count(n));
        let rhs =
            BigUint::from(prev.simplex_count(n)) * em_cardinality(&g, 2, n, EmKind::K);
        println!("  degree {n}: {lhs} = |base| × |fiber| = {rhs}");
        assert_eq!(lhs, rhs);
    }
    println!(
        "  projection simplicial: {}",
        stage.projection().check_simplicial(&stage.set, &prev).is_empty()
    );

    // pullback along the identity recovers the contractible model
    let base = EmSkeleton::build(EmSpace::k(g.clone(), 2), 4, &budget).expect("small skeleton");
    let ident = EmValuedMap::identity_on(&base);
    let stage = pullback_stage(&base.set, &ident, 4, &budget).expect("identity pullback");
    println!("pullback of the coboundary fibration along the identity:");
    for n in 0..=4 {
        let count = BigUint::from(stage.set.simplex_count(n));
        let e = em_cardinality(&g, 1, n, EmKind::E);
        println!("  degree {n}: {count} simplices, |E(Z/2,1)_{n}| = {e}");
        assert_eq!(count, e);
    }
    println!(
        "  simplicial identities: {}",
        stage.set.check_simplicial_identities().is_valid()
    );
}
