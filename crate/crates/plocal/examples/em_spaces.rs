//! Eilenberg-MacLane models: closed-form counts, materialized skeleta, and
//! their homology.
//!
//! ```sh
//! cargo run --example em_spaces
//! ```

use plocal::abelian::FiniteAbelianGroup;
use plocal::em::{em_cardinality, verify_counts, Budget, EmKind, EmSkeleton, EmSpace};
use plocal::homology::normalized_chain_complex;

fn main() {
    let z2 = FiniteAbelianGroup::cyclic(2);

    println!("simplex counts of K(Z/2, 2):");
    for n in 0..=6 {
        println!("  |K_{n}| = {}", em_cardinality(&z2, 2, n, EmKind::K));
    }
    println!("and of the contractible model E(Z/2, 2):");
    for n in 0..=6 {
        println!("  |E_{n}| = {}", em_cardinality(&z2, 2, n, EmKind::E));
    }

    let budget = Budget::default();
    let skel = EmSkeleton::build(EmSpace::k(z2.clone(), 1), 5, &budget).expect("within budget");
    println!(
        "K(Z/2, 1) skeleton through degree 5: nondegenerate {:?}",
        skel.set.nondegenerate_counts()
    );
    println!(
        "identity check: {}",
        skel.set.check_simplicial_identities().is_valid()
    );
    for (n, actual, expected, ok) in verify_counts(&skel) {
        println!("  degree {n}: {actual} simplices, closed form {expected}, match = {ok}");
    }

    // the cyclic-group pattern: Z/2 in odd degrees (degree 5 is clipped by
    // the truncation and not reliable, so stop at 4)
    let c = normalized_chain_complex(&skel.set);
    for n in 0..=4 {
        println!("  H_{n}(K(Z/2,1)) = {}", c.homology(n));
    }
}
