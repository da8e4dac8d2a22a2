//! Pruning the top-degree generators of a truncated stage so that the
//! Z_(p)-homology above the dimension vanishes.
//!
//! ```sh
//! cargo run --example pruning
//! ```

use plocal::abelian::FiniteAbelianGroup;
use plocal::em::{Budget, EmSkeleton, EmSpace};
use plocal::homology::normalized_chain_complex;
use plocal::postnikov::prune;

fn main() {
    let g = FiniteAbelianGroup::cyclic(2);
    let skel = EmSkeleton::build(EmSpace::k(g, 2), 4, &Budget::default()).expect("small skeleton");
    println!(
        "sk_4 K(Z/2,2): nondegenerate {:?}",
        skel.set.nondegenerate_counts()
    );
    let before = normalized_chain_complex(&skel.set);
    for n in 2..=4 {
        println!("  H_{n}(-; Z_(2)) = {}", before.local_homology(n, 2));
    }

    let pruned = prune(&skel.set, 2, 2).expect("prune at p = 2");
    println!(
        "pruned (keep {} of {} top generators): nondegenerate {:?}",
        pruned.selected.len(),
        skel.set.generator_count(4),
        pruned.set.nondegenerate_counts()
    );
    println!(
        "  selected boundaries independent: {}",
        pruned.checks.boundaries_independent
    );
    println!("  selected boundaries span: {}", pruned.checks.boundaries_span);
    let after = normalized_chain_complex(&pruned.set);
    for n in 2..=4 {
        println!("  H_{n}(Y; Z_(2)) = {}", after.local_homology(n, 2));
    }
}
