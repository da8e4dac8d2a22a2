//! Standard simplices, skeleta, products, and the identity checker.
//!
//! ```sh
//! cargo run --example simplicial_basics
//! ```

use plocal::formats::{parse_sset, serialize_sset};
use plocal::sset::{product, FinSimplicialSet};

fn main() {
    let d3 = FinSimplicialSet::standard(3);
    println!("Δ^3 nondegenerate counts: {:?}", d3.nondegenerate_counts());
    println!("Δ^3 passes identity check: {}", d3.check_simplicial_identities().is_valid());

    let sk1 = d3.skeleton(1);
    println!("1-skeleton counts: {:?}", sk1.nondegenerate_counts());

    // the square as a product of intervals: 4 vertices, 5 edges (four sides
    // plus the diagonal), 2 triangles
    let d1 = FinSimplicialSet::standard(1);
    let square = product(&d1, &d1, 2);
    println!("Δ^1 × Δ^1 nondegenerate counts: {:?}", square.set.nondegenerate_counts());
    for n in 0..=2 {
        println!(
            "  degree {n}: {} simplices = {} × {}",
            square.set.simplex_count(n),
            d1.simplex_count(n),
            d1.simplex_count(n)
        );
    }

    // round-trip through the text format
    let text = serialize_sset(&square.set, Some("the square"));
    let back = parse_sset(&text).expect("own output parses");
    assert_eq!(back, square.set);
    println!("SSET/1 round-trip: ok ({} bytes)", text.len());
}
