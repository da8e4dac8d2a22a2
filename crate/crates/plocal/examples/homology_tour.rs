//! Normalized chains, Smith normal form, and integral / p-local homology.
//!
//! ```sh
//! cargo run --example homology_tour
//! ```

use plocal::homology::{invariants, normalized_chain_complex};
use plocal::matrix::IntMatrix;
use plocal::sset::FinSimplicialSet;

fn main() {
    // Smith normal form of a small matrix
    let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
    let divisors = m.elementary_divisors();
    println!("elementary divisors: {divisors:?}");

    // the boundary of the tetrahedron is a 2-sphere
    let sphere = FinSimplicialSet::standard(3).skeleton(2);
    let c = normalized_chain_complex(&sphere);
    println!("∂Δ^3 (a 2-sphere):");
    for n in 0..=2 {
        println!("  H_{n} = {}", c.homology(n));
    }

    // p-local homology just keeps the p-primary torsion
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/sigma_rp2.sset");
    let text = std::fs::read_to_string(path).expect("corpus file present");
    let x = plocal::formats::parse_sset(&text).expect("corpus parses");
    let cx = normalized_chain_complex(&x);
    println!("suspension of the projective plane:");
    for n in 0..=3 {
        println!(
            "  H_{n} = {:10}  H_{n}(-; Z_(2)) = {:6}  H_{n}(-; Z_(3)) = {}",
            cx.homology(n).to_string(),
            cx.local_homology(n, 2).to_string(),
            cx.local_homology(n, 3),
        );
    }

    // the derived invariants
    let inv = invariants(&cx.homology_profile(3)).expect("finite homology");
    for pi in &inv.per_prime {
        println!("  p = {}: h_p = {}, m_p = {}", pi.prime, pi.h_p, pi.m_p);
    }
    println!("  h = {}, m = {}, N = {}", inv.h, inv.m, inv.n_product);
}
