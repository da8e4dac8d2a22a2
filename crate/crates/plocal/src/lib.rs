//! Exact-arithmetic workbench for finitely generated simplicial sets.
//!
//! The library builds standard simplicial models of Eilenberg-MacLane
//! spaces, assembles Postnikov stages by pullback along k-invariants,
//! truncates and prunes the result into a small simplicial set whose
//! `Z_(p)`-homology agrees with the input in every degree, and evaluates
//! the quantitative size bounds attached to that construction.
//!
//! Everything is computed over exact integers (Smith normal forms, integral
//! kernels, modular cocycle arithmetic); the only rounding appears in the
//! outward-rounded log-space evaluation of the asymptotic bounds.
//!
//! Entry points:
//! - [`sset`]: simplicial sets, simplicial operator algebra, products;
//! - [`homology`]: normalized chain complexes, integral and p-local homology;
//! - [`em`]: models of `K(pi, n)` and `E(pi, n)` with exact counting;
//! - [`twist`]: twisting operators and twisted Cartesian products;
//! - [`postnikov`]: stage pullbacks, Hurewicz bootstrap, pruning, pipeline;
//! - [`bounds`]: exact/log-space evaluation of every stated size bound;
//! - [`cli`]: the `plocal` command-line front end.
//!
//! The `examples/` directory of this crate contains one runnable example per
//! capability; `cargo run --example pipeline_end_to_end` walks the whole
//! construction on a small input.

pub mod abelian;
pub mod bounds;
pub mod cli;
pub mod cochain;
pub mod em;
pub mod formats;
pub mod homology;
pub mod matrix;
pub mod monotone;
pub mod postnikov;
pub mod report;
pub mod sset;
pub mod twist;
pub mod util;
pub mod word;

pub use abelian::{FiniteAbelianGroup, GroupElement};
pub use cochain::Cochain;
pub use homology::{ChainComplex, Coefficients, HomologyGroup, HomologyProfile};
pub use matrix::IntMatrix;
pub use monotone::MonotoneMap;
pub use sset::{FinSimplicialSet, SimplexRef};
pub use word::DegeneracyWord;
