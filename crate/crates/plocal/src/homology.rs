//! Normalized chain complexes, integral and p-local homology, and the
//! derived homology invariants (h_p, m_p, h, m, N).

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::{BigInt, BigUint};
use num::traits::One;
use thiserror::Error;

use crate::matrix::{IntMatrix, Locality};
use crate::sset::FinSimplicialSet;
use crate::util::{factorize, is_prime, valuation_big};

/// Coefficients for homology comparisons: Z or the p-local integers.
pub use crate::matrix::Locality as Coefficients;

/// A chain complex of finitely generated free Z-modules with labeled bases.
#[derive(Clone)]
pub struct ChainComplex {
    dims: Vec<usize>,
    /// boundaries[n] = ∂_n : C_n -> C_{n-1} for n >= 1
    boundaries: Vec<IntMatrix>,
    labels: Vec<Vec<String>>,
}

impl ChainComplex {
    pub fn new(dims: Vec<usize>, boundaries: Vec<IntMatrix>, labels: Vec<Vec<String>>) -> Self {
        assert_eq!(boundaries.len() + 1, dims.len());
        for (n, b) in boundaries.iter().enumerate() {
            assert_eq!(b.rows(), dims[n]);
            assert_eq!(b.cols(), dims[n + 1]);
        }
        ChainComplex { dims, boundaries, labels }
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dim(&self, n: usize) -> usize {
        if n > self.top() {
            0
        } else {
            self.dims[n]
        }
    }

    pub fn labels(&self, n: usize) -> &[String] {
        &self.labels[n]
    }

    /// ∂_n as a matrix, with empty shapes outside the stored range.
    pub fn boundary(&self, n: usize) -> IntMatrix {
        if n == 0 {
            IntMatrix::zeros(0, self.dim(0))
        } else if n > self.top() {
            IntMatrix::zeros(self.dim(n - 1), 0)
        } else {
            self.boundaries[n - 1].clone()
        }
    }

    /// ∂_{n-1} ∘ ∂_n = 0 for every n in range.
    pub fn boundary_squared_is_zero(&self) -> bool {
        (1..=self.top()).all(|n| self.boundary(n - 1).mul(&self.boundary(n)).is_zero())
    }

    /// Integral basis of the n-cycles Z_n = ker ∂_n (saturated, hence also a
    /// Z_(p)-basis for every p).
    pub fn cycle_basis(&self, n: usize) -> IntMatrix {
        self.boundary(n).kernel_basis()
    }

    /// H_n = ker ∂_n / im ∂_{n+1} via Smith normal form.
    pub fn homology(&self, n: usize) -> HomologyGroup {
        assert!(n <= self.top(), "degree {n} out of range");
        let z = self.cycle_basis(n);
        if z.cols() == 0 {
            return HomologyGroup::trivial();
        }
        let b = self.boundary(n + 1);
        // coordinates of the boundaries in the cycle basis; integral because
        // the integral kernel is saturated
        let y = z
            .solve(&b, Locality::Integral)
            .expect("boundaries lie in the saturated cycle lattice")
            .x;
        let divisors = y.elementary_divisors();
        let torsion: Vec<BigUint> = divisors.iter().filter(|d| !d.is_one()).cloned().collect();
        HomologyGroup { free_rank: z.cols() - divisors.len(), torsion }
    }

    /// H_n with Z_(p) coefficients: free rank unchanged, torsion restricted
    /// to its p-primary part.
    pub fn local_homology(&self, n: usize, p: u64) -> HomologyGroup {
        assert!(is_prime(p), "{p} is not prime");
        self.homology(n).localize(p)
    }

    pub fn homology_profile(&self, through: usize) -> HomologyProfile {
        let groups = (0..=through.min(self.top())).map(|n| self.homology(n)).collect();
        HomologyProfile { groups }
    }
}

/// Normalized chain complex of a simplicial set: one basis element per
/// nondegenerate generator, differential the alternating face sum with
/// degenerate faces dropped.
pub fn normalized_chain_complex(s: &FinSimplicialSet) -> ChainComplex {
    let top = s.top_degree();
    let dims: Vec<usize> = (0..=top).map(|q| s.generator_count(q)).collect();
    let labels: Vec<Vec<String>> = (0..=top)
        .map(|q| (0..s.generator_count(q)).map(|g| s.generator_name(q, g).to_string()).collect())
        .collect();
    let mut boundaries = Vec::with_capacity(top);
    for n in 1..=top {
        let mut m = IntMatrix::zeros(dims[n - 1], dims[n]);
        for g in 0..dims[n] {
            for i in 0..=n {
                let face = s.generator_face(n, g, i);
                if face.is_degenerate() {
                    continue;
                }
                let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                let cell = (face.gen_index(), g);
                m[cell] = &m[cell] + sign;
            }
        }
        boundaries.push(m);
    }
    ChainComplex::new(dims, boundaries, labels)
}

/// A finitely generated abelian group: free rank plus an ascending chain of
/// elementary divisors.
#[derive(Clone, PartialEq, Eq)]
pub struct HomologyGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigUint>,
}

impl HomologyGroup {
    pub fn trivial() -> Self {
        HomologyGroup { free_rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        HomologyGroup { free_rank: rank, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// The group tensored with Z_(p): free rank unchanged, torsion replaced
    /// by its p-primary part.
    pub fn localize(&self, p: u64) -> HomologyGroup {
        let torsion = self
            .torsion
            .iter()
            .filter_map(|d| {
                let v = valuation_big(d, p);
                if v > 0 {
                    Some(BigUint::from(p).pow(v))
                } else {
                    None
                }
            })
            .collect();
        HomologyGroup { free_rank: self.free_rank, torsion }
    }

    /// Minimal number of generators over Z_(p) (free rank plus the number of
    /// p-power divisors). This is the `rank_p` of the homology invariants.
    pub fn rank_p(&self, p: u64) -> usize {
        self.free_rank + self.torsion.iter().filter(|d| valuation_big(d, p) > 0).count()
    }

    /// The p-torsion exponent: smallest b with p^b annihilating the
    /// p-torsion part.
    pub fn torsion_exponent(&self, p: u64) -> u32 {
        self.torsion.iter().map(|d| valuation_big(d, p)).max().unwrap_or(0)
    }

    /// Primes dividing some torsion coefficient.
    pub fn torsion_primes(&self) -> Result<Vec<u64>, InvariantsError> {
        let mut out = Vec::new();
        for d in &self.torsion {
            let small = u64::try_from(d).map_err(|_| InvariantsError::TorsionTooLarge(d.clone()))?;
            for (p, _) in factorize(small) {
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

impl fmt::Debug for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Homology groups in degrees 0..=d.
#[derive(Clone)]
pub struct HomologyProfile {
    pub groups: Vec<HomologyGroup>,
}

impl HomologyProfile {
    pub fn dimension(&self) -> usize {
        self.groups.len() - 1
    }

    pub fn group(&self, n: usize) -> HomologyGroup {
        self.groups.get(n).cloned().unwrap_or_else(HomologyGroup::trivial)
    }

    /// Largest degree with nontrivial reduced homology (0 when all reduced
    /// homology vanishes).
    pub fn reduced_dimension(&self) -> usize {
        (1..self.groups.len()).rev().find(|&n| !self.groups[n].is_trivial()).unwrap_or(0)
    }

    /// Pad or truncate to degrees 0..=d.
    pub fn resized(&self, d: usize) -> HomologyProfile {
        let mut groups = self.groups.clone();
        groups.resize(d + 1, HomologyGroup::trivial());
        HomologyProfile { groups }
    }
}

#[derive(Debug, Error)]
pub enum InvariantsError {
    #[error("H_{0} has free rank {1}: homology must be finite in degrees >= 1")]
    InfiniteHomology(usize, usize),
    #[error("torsion coefficient {0} too large to factor")]
    TorsionTooLarge(BigUint),
}

/// Per-prime and combined homology invariants of a profile:
/// h_p sums rank_p over degrees 1..=d, m_p sums p-torsion exponents over
/// degrees 0..=d, h and m are the maxima over primes, and N is the product
/// of the primes with h_p != 0.
#[derive(Clone, Debug)]
pub struct HomologyInvariants {
    pub d: usize,
    pub per_prime: Vec<PrimeInvariants>,
    pub h: u64,
    pub m: u64,
    pub n_product: BigUint,
}

#[derive(Clone, Debug)]
pub struct PrimeInvariants {
    pub prime: u64,
    pub h_p: u64,
    pub m_p: u64,
}

impl HomologyInvariants {
    pub fn for_prime(&self, p: u64) -> PrimeInvariants {
        self.per_prime
            .iter()
            .find(|pi| pi.prime == p)
            .cloned()
            .unwrap_or(PrimeInvariants { prime: p, h_p: 0, m_p: 0 })
    }
}

pub fn invariants(profile: &HomologyProfile) -> Result<HomologyInvariants, InvariantsError> {
    let d = profile.dimension();
    for n in 1..=d {
        let g = &profile.groups[n];
        if !g.is_finite() {
            return Err(InvariantsError::InfiniteHomology(n, g.free_rank));
        }
    }
    let mut primes: Vec<u64> = Vec::new();
    for g in &profile.groups {
        for p in g.torsion_primes()? {
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
    }
    primes.sort_unstable();
    let mut per_prime = Vec::new();
    let mut n_product = BigUint::one();
    for &p in &primes {
        let h_p: u64 = (1..=d).map(|n| profile.groups[n].rank_p(p) as u64).sum();
        let m_p: u64 = (0..=d).map(|n| profile.groups[n].torsion_exponent(p) as u64).sum();
        if h_p != 0 {
            n_product *= BigUint::from(p);
        }
        per_prime.push(PrimeInvariants { prime: p, h_p, m_p });
    }
    let h = per_prime.iter().map(|pi| pi.h_p).max().unwrap_or(0);
    let m = per_prime.iter().map(|pi| pi.m_p).max().unwrap_or(0);
    Ok(HomologyInvariants { d, per_prime, h, m, n_product })
}

/// Convenience: profile of a simplicial set through its top degree.
pub fn profile_of(s: &FinSimplicialSet) -> HomologyProfile {
    let c = normalized_chain_complex(s);
    c.homology_profile(c.top())
}

/// Group orders per degree, used to feed stage-size bounds.
pub fn torsion_orders(profile: &HomologyProfile) -> BTreeMap<usize, BigUint> {
    profile
        .groups
        .iter()
        .enumerate()
        .filter(|(_, g)| !g.torsion.is_empty())
        .map(|(n, g)| (n, g.torsion.iter().product()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::{FinSimplicialSet, SimplexRef, SsetBuilder};
    use crate::word::DegeneracyWord;

    #[test]
    fn interval_boundary() {
        let d1 = FinSimplicialSet::standard(1);
        let c = normalized_chain_complex(&d1);
        let b = c.boundary(1);
        assert_eq!(b.rows(), 2);
        assert_eq!(b.cols(), 1);
        // column is (d_0 - d_1) with d_0 = {1}, d_1 = {0}
        assert_eq!(b[(0, 0)], BigInt::from(-1));
        assert_eq!(b[(1, 0)], BigInt::from(1));
    }

    #[test]
    fn sphere_model_all_faces_degenerate() {
        // one generator in degrees 0 and n, all faces at the base point
        let n = 3;
        let mut b = SsetBuilder::new(n);
        b.add_generator(0, "pt").unwrap();
        b.add_generator(n, "cell").unwrap();
        let collapsed = SimplexRef::new(
            0,
            0,
            DegeneracyWord::from_decreasing((0..n - 1).rev().collect()),
        );
        for i in 0..=n {
            b.set_face(n, 0, i, collapsed.clone());
        }
        let s = b.finish().unwrap();
        assert!(s.check_simplicial_identities().is_valid());
        let c = normalized_chain_complex(&s);
        assert!(c.boundary(n).is_zero());
        // it is an n-sphere
        assert_eq!(c.homology(0), HomologyGroup::free(1));
        for k in 1..n {
            assert!(c.homology(k).is_trivial());
        }
        assert_eq!(c.homology(n), HomologyGroup::free(1));
    }

    #[test]
    fn boundary_of_tetrahedron_is_a_sphere() {
        let s = FinSimplicialSet::standard(3).skeleton(2);
        let c = normalized_chain_complex(&s);
        assert!(c.boundary_squared_is_zero());
        assert_eq!(c.homology(0), HomologyGroup::free(1));
        assert!(c.homology(1).is_trivial());
        assert_eq!(c.homology(2), HomologyGroup::free(1));
    }

    #[test]
    fn simplices_are_contractible() {
        for n in 1..=3 {
            let c = normalized_chain_complex(&FinSimplicialSet::standard(n));
            assert!(c.boundary_squared_is_zero());
            assert_eq!(c.homology(0), HomologyGroup::free(1));
            for k in 1..=n {
                assert!(c.homology(k).is_trivial(), "H_{k} of Δ^{n}");
            }
        }
    }

    #[test]
    fn localization_of_groups() {
        let g = HomologyGroup { free_rank: 0, torsion: vec![2u32.into(), 12u32.into()] };
        // Z/2 + Z/12 = Z/2 + Z/4 + Z/3
        assert_eq!(g.localize(2).torsion, vec![BigUint::from(2u32), BigUint::from(4u32)]);
        assert_eq!(g.localize(3).torsion, vec![BigUint::from(3u32)]);
        assert!(g.localize(5).is_trivial());
        let free = HomologyGroup::free(2);
        assert_eq!(free.localize(2), free);
        assert_eq!(g.rank_p(2), 2);
        assert_eq!(g.rank_p(3), 1);
        assert_eq!(g.torsion_exponent(2), 2);
    }

    #[test]
    fn local_homology_matches_primary_part() {
        // complex with H_0 = Z/2 + Z/4 + Z/3 (presented by a diagonal matrix)
        let d1 = IntMatrix::from_rows(&[vec![2, 0, 0], vec![0, 4, 0], vec![0, 0, 3]]);
        let c = ChainComplex::new(
            vec![3, 3],
            vec![d1],
            vec![vec!["a".into(), "b".into(), "c".into()], vec!["x".into(), "y".into(), "z".into()]],
        );
        let h0 = c.homology(0);
        assert_eq!(h0.torsion, vec![BigUint::from(2u32), BigUint::from(12u32)]);
        let l2 = c.local_homology(0, 2);
        assert_eq!(l2.torsion, vec![BigUint::from(2u32), BigUint::from(4u32)]);
        let l5 = c.local_homology(0, 5);
        assert!(l5.is_trivial());
    }

    #[test]
    fn invariants_examples() {
        // H_2 = Z/2 + Z/4, H_3 = Z/3, d = 3
        let profile = HomologyProfile {
            groups: vec![
                HomologyGroup::free(1),
                HomologyGroup::trivial(),
                HomologyGroup { free_rank: 0, torsion: vec![2u32.into(), 4u32.into()] },
                HomologyGroup { free_rank: 0, torsion: vec![3u32.into()] },
            ],
        };
        let inv = invariants(&profile).unwrap();
        assert_eq!(inv.for_prime(2).h_p, 2);
        assert_eq!(inv.for_prime(2).m_p, 2);
        assert_eq!(inv.for_prime(3).h_p, 1);
        assert_eq!(inv.for_prime(3).m_p, 1);
        assert_eq!(inv.h, 2);
        assert_eq!(inv.m, 2);
        assert_eq!(inv.n_product, BigUint::from(6u32));

        // trivial reduced homology
        let trivial = HomologyProfile { groups: vec![HomologyGroup::free(1)] };
        let inv = invariants(&trivial).unwrap();
        assert_eq!((inv.h, inv.m), (0, 0));
        assert_eq!(inv.n_product, BigUint::one());

        // H_1 = Z/5 only, d = 1
        let p5 = HomologyProfile {
            groups: vec![
                HomologyGroup::free(1),
                HomologyGroup { free_rank: 0, torsion: vec![5u32.into()] },
            ],
        };
        let inv = invariants(&p5).unwrap();
        assert_eq!(inv.for_prime(5).h_p, 1);
        assert_eq!(inv.for_prime(5).m_p, 1);
        assert_eq!((inv.h, inv.m), (1, 1));
        assert_eq!(inv.n_product, BigUint::from(5u32));

        // infinite homology in degree 1 is rejected
        let bad = HomologyProfile { groups: vec![HomologyGroup::free(1), HomologyGroup::free(1)] };
        assert!(invariants(&bad).is_err());
    }

    #[test]
    fn skeleton_preserves_homology_below_the_cut() {
        let spaces = [
            FinSimplicialSet::standard(4),
            FinSimplicialSet::standard(3).skeleton(2),
        ];
        for s in &spaces {
            let full = normalized_chain_complex(s);
            for k in 1..=s.top_degree() {
                let cut = normalized_chain_complex(&s.skeleton(k));
                for n in 0..k {
                    assert_eq!(cut.homology(n), full.homology(n), "degree {n} below cut {k}");
                }
            }
        }
    }

    #[test]
    fn invariants_monotone_under_enlargement() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let divisor_pool = [2u32, 3, 4, 5, 8, 9];
        for _ in 0..200 {
            let d = rng.gen_range(1..=4);
            let mut groups = vec![HomologyGroup::free(1)];
            for _ in 1..=d {
                let k = rng.gen_range(0..=2);
                let mut tors: Vec<u64> =
                    (0..k).map(|_| divisor_pool[rng.gen_range(0..divisor_pool.len())] as u64).collect();
                tors.sort_unstable();
                // force a divisor chain by repeated lcm
                let mut chain: Vec<BigUint> = Vec::new();
                let mut acc = 1u64;
                for t in tors {
                    acc = num::integer::lcm(acc, t);
                    chain.push(acc.into());
                }
                groups.push(HomologyGroup { free_rank: 0, torsion: chain });
            }
            let profile = HomologyProfile { groups: groups.clone() };
            let base = invariants(&profile).unwrap();
            // enlarge one group by appending a multiple of its last divisor
            let mut bigger = groups.clone();
            let n = rng.gen_range(1..bigger.len().max(2)).min(bigger.len() - 1);
            let last = bigger[n].torsion.last().cloned().unwrap_or_else(|| 1u32.into());
            bigger[n].torsion.push(last * BigUint::from(2u32));
            let enlarged = invariants(&HomologyProfile { groups: bigger }).unwrap();
            assert!(enlarged.h >= base.h);
            assert!(enlarged.m >= base.m);
            assert!(enlarged.n_product.ge(&base.n_product) || enlarged.n_product == base.n_product);
            for pi in &base.per_prime {
                let e = enlarged.for_prime(pi.prime);
                assert!(e.h_p >= pi.h_p && e.m_p >= pi.m_p);
            }
        }
    }
}
