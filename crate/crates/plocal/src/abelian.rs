//! Finite abelian groups in invariant-factor form, with residue-vector
//! elements and componentwise modular arithmetic.

use std::fmt;

use num::bigint::BigUint;
use num::traits::One;
use thiserror::Error;

use crate::util::{factorize, valuation_u64};

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("group factor {0} is not >= 2")]
    BadFactor(u64),
    #[error("torsion coefficient {0} does not fit in 64 bits")]
    TooLarge(BigUint),
}

/// A finite abelian group `Z/f_1 ⊕ ... ⊕ Z/f_r` with `f_1 | f_2 | ... | f_r`
/// (invariant factors). The trivial group has no factors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
}

/// An element: one residue per invariant factor, each reduced.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    residues: Vec<u64>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        FiniteAbelianGroup { factors: Vec::new() }
    }

    pub fn cyclic(n: u64) -> Self {
        assert!(n >= 1);
        if n == 1 {
            Self::trivial()
        } else {
            FiniteAbelianGroup { factors: vec![n] }
        }
    }

    /// Build from an arbitrary list of cyclic orders, canonicalized into
    /// invariant-factor form (so `[2, 3]` becomes `[6]`).
    pub fn from_factors(factors: &[u64]) -> Result<Self, GroupError> {
        let mut primary: Vec<(u64, Vec<u32>)> = Vec::new();
        for &f in factors {
            if f < 2 {
                return Err(GroupError::BadFactor(f));
            }
            for (p, e) in factorize(f) {
                match primary.iter_mut().find(|(q, _)| *q == p) {
                    Some((_, es)) => es.push(e),
                    None => primary.push((p, vec![e])),
                }
            }
        }
        let depth = primary.iter().map(|(_, es)| es.len()).max().unwrap_or(0);
        for (_, es) in primary.iter_mut() {
            es.sort_unstable_by(|a, b| b.cmp(a));
        }
        // layer t of every prime's exponent list (largest first) multiplies
        // into the t-th invariant factor from the top
        let mut inv = Vec::new();
        for t in 0..depth {
            let mut f = 1u64;
            for (p, es) in &primary {
                if let Some(&e) = es.get(t) {
                    f = f.checked_mul(p.pow(e)).expect("invariant factor overflow");
                }
            }
            inv.push(f);
        }
        inv.reverse();
        Ok(FiniteAbelianGroup { factors: inv })
    }

    /// Build from an ascending divisor chain (as produced by homology).
    pub fn from_divisor_chain(chain: &[BigUint]) -> Result<Self, GroupError> {
        let mut factors = Vec::with_capacity(chain.len());
        for d in chain {
            let v = u64::try_from(d).map_err(|_| GroupError::TooLarge(d.clone()))?;
            factors.push(v);
        }
        Self::from_factors(&factors)
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Minimal number of generators.
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> BigUint {
        self.factors.iter().fold(BigUint::one(), |acc, &f| acc * BigUint::from(f))
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { residues: vec![0; self.factors.len()] }
    }

    pub fn element(&self, values: &[i64]) -> GroupElement {
        assert_eq!(values.len(), self.factors.len());
        let residues = values
            .iter()
            .zip(&self.factors)
            .map(|(&v, &f)| v.rem_euclid(f as i64) as u64)
            .collect();
        GroupElement { residues }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let residues = a
            .residues
            .iter()
            .zip(&b.residues)
            .zip(&self.factors)
            .map(|((&x, &y), &f)| (x + y) % f)
            .collect();
        GroupElement { residues }
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        let residues = a
            .residues
            .iter()
            .zip(&self.factors)
            .map(|(&x, &f)| if x == 0 { 0 } else { f - x })
            .collect();
        GroupElement { residues }
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    /// All elements, residue vectors in lexicographic order.
    pub fn elements(&self) -> Vec<GroupElement> {
        let mut out = vec![self.zero()];
        for (pos, &f) in self.factors.iter().enumerate().rev() {
            let mut next = Vec::with_capacity(out.len() * f as usize);
            for e in &out {
                for v in 0..f {
                    let mut r = e.residues.clone();
                    r[pos] = v;
                    next.push(GroupElement { residues: r });
                }
            }
            out = next;
        }
        // reorder to straight lexicographic
        out.sort();
        out
    }

    /// The p-primary part, again in invariant-factor form.
    pub fn p_primary(&self, p: u64) -> FiniteAbelianGroup {
        let factors: Vec<u64> = self
            .factors
            .iter()
            .filter_map(|&f| {
                let v = valuation_u64(f, p);
                if v > 0 {
                    Some(p.pow(v))
                } else {
                    None
                }
            })
            .collect();
        FiniteAbelianGroup { factors }
    }
}

impl GroupElement {
    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn is_zero(&self) -> bool {
        self.residues.iter().all(|&r| r == 0)
    }
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.factors.iter().map(|x| format!("Z/{x}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.residues)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalization() {
        let g = FiniteAbelianGroup::from_factors(&[2, 3]).unwrap();
        assert_eq!(g.factors(), &[6]);
        let g = FiniteAbelianGroup::from_factors(&[2, 4]).unwrap();
        assert_eq!(g.factors(), &[2, 4]);
        let g = FiniteAbelianGroup::from_factors(&[6, 4, 3]).unwrap();
        assert_eq!(g.factors(), &[6, 12]);
        assert!(FiniteAbelianGroup::from_factors(&[1]).is_err());
    }

    #[test]
    fn arithmetic() {
        let g = FiniteAbelianGroup::from_factors(&[2, 4]).unwrap();
        let a = g.element(&[1, 3]);
        let b = g.element(&[1, 2]);
        assert_eq!(g.add(&a, &b), g.element(&[0, 1]));
        assert_eq!(g.sub(&a, &a), g.zero());
        assert_eq!(g.neg(&b), g.element(&[1, 2]));
        assert_eq!(g.order(), BigUint::from(8u32));
        assert_eq!(g.elements().len(), 8);
    }

    #[test]
    fn primary_parts() {
        let g = FiniteAbelianGroup::from_factors(&[2, 12]).unwrap();
        assert_eq!(g.p_primary(2).factors(), &[2, 4]);
        assert_eq!(g.p_primary(3).factors(), &[3]);
        assert!(g.p_primary(5).is_trivial());
    }
}
