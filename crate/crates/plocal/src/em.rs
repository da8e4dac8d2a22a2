//! Standard simplicial models of `K(pi, n)` and `E(pi, n)` for finite
//! abelian `pi`: exact cardinalities, lazy simplex enumeration within
//! declared budgets, and materialized skeleta with face tables.
//!
//! The ℓ-simplices of `K(pi, n)` are the `pi`-valued n-cocycles on the
//! standard ℓ-simplex; `E(pi, n)` uses all n-cochains. Simplicial operators
//! act by cochain pullback.

use std::collections::HashMap;
use std::fmt;

use num::bigint::BigUint;
use thiserror::Error;

use crate::abelian::{FiniteAbelianGroup, GroupElement};
use crate::cochain::{extend_free_labels, free_subsets, Cochain};
use crate::sset::{FinSimplicialSet, SimplexRef, SsetBuilder};
use crate::util::{binomial_big, subsets};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EmKind {
    /// Cocycle model `K(pi, n)`.
    K,
    /// Cochain model `E(pi, n)`; contractible, fibered over `K(pi, n+1)`
    /// by the coboundary map.
    E,
}

impl fmt::Display for EmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EmKind::K => write!(f, "K"),
            EmKind::E => write!(f, "E"),
        }
    }
}

/// Per-degree cap on materialized simplices. EM cardinalities are doubly
/// exponential, so every materializing constructor checks this first.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub per_degree: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { per_degree: 1_000_000 }
    }
}

#[derive(Debug, Error)]
#[error("degree {degree} needs {needed} simplices, over the budget of {budget}")]
pub struct BudgetError {
    pub degree: usize,
    pub needed: BigUint,
    pub budget: u64,
}

/// Number of simplices of `K(pi,k)_n` or `E(pi,k)_n`:
/// `|pi|^C(n,k)` for K, `|pi|^C(n+1,k+1)` for E.
pub fn em_cardinality(group: &FiniteAbelianGroup, k: usize, n: usize, kind: EmKind) -> BigUint {
    assert!(k >= 1, "EM degree must be >= 1");
    let exponent = match kind {
        EmKind::K => binomial_big(n, k),
        EmKind::E => binomial_big(n + 1, k + 1),
    };
    let e = u32::try_from(&exponent).expect("exponent fits u32 at workbench scale");
    group.order().pow(e)
}

/// Descriptor of an EM model (nothing materialized).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EmSpace {
    pub group: FiniteAbelianGroup,
    pub degree: usize,
    pub kind: EmKind,
}

impl EmSpace {
    pub fn k(group: FiniteAbelianGroup, degree: usize) -> Self {
        assert!(degree >= 1);
        EmSpace { group, degree, kind: EmKind::K }
    }

    pub fn e(group: FiniteAbelianGroup, degree: usize) -> Self {
        assert!(degree >= 1);
        EmSpace { group, degree, kind: EmKind::E }
    }

    pub fn cardinality(&self, n: usize) -> BigUint {
        em_cardinality(&self.group, self.degree, n, self.kind)
    }

    /// Lazily enumerate all n-simplices in a deterministic order: mixed-radix
    /// counting over the defining labels (free labels for K, all labels
    /// for E), group elements in lex order.
    pub fn simplices(&self, n: usize) -> CochainEnumerator {
        let digits = match self.kind {
            EmKind::K => free_subsets(n, self.degree).len(),
            EmKind::E => subsets(n + 1, self.degree + 1).len(),
        };
        CochainEnumerator {
            group: self.group.clone(),
            elements: self.group.elements(),
            dim: n,
            degree: self.degree,
            kind: self.kind,
            counter: vec![0; digits],
            done: false,
        }
    }

    pub fn name(&self) -> String {
        format!("{}({:?},{})", self.kind, self.group, self.degree)
    }
}

/// Odometer over label assignments, yielding each simplex exactly once.
pub struct CochainEnumerator {
    group: FiniteAbelianGroup,
    elements: Vec<GroupElement>,
    dim: usize,
    degree: usize,
    kind: EmKind,
    counter: Vec<usize>,
    done: bool,
}

impl Iterator for CochainEnumerator {
    type Item = Cochain;

    fn next(&mut self) -> Option<Cochain> {
        if self.done {
            return None;
        }
        let labels: Vec<GroupElement> =
            self.counter.iter().map(|&i| self.elements[i].clone()).collect();
        let item = match self.kind {
            EmKind::K => extend_free_labels(&self.group, self.dim, self.degree, &labels),
            EmKind::E => Cochain::from_labels(&self.group, self.dim, self.degree, labels),
        };
        // advance the odometer
        let radix = self.elements.len();
        let mut pos = self.counter.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.counter[pos] += 1;
            if self.counter[pos] < radix {
                break;
            }
            self.counter[pos] = 0;
        }
        Some(item)
    }
}

/// A materialized EM skeleton: the simplicial set of nondegenerate
/// simplices through a given degree, plus the cochain payload of every
/// generator for mapping between cochains and normal-form references.
pub struct EmSkeleton {
    pub space: EmSpace,
    pub set: FinSimplicialSet,
    payload: Vec<Vec<Cochain>>,
    index: Vec<HashMap<Cochain, usize>>,
}

impl EmSkeleton {
    pub fn build(space: EmSpace, up_to: usize, budget: &Budget) -> Result<Self, BudgetError> {
        for n in 0..=up_to {
            let card = space.cardinality(n);
            if card > BigUint::from(budget.per_degree) {
                return Err(BudgetError { degree: n, needed: card, budget: budget.per_degree });
            }
        }
        let mut payload: Vec<Vec<Cochain>> = Vec::with_capacity(up_to + 1);
        let mut index: Vec<HashMap<Cochain, usize>> = Vec::with_capacity(up_to + 1);
        let mut builder = SsetBuilder::new(up_to);
        for n in 0..=up_to {
            let mut level = Vec::new();
            let mut lookup = HashMap::new();
            for c in space.simplices(n) {
                if c.is_degenerate() {
                    continue;
                }
                let idx = builder
                    .add_generator(n, format!("c{}_{}", n, level.len()))
                    .expect("generated names are unique");
                lookup.insert(c.clone(), idx);
                level.push(c);
            }
            payload.push(level);
            index.push(lookup);
        }
        for n in 1..=up_to {
            for g in 0..payload[n].len() {
                for i in 0..=n {
                    let face = payload[n][g].face(i);
                    let (word, core) = face.normal_form();
                    let core_idx = index[core.dim()][&core];
                    builder.set_face(n, g, i, SimplexRef::new(core.dim(), core_idx, word));
                }
            }
        }
        let set = builder.finish().expect("EM face tables are complete");
        Ok(EmSkeleton { space, set, payload, index })
    }

    pub fn generator_cochain(&self, degree: usize, index: usize) -> &Cochain {
        &self.payload[degree][index]
    }

    /// The cochain of an arbitrary simplex reference.
    pub fn cochain_of(&self, r: &SimplexRef) -> Cochain {
        self.payload[r.gen_degree()][r.gen_index()].apply_word(r.word())
    }

    /// Normal-form reference of an arbitrary simplex given as a cochain.
    pub fn ref_of(&self, c: &Cochain) -> SimplexRef {
        let (word, core) = c.normal_form();
        let idx = *self.index[core.dim()]
            .get(&core)
            .expect("cochain lies inside the built skeleton");
        SimplexRef::new(core.dim(), idx, word)
    }
}

/// Outcome of the free-label bijection check for `K(pi,k)_n`.
#[derive(Debug)]
pub struct BijectionReport {
    pub group: String,
    pub k: usize,
    pub n: usize,
    pub expected: BigUint,
    pub enumerated: BigUint,
    /// every enumerated cocycle round-trips through its free labels
    pub round_trip_ok: bool,
    /// every cochain passing `is_cocycle` is reproduced by its free labels
    /// (checked only when the full cochain enumeration fits the budget)
    pub onto_checked: bool,
    pub onto_ok: bool,
}

impl BijectionReport {
    pub fn passed(&self) -> bool {
        self.expected == self.enumerated
            && self.round_trip_ok
            && (!self.onto_checked || self.onto_ok)
    }
}

/// Exhaustively verify that free labelings biject onto the cocycles.
pub fn verify_free_label_bijection(
    group: &FiniteAbelianGroup,
    k: usize,
    n: usize,
    budget: &Budget,
) -> BijectionReport {
    let kspace = EmSpace::k(group.clone(), k);
    let expected = kspace.cardinality(n);
    let mut enumerated = BigUint::from(0u32);
    let mut round_trip_ok = true;
    for c in kspace.simplices(n) {
        enumerated += 1u32;
        if !c.is_cocycle() {
            round_trip_ok = false;
            continue;
        }
        let back = extend_free_labels(group, n, k, &c.free_labels());
        if back != c {
            round_trip_ok = false;
        }
    }
    // onto: scan every cochain when affordable
    let espace = EmSpace::e(group.clone(), k);
    let total = espace.cardinality(n);
    let onto_checked = total <= BigUint::from(budget.per_degree);
    let mut onto_ok = true;
    if onto_checked {
        let mut cocycles = BigUint::from(0u32);
        for c in espace.simplices(n) {
            if c.is_cocycle() {
                cocycles += 1u32;
                if extend_free_labels(group, n, k, &c.free_labels()) != c {
                    onto_ok = false;
                }
            }
        }
        if cocycles != expected {
            onto_ok = false;
        }
    }
    BijectionReport {
        group: format!("{group:?}"),
        k,
        n,
        expected,
        enumerated,
        round_trip_ok,
        onto_checked,
        onto_ok,
    }
}

/// Check the inclusion-exclusion identity between generator counts and the
/// closed-form cardinalities: the number of n-simplices reachable from the
/// generators must equal `|EM_n|` in every degree of the skeleton.
pub fn verify_counts(skel: &EmSkeleton) -> Vec<(usize, BigUint, BigUint, bool)> {
    (0..=skel.set.top_degree())
        .map(|n| {
            let actual = BigUint::from(skel.set.simplex_count(n));
            let expected = skel.space.cardinality(n);
            let ok = actual == expected;
            (n, actual, expected, ok)
        })
        .collect()
}
