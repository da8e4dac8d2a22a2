//! Simplicial cochains on standard simplices with finite abelian
//! coefficients: the simplices of the standard Eilenberg-MacLane models.
//!
//! A `Cochain` of degree k on the n-simplex labels every (k+1)-element
//! vertex subset of `{0..n}` with a group element. Cocycles are the
//! cochains killed by the alternating-sum coboundary; the free-labeling
//! parametrization below exhibits the cocycles as exactly the labelings of
//! the subsets containing vertex 0.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::abelian::{FiniteAbelianGroup, GroupElement};
use crate::monotone::MonotoneMap;
use crate::util::{binomial, subset_rank, subsets, subsets_cached};
use crate::word::DegeneracyWord;

// Label bookkeeping is the hot path of every EM enumeration, so the
// combinatorial plans (which subset feeds which, with which sign) are built
// once per (dim, degree) and shared; all caches are internally synchronized.

/// For each (degree+2)-subset: the label ranks of its faces, alternating.
struct CoboundaryPlan {
    terms: Vec<Vec<(usize, bool)>>,
}

fn coboundary_plan(dim: usize, degree: usize) -> Arc<CoboundaryPlan> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<CoboundaryPlan>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry((dim, degree))
        .or_insert_with(|| {
            let terms = subsets(dim + 1, degree + 2)
                .iter()
                .map(|t| {
                    (0..t.len())
                        .map(|i| {
                            let mut face = t.clone();
                            face.remove(i);
                            (subset_rank(dim + 1, &face), i % 2 == 1)
                        })
                        .collect()
                })
                .collect();
            Arc::new(CoboundaryPlan { terms })
        })
        .clone()
}

/// Free positions and the derivation of every other label from them.
struct ExtendPlan {
    free_ranks: Vec<usize>,
    derived: Vec<(usize, Vec<(usize, bool)>)>,
}

fn extend_plan(dim: usize, degree: usize) -> Arc<ExtendPlan> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<ExtendPlan>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry((dim, degree))
        .or_insert_with(|| {
            let free_ranks = free_subsets(dim, degree)
                .iter()
                .map(|s| subset_rank(dim + 1, s))
                .collect();
            let mut derived = Vec::new();
            for s in subsets(dim + 1, degree + 1) {
                if s.first() == Some(&0) {
                    continue;
                }
                let terms = (0..s.len())
                    .map(|i| {
                        let mut sub = Vec::with_capacity(s.len());
                        sub.push(0);
                        sub.extend(s.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, &v)| v));
                        (subset_rank(dim + 1, &sub), i % 2 == 1)
                    })
                    .collect();
                derived.push((subset_rank(dim + 1, &s), terms));
            }
            Arc::new(ExtendPlan { free_ranks, derived })
        })
        .clone()
}

/// For each output label: the input label it pulls back from, when the map
/// is injective on the subset.
fn pullback_plan(map: &MonotoneMap, degree: usize) -> Arc<Vec<Option<usize>>> {
    type Key = (Vec<usize>, usize, usize);
    static CACHE: OnceLock<Mutex<HashMap<Key, Arc<Vec<Option<usize>>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key =
        ((0..=map.source_dim()).map(|v| map.apply(v)).collect(), map.target_dim(), degree);
    let mut guard = cache.lock().unwrap();
    guard
        .entry(key)
        .or_insert_with(|| {
            let plan = subsets(map.source_dim() + 1, degree + 1)
                .iter()
                .map(|s| {
                    map.image_of_subset(s).map(|img| subset_rank(map.target_dim() + 1, &img))
                })
                .collect();
            Arc::new(plan)
        })
        .clone()
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cochain {
    group: FiniteAbelianGroup,
    dim: usize,
    degree: usize,
    /// one label per (degree+1)-subset of {0..dim}, in lex subset order
    labels: Vec<GroupElement>,
}

impl Cochain {
    pub fn zero(group: &FiniteAbelianGroup, dim: usize, degree: usize) -> Self {
        let count = binomial(dim + 1, degree + 1) as usize;
        Cochain {
            group: group.clone(),
            dim,
            degree,
            labels: vec![group.zero(); count],
        }
    }

    pub fn from_labels(
        group: &FiniteAbelianGroup,
        dim: usize,
        degree: usize,
        labels: Vec<GroupElement>,
    ) -> Self {
        let count = binomial(dim + 1, degree + 1) as usize;
        assert_eq!(labels.len(), count);
        Cochain { group: group.clone(), dim, degree, labels }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn labels(&self) -> &[GroupElement] {
        &self.labels
    }

    pub fn label(&self, subset: &[usize]) -> &GroupElement {
        debug_assert!(subset.len() == self.degree + 1);
        debug_assert!(subset.windows(2).all(|w| w[0] < w[1]));
        &self.labels[subset_rank(self.dim + 1, subset)]
    }

    pub fn set_label(&mut self, subset: &[usize], value: GroupElement) {
        let r = subset_rank(self.dim + 1, subset);
        self.labels[r] = value;
    }

    /// Evaluate on a weakly increasing vertex tuple; tuples with repeated
    /// vertices are degenerate and evaluate to zero.
    pub fn eval_tuple(&self, tuple: &[usize]) -> GroupElement {
        debug_assert!(tuple.len() == self.degree + 1);
        if tuple.windows(2).any(|w| w[0] == w[1]) {
            return self.group.zero();
        }
        self.label(tuple).clone()
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        assert!(self.dim == other.dim && self.degree == other.degree);
        let labels = self
            .labels
            .iter()
            .zip(&other.labels)
            .map(|(a, b)| self.group.add(a, b))
            .collect();
        Cochain { group: self.group.clone(), dim: self.dim, degree: self.degree, labels }
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        assert!(self.dim == other.dim && self.degree == other.degree);
        let labels = self
            .labels
            .iter()
            .zip(&other.labels)
            .map(|(a, b)| self.group.sub(a, b))
            .collect();
        Cochain { group: self.group.clone(), dim: self.dim, degree: self.degree, labels }
    }

    pub fn is_zero(&self) -> bool {
        self.labels.iter().all(|l| l.is_zero())
    }

    /// Pullback along a monotone map into this cochain's simplex:
    /// `(f*c)(S) = c(f(S))` when f is injective on S, zero otherwise.
    /// This realizes every simplicial operator of the EM models.
    pub fn pullback(&self, f: &MonotoneMap) -> Cochain {
        assert_eq!(f.target_dim(), self.dim, "pullback dimension mismatch");
        let plan = pullback_plan(f, self.degree);
        let labels = plan
            .iter()
            .map(|entry| match entry {
                Some(rank) => self.labels[*rank].clone(),
                None => self.group.zero(),
            })
            .collect();
        Cochain { group: self.group.clone(), dim: f.source_dim(), degree: self.degree, labels }
    }

    /// Face operator: restriction to the i-th face of the simplex.
    pub fn face(&self, i: usize) -> Cochain {
        assert!(self.dim >= 1 && i <= self.dim);
        self.pullback(&MonotoneMap::coface(i, self.dim))
    }

    /// Degeneracy operator.
    pub fn degeneracy(&self, i: usize) -> Cochain {
        assert!(i <= self.dim);
        self.pullback(&MonotoneMap::codegeneracy(i, self.dim))
    }

    /// Apply a degeneracy word (outermost letter applied last).
    pub fn apply_word(&self, w: &DegeneracyWord) -> Cochain {
        let mut c = self.clone();
        for &i in w.indices().iter().rev() {
            c = c.degeneracy(i);
        }
        c
    }

    /// The coboundary `δc`, one degree up on the same simplex:
    /// `(δc)(T) = Σ_i (-1)^i c(T \ t_i)`.
    pub fn coboundary(&self) -> Cochain {
        let plan = coboundary_plan(self.dim, self.degree);
        let labels = plan.terms.iter().map(|t| self.alternating_sum(t)).collect();
        Cochain { group: self.group.clone(), dim: self.dim, degree: self.degree + 1, labels }
    }

    fn alternating_sum(&self, terms: &[(usize, bool)]) -> GroupElement {
        let mut acc = self.group.zero();
        for &(rank, negate) in terms {
            let v = &self.labels[rank];
            acc = if negate { self.group.sub(&acc, v) } else { self.group.add(&acc, v) };
        }
        acc
    }

    /// Whether the alternating-sum coboundary vanishes on every
    /// (degree+1)-face; vacuously true when no such face exists.
    pub fn is_cocycle(&self) -> bool {
        let plan = coboundary_plan(self.dim, self.degree);
        plan.terms.iter().all(|t| self.alternating_sum(t).is_zero())
    }

    /// Whether this cochain is in the image of `s_i`, tested by invariance
    /// under the corresponding vertex collapse.
    pub fn is_degenerate_at(&self, i: usize) -> bool {
        debug_assert!(self.dim >= 1 && i < self.dim);
        self.face(i).degeneracy(i) == *self
    }

    pub fn is_degenerate(&self) -> bool {
        self.dim >= 1 && (0..self.dim).any(|i| self.is_degenerate_at(i))
    }

    /// Eilenberg-Zilber normal form: the unique pair (word, nondegenerate
    /// cochain) with `self = s_word(core)`.
    pub fn normal_form(&self) -> (DegeneracyWord, Cochain) {
        let mut word = Vec::new();
        let mut c = self.clone();
        'outer: loop {
            if c.dim == 0 {
                break;
            }
            for i in 0..c.dim {
                if c.is_degenerate_at(i) {
                    word.push(i);
                    c = c.face(i);
                    continue 'outer;
                }
            }
            break;
        }
        (DegeneracyWord::normalize(&word), c)
    }

    /// Free labels of a cochain: the labels on the subsets containing
    /// vertex 0, ordered by the lex order of the remaining vertices.
    /// For cocycles these determine everything (see
    /// [`extend_free_labels`]).
    pub fn free_labels(&self) -> Vec<GroupElement> {
        let plan = extend_plan(self.dim, self.degree);
        plan.free_ranks.iter().map(|&r| self.labels[r].clone()).collect()
    }
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cochain(dim={}, deg={}, labels={:?})", self.dim, self.degree, self.labels)
    }
}

/// The (degree+1)-subsets of {0..dim} containing 0, in lex order.
pub fn free_subsets(dim: usize, degree: usize) -> Vec<Vec<usize>> {
    if degree > dim {
        return Vec::new();
    }
    subsets(dim, degree)
        .into_iter()
        .map(|rest| {
            let mut s = Vec::with_capacity(degree + 1);
            s.push(0);
            s.extend(rest.iter().map(|v| v + 1));
            s
        })
        .collect()
}

/// Extend a free labeling of the 0-containing subsets to the unique cocycle
/// agreeing with it: for a subset not containing 0,
/// `z({a_0..a_k}) = Σ_i (-1)^i z({0} ∪ {a_0..a_k} \ a_i)`.
pub fn extend_free_labels(
    group: &FiniteAbelianGroup,
    dim: usize,
    degree: usize,
    free: &[GroupElement],
) -> Cochain {
    let plan = extend_plan(dim, degree);
    assert_eq!(free.len(), plan.free_ranks.len(), "one free label per 0-containing subset");
    let mut labels = vec![group.zero(); binomial(dim + 1, degree + 1) as usize];
    for (&r, v) in plan.free_ranks.iter().zip(free) {
        labels[r] = v.clone();
    }
    for (out_rank, terms) in &plan.derived {
        let mut acc = group.zero();
        for &(rank, negate) in terms {
            let v = &labels[rank];
            acc = if negate { group.sub(&acc, v) } else { group.add(&acc, v) };
        }
        labels[*out_rank] = acc;
    }
    Cochain { group: group.clone(), dim, degree, labels }
}

/// A section of the coboundary on cocycles: for a (k+1)-cocycle `z`,
/// `(σz)(S) = 0` when `0 ∈ S` and `z({0} ∪ S)` otherwise, so `δ(σz) = z`.
/// This is the contracting cone of the standard simplex in cochain form.
pub fn section_of_cocycle(z: &Cochain) -> Cochain {
    assert!(z.degree() >= 1);
    debug_assert!(z.is_cocycle());
    let dim = z.dim();
    let degree = z.degree() - 1;
    let subs = subsets_cached(dim + 1, degree + 1);
    let labels = subs
        .iter()
        .map(|s| {
            if s.first() == Some(&0) {
                z.group().zero()
            } else {
                let mut t = Vec::with_capacity(s.len() + 1);
                t.push(0);
                t.extend_from_slice(s);
                z.label(&t).clone()
            }
        })
        .collect();
    Cochain::from_labels(z.group(), dim, degree, labels)
}
