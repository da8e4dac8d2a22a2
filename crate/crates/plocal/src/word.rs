//! Degeneracy words in Eilenberg-Zilber normal form.

use std::fmt;

/// A composite of degeneracy operators `s_{i_1} s_{i_2} ... s_{i_r}` in
/// normal form, i.e. with strictly decreasing indices. The empty word is
/// the identity operator. Operators compose right-to-left: the last index
/// in the list is applied first.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegeneracyWord {
    indices: Vec<usize>,
}

impl DegeneracyWord {
    pub fn identity() -> Self {
        DegeneracyWord { indices: Vec::new() }
    }

    /// Build from indices already in strictly decreasing order.
    pub fn from_decreasing(indices: Vec<usize>) -> Self {
        assert!(
            indices.windows(2).all(|w| w[0] > w[1]),
            "degeneracy word indices must be strictly decreasing: {indices:?}"
        );
        DegeneracyWord { indices }
    }

    /// Normal form of an arbitrary composite `s_{w[0]} ∘ s_{w[1]} ∘ ...`
    /// (leftmost applied last), using `s_i s_j = s_{j+1} s_i` for `i <= j`.
    pub fn normalize(word: &[usize]) -> Self {
        let mut out = DegeneracyWord::identity();
        for &j in word.iter().rev() {
            out = out.prepend(j);
        }
        out
    }

    /// The normal form of `s_j ∘ self`.
    pub fn prepend(&self, j: usize) -> Self {
        // s_j commutes past every letter u >= j, bumping it to u+1.
        let split = self.indices.partition_point(|&u| u >= j);
        let mut indices = Vec::with_capacity(self.indices.len() + 1);
        indices.extend(self.indices[..split].iter().map(|&u| u + 1));
        indices.push(j);
        indices.extend_from_slice(&self.indices[split..]);
        DegeneracyWord::from_decreasing(indices)
    }

    /// The normal form of `self ∘ inner` (inner applied first).
    pub fn compose(&self, inner: &Self) -> Self {
        let mut out = inner.clone();
        for &j in self.indices.iter().rev() {
            out = out.prepend(j);
        }
        out
    }

    /// Commute a face operator `d_i` past this word:
    /// `d_i ∘ s_W = s_{W'} ∘ d_{i'}` (or just `s_{W'}` when the face is
    /// absorbed by one of the letters). Returns `(W', Some(i'))` or
    /// `(W', None)` in the absorbed case.
    pub fn commute_face(&self, i: usize) -> (DegeneracyWord, Option<usize>) {
        let mut out: Vec<usize> = Vec::with_capacity(self.indices.len());
        let mut fi = i;
        for (pos, &j) in self.indices.iter().enumerate() {
            if fi < j {
                out.push(j - 1);
            } else if fi == j || fi == j + 1 {
                out.extend_from_slice(&self.indices[pos + 1..]);
                return (DegeneracyWord::from_decreasing(out), None);
            } else {
                out.push(j);
                fi -= 1;
            }
        }
        (DegeneracyWord::from_decreasing(out), Some(fi))
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.indices.contains(&j)
    }

    /// Whether the word can act on a simplex of the given degree, i.e.
    /// every letter is in range at the moment it is applied.
    pub fn valid_on_degree(&self, degree: usize) -> bool {
        let r = self.len();
        self.indices
            .iter()
            .enumerate()
            .all(|(pos, &idx)| idx <= degree + r - pos - 1)
    }
}

impl fmt::Debug for DegeneracyWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "id");
        }
        let parts: Vec<String> = self.indices.iter().map(|i| format!("s{i}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}
