//! Weakly monotone maps between standard simplices.

/// A weakly increasing map `[source_dim] -> [target_dim]`, the simplicial
/// operators of the standard simplices. Cochain pullback is defined along
/// these maps; faces and degeneracies are the special cases below.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonotoneMap {
    source_dim: usize,
    target_dim: usize,
    values: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(source_dim: usize, target_dim: usize, values: Vec<usize>) -> Self {
        assert_eq!(values.len(), source_dim + 1);
        assert!(values.iter().all(|&v| v <= target_dim), "value out of range");
        assert!(values.windows(2).all(|w| w[0] <= w[1]), "values must be weakly increasing");
        MonotoneMap { source_dim, target_dim, values }
    }

    pub fn identity(n: usize) -> Self {
        MonotoneMap::new(n, n, (0..=n).collect())
    }

    /// The injection `[n-1] -> [n]` skipping `i`; pullback along it is the
    /// face operator `d_i`.
    pub fn coface(i: usize, n: usize) -> Self {
        assert!(n >= 1 && i <= n);
        let values = (0..=n).filter(|&v| v != i).collect();
        MonotoneMap::new(n - 1, n, values)
    }

    /// The surjection `[n+1] -> [n]` repeating `i`; pullback along it is the
    /// degeneracy operator `s_i`.
    pub fn codegeneracy(i: usize, n: usize) -> Self {
        assert!(i <= n);
        let mut values = Vec::with_capacity(n + 2);
        for v in 0..=n {
            values.push(v);
            if v == i {
                values.push(v);
            }
        }
        MonotoneMap::new(n + 1, n, values)
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn apply(&self, v: usize) -> usize {
        self.values[v]
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &MonotoneMap) -> MonotoneMap {
        assert_eq!(inner.target_dim, self.source_dim);
        let values = inner.values.iter().map(|&v| self.values[v]).collect();
        MonotoneMap::new(inner.source_dim, self.target_dim, values)
    }

    /// Image of a sorted vertex subset; `None` when the map is not injective
    /// on it.
    pub fn image_of_subset(&self, subset: &[usize]) -> Option<Vec<usize>> {
        let mut out = Vec::with_capacity(subset.len());
        for &v in subset {
            let w = self.values[v];
            if out.last() == Some(&w) {
                return None;
            }
            out.push(w);
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cofaces_and_codegeneracies() {
        assert_eq!(MonotoneMap::coface(1, 2).values, vec![0, 2]);
        assert_eq!(MonotoneMap::codegeneracy(0, 1).values, vec![0, 0, 1]);
        // simplicial identity σ_i ∘ δ_i = id on [n]
        let n = 3;
        for i in 0..=n {
            let comp = MonotoneMap::codegeneracy(i, n).compose(&MonotoneMap::coface(i, n + 1));
            assert_eq!(comp, MonotoneMap::identity(n));
        }
    }

    #[test]
    fn subset_images() {
        let s0 = MonotoneMap::codegeneracy(0, 1);
        assert_eq!(s0.image_of_subset(&[0, 2]), Some(vec![0, 1]));
        assert_eq!(s0.image_of_subset(&[0, 1]), None);
    }
}
