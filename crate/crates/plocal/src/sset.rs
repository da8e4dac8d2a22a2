//! Finitely generated simplicial sets in degeneracy normal form.
//!
//! A set is stored as its nondegenerate generators per degree together with
//! the faces of every generator; all other simplices are reachable as a
//! [`SimplexRef`] (a generator plus a degeneracy word). All sets carry an
//! explicit truncation degree and never materialize simplices above it.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::util::{binomial, subsets};
use crate::word::DegeneracyWord;

/// A simplex in Eilenberg-Zilber normal form: a degeneracy word applied to a
/// nondegenerate generator. Total degree is generator degree plus word length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplexRef {
    gen_degree: usize,
    gen_index: usize,
    word: DegeneracyWord,
}

impl SimplexRef {
    pub fn generator(degree: usize, index: usize) -> Self {
        SimplexRef { gen_degree: degree, gen_index: index, word: DegeneracyWord::identity() }
    }

    pub fn new(gen_degree: usize, gen_index: usize, word: DegeneracyWord) -> Self {
        assert!(word.valid_on_degree(gen_degree), "word out of range for generator degree");
        SimplexRef { gen_degree, gen_index, word }
    }

    pub fn gen_degree(&self) -> usize {
        self.gen_degree
    }

    pub fn gen_index(&self) -> usize {
        self.gen_index
    }

    pub fn word(&self) -> &DegeneracyWord {
        &self.word
    }

    pub fn degree(&self) -> usize {
        self.gen_degree + self.word.len()
    }

    pub fn is_degenerate(&self) -> bool {
        !self.word.is_empty()
    }

    /// `s_j` applied to this simplex.
    pub fn degeneracy(&self, j: usize) -> SimplexRef {
        assert!(j <= self.degree());
        SimplexRef {
            gen_degree: self.gen_degree,
            gen_index: self.gen_index,
            word: self.word.prepend(j),
        }
    }

    /// Render as a whitespace-free token, e.g. `s2-s0-e01`.
    pub fn token(&self, set: &FinSimplicialSet) -> String {
        let name = set.generator_name(self.gen_degree, self.gen_index);
        let mut out = String::new();
        for i in self.word.indices() {
            out.push_str(&format!("s{i}-"));
        }
        out.push_str(name);
        out
    }
}

impl fmt::Debug for SimplexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            write!(f, "g{}_{}", self.gen_degree, self.gen_index)
        } else {
            write!(f, "{:?} g{}_{}", self.word, self.gen_degree, self.gen_index)
        }
    }
}

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("degree {0} above the declared top degree {1}")]
    DegreeOutOfRange(usize, usize),
    #[error("missing face d_{i} of generator `{name}`")]
    MissingFace { name: String, i: usize },
    #[error("face d_{i} of `{name}` has degree {got}, expected {expected}")]
    FaceDegreeMismatch { name: String, i: usize, got: usize, expected: usize },
    #[error("face d_{i} of `{name}` references an unknown generator (degree {degree}, index {index})")]
    Unresolved { name: String, i: usize, degree: usize, index: usize },
}

/// Incremental constructor for [`FinSimplicialSet`].
pub struct SsetBuilder {
    top_degree: usize,
    gens: Vec<Vec<String>>,
    names: HashMap<String, (usize, usize)>,
    faces: Vec<Vec<Vec<Option<SimplexRef>>>>,
}

impl SsetBuilder {
    pub fn new(top_degree: usize) -> Self {
        SsetBuilder {
            top_degree,
            gens: vec![Vec::new(); top_degree + 1],
            names: HashMap::new(),
            faces: vec![Vec::new(); top_degree + 1],
        }
    }

    pub fn add_generator(
        &mut self,
        degree: usize,
        name: impl Into<String>,
    ) -> Result<usize, BuildError> {
        let name = name.into();
        if degree > self.top_degree {
            return Err(BuildError::DegreeOutOfRange(degree, self.top_degree));
        }
        if self.names.contains_key(&name) {
            return Err(BuildError::DuplicateName(name));
        }
        let index = self.gens[degree].len();
        self.names.insert(name.clone(), (degree, index));
        self.gens[degree].push(name);
        self.faces[degree].push(vec![None; if degree == 0 { 0 } else { degree + 1 }]);
        Ok(index)
    }

    pub fn set_face(&mut self, degree: usize, gen: usize, i: usize, face: SimplexRef) {
        self.faces[degree][gen][i] = Some(face);
    }

    pub fn lookup(&self, name: &str) -> Option<(usize, usize)> {
        self.names.get(name).copied()
    }

    pub fn finish(self) -> Result<FinSimplicialSet, BuildError> {
        let mut faces = Vec::with_capacity(self.top_degree + 1);
        for (degree, per_gen) in self.faces.into_iter().enumerate() {
            let mut table = Vec::with_capacity(per_gen.len());
            for (gen, entries) in per_gen.into_iter().enumerate() {
                let name = || self.gens[degree][gen].clone();
                let mut resolved = Vec::with_capacity(entries.len());
                for (i, entry) in entries.into_iter().enumerate() {
                    let r = entry.ok_or_else(|| BuildError::MissingFace { name: name(), i })?;
                    if r.degree() + 1 != degree {
                        return Err(BuildError::FaceDegreeMismatch {
                            name: name(),
                            i,
                            got: r.degree(),
                            expected: degree - 1,
                        });
                    }
                    let in_range = r.gen_degree <= self.top_degree
                        && r.gen_index < self.gens[r.gen_degree].len();
                    if !in_range {
                        return Err(BuildError::Unresolved {
                            name: name(),
                            i,
                            degree: r.gen_degree,
                            index: r.gen_index,
                        });
                    }
                    resolved.push(r);
                }
                table.push(resolved);
            }
            faces.push(table);
        }
        Ok(FinSimplicialSet { top_degree: self.top_degree, gens: self.gens, faces })
    }
}

/// A finitely generated simplicial set truncated at `top_degree`.
#[derive(Clone, PartialEq, Eq)]
pub struct FinSimplicialSet {
    top_degree: usize,
    gens: Vec<Vec<String>>,
    /// faces[q][g][i] = d_i of generator g in degree q (q >= 1)
    faces: Vec<Vec<Vec<SimplexRef>>>,
}

impl FinSimplicialSet {
    /// The one-point simplicial set.
    pub fn point() -> Self {
        let mut b = SsetBuilder::new(0);
        b.add_generator(0, "pt").unwrap();
        b.finish().unwrap()
    }

    /// The standard n-simplex; generators are the nonempty vertex subsets of
    /// `{0..n}`, named by their vertices (`0.2` is the edge from 0 to 2).
    pub fn standard(n: usize) -> Self {
        let mut b = SsetBuilder::new(n);
        let mut ids: Vec<HashMap<Vec<usize>, usize>> = vec![HashMap::new(); n + 1];
        for q in 0..=n {
            for sub in subsets(n + 1, q + 1) {
                let name =
                    sub.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(".");
                let idx = b.add_generator(q, name).unwrap();
                ids[q].insert(sub, idx);
            }
        }
        for q in 1..=n {
            for (sub, &g) in ids[q].clone().iter() {
                for i in 0..=q {
                    let mut face = sub.clone();
                    face.remove(i);
                    let fg = ids[q - 1][&face];
                    b.set_face(q, g, i, SimplexRef::generator(q - 1, fg));
                }
            }
        }
        b.finish().unwrap()
    }

    pub fn top_degree(&self) -> usize {
        self.top_degree
    }

    pub fn generator_count(&self, degree: usize) -> usize {
        if degree > self.top_degree {
            0
        } else {
            self.gens[degree].len()
        }
    }

    pub fn generator_name(&self, degree: usize, index: usize) -> &str {
        &self.gens[degree][index]
    }

    pub fn generator_index(&self, name: &str) -> Option<(usize, usize)> {
        for (q, names) in self.gens.iter().enumerate() {
            if let Some(i) = names.iter().position(|n| n == name) {
                return Some((q, i));
            }
        }
        None
    }

    /// Nondegenerate generator counts per degree.
    pub fn nondegenerate_counts(&self) -> Vec<usize> {
        self.gens.iter().map(|g| g.len()).collect()
    }

    /// Total number of nondegenerate generators.
    pub fn total_nondegenerate(&self) -> usize {
        self.gens.iter().map(|g| g.len()).sum()
    }

    /// Face of a generator, straight from the table.
    pub fn generator_face(&self, degree: usize, gen: usize, i: usize) -> &SimplexRef {
        &self.faces[degree][gen][i]
    }

    /// `d_i` of an arbitrary simplex, rewritten to normal form via the
    /// face/degeneracy commutation identities.
    pub fn face_of(&self, x: &SimplexRef, i: usize) -> SimplexRef {
        let degree = x.degree();
        assert!(degree >= 1 && i <= degree, "face index {i} out of range for degree {degree}");
        if x.word.is_empty() {
            return self.faces[x.gen_degree][x.gen_index][i].clone();
        }
        let (outer, residual) = x.word.commute_face(i);
        match residual {
            None => SimplexRef { gen_degree: x.gen_degree, gen_index: x.gen_index, word: outer },
            Some(fi) => {
                let base = &self.faces[x.gen_degree][x.gen_index][fi];
                SimplexRef {
                    gen_degree: base.gen_degree,
                    gen_index: base.gen_index,
                    word: outer.compose(&base.word),
                }
            }
        }
    }

    /// Restriction to degrees `<= k` (a genuine subobject: faces only ever
    /// lower degree). For `k >= top_degree` this is the identity.
    pub fn skeleton(&self, k: usize) -> FinSimplicialSet {
        if k >= self.top_degree {
            return self.clone();
        }
        FinSimplicialSet {
            top_degree: k,
            gens: self.gens[..=k].to_vec(),
            faces: self.faces[..=k].to_vec(),
        }
    }

    /// All n-simplices (degenerate ones included) in a deterministic order.
    pub fn simplices(&self, n: usize) -> Vec<SimplexRef> {
        let mut out = Vec::new();
        for q in 0..=n.min(self.top_degree) {
            let r = n - q;
            let words: Vec<DegeneracyWord> = subsets(q + r, r)
                .into_iter()
                .map(|mut s| {
                    s.reverse();
                    DegeneracyWord::from_decreasing(s)
                })
                .collect();
            for g in 0..self.gens[q].len() {
                for w in &words {
                    out.push(SimplexRef { gen_degree: q, gen_index: g, word: w.clone() });
                }
            }
        }
        out
    }

    /// Number of n-simplices, degenerate ones included.
    pub fn simplex_count(&self, n: usize) -> u128 {
        (0..=n.min(self.top_degree))
            .map(|q| self.gens[q].len() as u128 * binomial(n, q))
            .sum()
    }

    /// Check `d_i d_j = d_{j-1} d_i` for all `i < j` on every generator.
    pub fn check_simplicial_identities(&self) -> IdentityReport {
        let mut violations = Vec::new();
        for q in 2..=self.top_degree {
            for g in 0..self.gens[q].len() {
                let x = SimplexRef::generator(q, g);
                for j in 1..=q {
                    for i in 0..j {
                        let left = self.face_of(&self.face_of(&x, j), i);
                        let right = self.face_of(&self.face_of(&x, i), j - 1);
                        if left != right {
                            violations.push(IdentityViolation {
                                degree: q,
                                generator: g,
                                i,
                                j,
                                left,
                                right,
                            });
                        }
                    }
                }
            }
        }
        IdentityReport { violations }
    }
}

impl fmt::Debug for FinSimplicialSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FinSimplicialSet(top={}, gens={:?})",
            self.top_degree,
            self.nondegenerate_counts()
        )
    }
}

/// Outcome of the simplicial identity check; empty iff the set is valid.
#[derive(Debug, Default)]
pub struct IdentityReport {
    pub violations: Vec<IdentityViolation>,
}

impl IdentityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug)]
pub struct IdentityViolation {
    pub degree: usize,
    pub generator: usize,
    pub i: usize,
    pub j: usize,
    pub left: SimplexRef,
    pub right: SimplexRef,
}

impl IdentityViolation {
    pub fn describe(&self, set: &FinSimplicialSet) -> String {
        format!(
            "d_{} d_{} != d_{} d_{} on generator `{}` (degree {}): {} vs {}",
            self.i,
            self.j,
            self.j - 1,
            self.i,
            set.generator_name(self.degree, self.generator),
            self.degree,
            self.left.token(set),
            self.right.token(set),
        )
    }
}

/// Cartesian product through a given degree, together with the pair
/// bookkeeping needed to map between pair form and normal form.
pub struct ProductSet {
    pub set: FinSimplicialSet,
    pub left: FinSimplicialSet,
    pub right: FinSimplicialSet,
    pairs: Vec<Vec<(SimplexRef, SimplexRef)>>,
    index: Vec<HashMap<(SimplexRef, SimplexRef), usize>>,
}

/// Cartesian product of two simplicial sets through degree `up_to`.
/// Nondegenerate generators are the simplex pairs of equal total degree
/// whose degeneracy words share no index; faces act componentwise.
pub fn product(a: &FinSimplicialSet, b: &FinSimplicialSet, up_to: usize) -> ProductSet {
    let mut pairs: Vec<Vec<(SimplexRef, SimplexRef)>> = Vec::with_capacity(up_to + 1);
    let mut index: Vec<HashMap<(SimplexRef, SimplexRef), usize>> = Vec::with_capacity(up_to + 1);
    let mut builder = SsetBuilder::new(up_to);
    for n in 0..=up_to {
        let mut level = Vec::new();
        let mut lookup = HashMap::new();
        for x in a.simplices(n) {
            for y in b.simplices(n) {
                let disjoint = x.word().indices().iter().all(|i| !y.word().contains(*i));
                if disjoint {
                    let name = format!("({}|{})", x.token(a), y.token(b));
                    let idx = builder.add_generator(n, name).expect("product names are unique");
                    lookup.insert((x.clone(), y.clone()), idx);
                    level.push((x.clone(), y));
                }
            }
        }
        pairs.push(level);
        index.push(lookup);
    }
    for n in 1..=up_to {
        for (g, (x, y)) in pairs[n].iter().enumerate() {
            for i in 0..=n {
                let fx = a.face_of(x, i);
                let fy = b.face_of(y, i);
                let r = normalize_pair(a, b, fx, fy, &index);
                builder.set_face(n, g, i, r);
            }
        }
    }
    let set = builder.finish().expect("product construction is complete");
    ProductSet { set, left: a.clone(), right: b.clone(), pairs, index }
}

/// Rewrite a simplex pair into normal form over the product generators:
/// factor out the shared degeneracies, then look the core pair up.
fn normalize_pair(
    a: &FinSimplicialSet,
    b: &FinSimplicialSet,
    mut x: SimplexRef,
    mut y: SimplexRef,
    index: &[HashMap<(SimplexRef, SimplexRef), usize>],
) -> SimplexRef {
    let mut outer = Vec::new();
    loop {
        let common = x
            .word()
            .indices()
            .iter()
            .rev() // ascending
            .find(|i| y.word().contains(**i))
            .copied();
        match common {
            None => break,
            Some(j) => {
                x = a.face_of(&x, j);
                y = b.face_of(&y, j);
                outer.push(j);
            }
        }
    }
    let degree = x.degree();
    let core = index[degree][&(x, y)];
    SimplexRef::new(degree, core, DegeneracyWord::normalize(&outer))
}

impl ProductSet {
    pub fn pair_of(&self, degree: usize, gen: usize) -> &(SimplexRef, SimplexRef) {
        &self.pairs[degree][gen]
    }

    /// Normal form of an arbitrary simplex pair of equal total degree.
    pub fn ref_of_pair(&self, x: &SimplexRef, y: &SimplexRef) -> SimplexRef {
        assert_eq!(x.degree(), y.degree());
        normalize_pair(&self.left, &self.right, x.clone(), y.clone(), &self.index)
    }
}
