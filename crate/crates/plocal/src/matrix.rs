//! Dense exact-integer matrices: Smith normal form, kernels, solving.
//!
//! This is the substrate for all Z and Z_(p) linear algebra in the crate.
//! Pivoting is greedy on the smallest nonzero entry; the unimodular
//! transforms are always tracked (the matrices in this pipeline are small,
//! exactness matters more than asymptotics).

use std::fmt;
use std::ops::{Index, IndexMut};

use num::bigint::{BigInt, BigUint};
use num::integer::Integer;
use num::traits::{One, Signed, Zero};
use thiserror::Error;

use crate::util::valuation_big;

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c));
        IntMatrix::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn column(&self, j: usize) -> IntMatrix {
        IntMatrix::from_fn(self.rows, 1, |i, _| self[(i, j)].clone())
    }

    pub fn hstack(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, rhs.rows);
        IntMatrix::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                rhs[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows);
        IntMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = BigInt::zero();
            for k in 0..self.cols {
                if !self[(i, k)].is_zero() && !rhs[(k, j)].is_zero() {
                    acc += &self[(i, k)] * &rhs[(k, j)];
                }
            }
            acc
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row_a -= q * row_b
    fn row_sub(&mut self, a: usize, b: usize, q: &BigInt) {
        for j in 0..self.cols {
            let t = &self[(b, j)] * q;
            self[(a, j)] -= t;
        }
    }

    /// col_a -= q * col_b
    fn col_sub(&mut self, a: usize, b: usize, q: &BigInt) {
        for i in 0..self.rows {
            let t = &self[(i, b)] * q;
            self[(i, a)] -= t;
        }
    }

    fn row_add(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            let t = self[(b, j)].clone();
            self[(a, j)] += t;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let t = -self[(a, j)].clone();
            self[(a, j)] = t;
        }
    }

    /// Smallest-|value| nonzero entry of the trailing submatrix, lowest
    /// (row, col) on ties.
    fn pivot_at(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                if self[(i, j)].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some(b) => {
                        if self[(i, j)].abs() < self[b].abs() {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
        best
    }

    /// Smith normal form `U * self * V = D` with `U`, `V` unimodular and `D`
    /// diagonal with the divisibility chain `d_1 | d_2 | ...`, all `d_i >= 0`.
    pub fn smith(&self) -> SmithNormalForm {
        let mut d = self.clone();
        let mut u = IntMatrix::identity(self.rows);
        let mut v = IntMatrix::identity(self.cols);
        let n = self.rows.min(self.cols);
        let mut t = 0;
        while t < n {
            let Some((pi, pj)) = d.pivot_at(t) else { break };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            loop {
                // clear below and to the right of the pivot
                let mut clean = true;
                for i in t + 1..d.rows {
                    if !d[(i, t)].is_zero() {
                        let q = &d[(i, t)] / &d[(t, t)];
                        if !q.is_zero() {
                            d.row_sub(i, t, &q);
                            u.row_sub(i, t, &q);
                        }
                        if !d[(i, t)].is_zero() {
                            clean = false;
                        }
                    }
                }
                for j in t + 1..d.cols {
                    if !d[(t, j)].is_zero() {
                        let q = &d[(t, j)] / &d[(t, t)];
                        if !q.is_zero() {
                            d.col_sub(j, t, &q);
                            v.col_sub(j, t, &q);
                        }
                        if !d[(t, j)].is_zero() {
                            clean = false;
                        }
                    }
                }
                if !clean {
                    // a remainder smaller than the pivot appeared; re-pivot
                    let (pi, pj) = d.pivot_at(t).expect("nonzero remainder exists");
                    d.swap_rows(t, pi);
                    u.swap_rows(t, pi);
                    d.swap_cols(t, pj);
                    v.swap_cols(t, pj);
                    continue;
                }
                // divisibility sweep over the remaining block
                let mut offender = None;
                'scan: for i in t + 1..d.rows {
                    for j in t + 1..d.cols {
                        if !(&d[(i, j)] % &d[(t, t)]).is_zero() {
                            offender = Some(i);
                            break 'scan;
                        }
                    }
                }
                match offender {
                    Some(i) => {
                        d.row_add(t, i);
                        u.row_add(t, i);
                    }
                    None => break,
                }
            }
            if d[(t, t)].is_negative() {
                d.negate_row(t);
                u.negate_row(t);
            }
            t += 1;
        }
        SmithNormalForm { u, d, v }
    }

    /// Nonzero diagonal entries of the Smith form (the chain `d_1 | d_2 | ...`,
    /// units included).
    pub fn elementary_divisors(&self) -> Vec<BigUint> {
        let snf = self.smith();
        let mut out = Vec::new();
        for t in 0..self.rows.min(self.cols) {
            if snf.d[(t, t)].is_zero() {
                break;
            }
            out.push(snf.d[(t, t)].magnitude().clone());
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.elementary_divisors().len()
    }

    /// Columns forming a basis of the integral kernel. Integral kernels are
    /// saturated, so this is also a basis of the kernel over Z_(p) for every
    /// prime p.
    pub fn kernel_basis(&self) -> IntMatrix {
        let snf = self.smith();
        let rank = (0..self.rows.min(self.cols))
            .take_while(|&t| !snf.d[(t, t)].is_zero())
            .count();
        IntMatrix::from_fn(self.cols, self.cols - rank, |i, j| snf.v[(i, rank + j)].clone())
    }

    /// Determinant by fraction-free Gaussian elimination (Bareiss).
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = t / &prev;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        sign * m[(n - 1, n - 1)].clone()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

pub struct SmithNormalForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

/// Coefficient ring for solving and homology comparisons: the integers, or
/// the p-local integers (denominators coprime to p allowed).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Locality {
    Integral,
    Local(u64),
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("the system has no rational solution")]
    Inconsistent,
    #[error("solution requires denominator {0}, not a unit in the coefficient ring")]
    DenominatorNotUnit(BigUint),
}

/// A solution of `A * x = den * b` with `den >= 1` a unit in the requested
/// coefficient ring (so `x / den` solves the original system over that ring).
pub struct Solution {
    pub x: IntMatrix,
    pub denominator: BigUint,
}

impl IntMatrix {
    /// Solve `self * X = B` over Z or Z_(p). Over Z the denominator is
    /// forced to 1; over Z_(p) it only needs to be coprime to p.
    pub fn solve(&self, b: &IntMatrix, locality: Locality) -> Result<Solution, SolveError> {
        assert_eq!(self.rows, b.rows);
        let snf = self.smith();
        let ub = snf.u.mul(b);
        let n = self.rows.min(self.cols);
        let rank = (0..n).take_while(|&t| !snf.d[(t, t)].is_zero()).count();
        for i in rank..self.rows {
            for j in 0..b.cols() {
                if !ub[(i, j)].is_zero() {
                    return Err(SolveError::Inconsistent);
                }
            }
        }
        // common denominator: lcm over cells of d_i / gcd(d_i, (UB)_ij)
        let mut den = BigInt::one();
        for i in 0..rank {
            for j in 0..b.cols() {
                let g = snf.d[(i, i)].gcd(&ub[(i, j)]);
                let need = &snf.d[(i, i)] / g;
                den = den.lcm(&need);
            }
        }
        let den_mag = den.magnitude().clone();
        match locality {
            Locality::Integral => {
                if !den_mag.is_one() {
                    return Err(SolveError::DenominatorNotUnit(den_mag));
                }
            }
            Locality::Local(p) => {
                if !den_mag.is_one() && valuation_big(&den_mag, p) > 0 {
                    return Err(SolveError::DenominatorNotUnit(den_mag));
                }
            }
        }
        let mut z = IntMatrix::zeros(self.cols, b.cols());
        for i in 0..rank {
            for j in 0..b.cols() {
                z[(i, j)] = &(&ub[(i, j)] * &den) / &snf.d[(i, i)];
            }
        }
        Ok(Solution { x: snf.v.mul(&z), denominator: den_mag })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn divisors(m: &IntMatrix) -> Vec<u64> {
        m.elementary_divisors().iter().map(|d| u64::try_from(d).unwrap()).collect()
    }

    #[test]
    fn smith_of_diag() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(divisors(&m), vec![1, 6]);
        let snf = m.smith();
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);
        assert_eq!(snf.u.determinant().abs(), BigInt::one());
        assert_eq!(snf.v.determinant().abs(), BigInt::one());
    }

    #[test]
    fn smith_of_zero() {
        let m = IntMatrix::zeros(3, 2);
        let snf = m.smith();
        assert!(snf.d.is_zero());
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);
        assert_eq!(m.rank(), 0);
        assert_eq!(m.kernel_basis().cols(), 2);
    }

    #[test]
    fn kernel_of_row_vector() {
        let m = IntMatrix::from_rows(&[vec![2, -2]]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
        // the basis vector is primitive: ±(1,1)
        assert_eq!(k[(0, 0)].abs(), BigInt::one());
        assert_eq!(k[(0, 0)], k[(1, 0)]);
    }

    #[test]
    fn kernel_of_invertible_is_empty() {
        let m = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(m.kernel_basis().cols(), 0);
    }

    #[test]
    fn solve_integral_and_local() {
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let b = IntMatrix::from_rows(&[vec![4], vec![3]]);
        let s = a.solve(&b, Locality::Integral).unwrap();
        assert_eq!(s.denominator, BigUint::one());
        assert_eq!(a.mul(&s.x), b);

        // 2x = 1 has no integral solution; over Z_(3) the denominator 2 is a unit
        let a = IntMatrix::from_rows(&[vec![2]]);
        let b = IntMatrix::from_rows(&[vec![1]]);
        assert!(matches!(a.solve(&b, Locality::Integral), Err(SolveError::DenominatorNotUnit(_))));
        assert!(matches!(a.solve(&b, Locality::Local(2)), Err(SolveError::DenominatorNotUnit(_))));
        let s = a.solve(&b, Locality::Local(3)).unwrap();
        assert_eq!(s.denominator, BigUint::from(2u32));
        // a * x = den * b
        assert_eq!(a.mul(&s.x)[(0, 0)], BigInt::from(2) * &b[(0, 0)]);

        // inconsistent system
        let a = IntMatrix::from_rows(&[vec![1], vec![1]]);
        let b = IntMatrix::from_rows(&[vec![1], vec![2]]);
        assert!(matches!(a.solve(&b, Locality::Integral), Err(SolveError::Inconsistent)));
    }

    #[test]
    fn kernel_of_random_rank_deficient_matrices() {
        use rand::{Rng, SeedableRng};
        // independent rational-nullspace oracle: rank by fraction-free
        // elimination over i128
        fn rank_oracle(m: &IntMatrix) -> usize {
            let mut a: Vec<Vec<i128>> = (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| i64::try_from(&m[(i, j)]).unwrap() as i128).collect())
                .collect();
            let (rows, cols) = (m.rows(), m.cols());
            let mut rank = 0;
            let mut row = 0;
            for col in 0..cols {
                let Some(p) = (row..rows).find(|&i| a[i][col] != 0) else { continue };
                a.swap(row, p);
                for i in 0..rows {
                    if i != row && a[i][col] != 0 {
                        let (num, den) = (a[i][col], a[row][col]);
                        for j in 0..cols {
                            a[i][j] = a[i][j] * den - a[row][j] * num;
                        }
                        let g = a[i].iter().fold(0i128, |acc, &x| {
                            let (mut x, mut y) = (acc.abs(), x.abs());
                            while y != 0 {
                                (x, y) = (y, x % y);
                            }
                            x
                        });
                        if g > 1 {
                            for j in 0..cols {
                                a[i][j] /= g;
                            }
                        }
                    }
                }
                row += 1;
                rank += 1;
                if row == rows {
                    break;
                }
            }
            rank
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            // random 5x8 of rank <= 4, as a product of 5x4 and 4x8
            let a = IntMatrix::from_fn(5, 4, |_, _| BigInt::from(rng.gen_range(-3i64..=3)));
            let b = IntMatrix::from_fn(4, 8, |_, _| BigInt::from(rng.gen_range(-3i64..=3)));
            let m = a.mul(&b);
            let rank = rank_oracle(&m);
            let k = m.kernel_basis();
            assert_eq!(k.cols(), 8 - rank);
            assert!(m.mul(&k).is_zero());
            // the kernel basis is saturated: its Smith divisors are all 1,
            // so it is a basis over Z_(p) for every p
            if k.cols() > 0 {
                assert!(k.elementary_divisors().iter().all(|d| d == &BigUint::from(1u32)));
            }
        }
    }

    #[test]
    fn determinant_small() {
        let m = IntMatrix::from_rows(&[vec![1, 2], vec![3, 4]]);
        assert_eq!(m.determinant(), BigInt::from(-2));
        let m = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(m.determinant(), BigInt::from(-1));
        assert_eq!(IntMatrix::identity(4).determinant(), BigInt::one());
    }
}
