use std::fmt;

use rand::Rng;

use super::{BitVector, Permutation};
use crate::{Error, Result};

/// Dense binary matrix stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows,
            cols,
            data: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        BitMatrix {
            rows,
            cols,
            data: (0..rows).map(|_| BitVector::random(cols, rng)).collect(),
        }
    }

    /// Builds a matrix from rows of equal length; `cols` is needed for the
    /// zero-row case.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length mismatch");
        }
        BitMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn from_columns(rows: usize, columns: &[BitVector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for i in c.iter_ones() {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.data[i]
    }

    pub fn row_vectors(&self) -> &[BitVector] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, bit: bool) {
        self.data[i].set(j, bit)
    }

    pub fn column(&self, j: usize) -> BitVector {
        BitVector::from_indices(self.rows, (0..self.rows).filter(|&i| self.get(i, j)))
    }

    /// `M * v^T`, the syndrome of `v`.
    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        BitVector::from_indices(self.rows, (0..self.rows).filter(|&i| self.data[i].dot(v)))
    }

    /// `v * M`, the XOR of the rows selected by `v`.
    pub fn vec_mul(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.rows, "vector-matrix dimension mismatch");
        let mut out = BitVector::zeros(self.cols);
        for i in v.iter_ones() {
            out.xor_assign(&self.data[i]);
        }
        out
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        BitMatrix {
            rows: self.rows,
            cols: other.cols,
            data: self.data.iter().map(|r| other.vec_mul(r)).collect(),
        }
    }

    /// `M * P` for the permutation matrix `P` of `perm` (a column gather).
    pub fn mul_permutation(&self, perm: &Permutation) -> BitMatrix {
        assert_eq!(perm.len(), self.cols);
        BitMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|r| perm.apply_inverse(r)).collect(),
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for (i, r) in self.data.iter().enumerate() {
            for j in r.iter_ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    pub fn select_columns(&self, cols: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, cols.len());
        for (i, r) in self.data.iter().enumerate() {
            for (a, &j) in cols.iter().enumerate() {
                if r.get(j) {
                    out.set(i, a, true);
                }
            }
        }
        out
    }

    pub fn vstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        BitMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn hstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.rows, other.rows);
        BitMatrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.concat(b)).collect(),
        }
    }

    /// Reduced row echelon form in place; returns the pivot column of each
    /// nonzero row. `track` receives the same row operations.
    fn rref_tracking(&mut self, mut track: Option<&mut BitVector>) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.data[i].get(c)) else {
                continue;
            };
            self.data.swap(r, p);
            if let Some(t) = track.as_deref_mut() {
                let (a, b) = (t.get(r), t.get(p));
                t.set(r, b);
                t.set(p, a);
            }
            let pivot_row = self.data[r].clone();
            let pivot_bit = track.as_deref().map(|t| t.get(r)).unwrap_or(false);
            for i in 0..self.rows {
                if i != r && self.data[i].get(c) {
                    self.data[i].xor_assign(&pivot_row);
                    if pivot_bit {
                        if let Some(t) = track.as_deref_mut() {
                            t.flip(i);
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_tracking(None);
        (m, p)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<BitMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let (red, pivots) = self.hstack(&BitMatrix::identity(n)).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(BitMatrix {
            rows: n,
            cols: n,
            data: red.data.iter().map(|r| r.slice(n, 2 * n)).collect(),
        })
    }

    /// Any `x` with `M * x^T = s`, by Gaussian elimination.
    pub fn solve(&self, s: &BitVector) -> Result<BitVector> {
        if s.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                actual: s.len(),
            });
        }
        let mut m = self.clone();
        let mut rhs = s.clone();
        let pivots = m.rref_tracking(Some(&mut rhs));
        if (pivots.len()..self.rows).any(|i| rhs.get(i)) {
            return Err(Error::NoSolution);
        }
        let mut x = BitVector::zeros(self.cols);
        for (i, &c) in pivots.iter().enumerate() {
            if rhs.get(i) {
                x.set(c, true);
            }
        }
        Ok(x)
    }

    /// Basis (as rows) of `{x : M * x^T = 0}`.
    pub fn null_space(&self) -> BitMatrix {
        let (red, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let basis = (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVector::unit(self.cols, f);
                for (i, &c) in pivots.iter().enumerate() {
                    if red.get(i, f) {
                        v.set(c, true);
                    }
                }
                v
            })
            .collect();
        BitMatrix::from_rows(self.cols, basis)
    }

    /// Row-major, LSB-first, each row padded to a byte boundary.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.data.iter().flat_map(|r| r.to_bytes()).collect()
    }

    pub fn from_bytes(rows: usize, cols: usize, bytes: &[u8]) -> Result<BitMatrix> {
        let rb = cols.div_ceil(8);
        if bytes.len() != rows * rb {
            return Err(Error::malformed("matrix byte length"));
        }
        let data = (0..rows)
            .map(|i| BitVector::from_bytes(cols, &bytes[i * rb..(i + 1) * rb]))
            .collect::<Result<Vec<_>>>()?;
        Ok(BitMatrix { rows, cols, data })
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in &self.data {
            for b in r.iter() {
                f.write_str(if b { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Uniform invertible `r x r` matrix by rejection sampling.
pub fn random_invertible<R: Rng + ?Sized>(r: usize, rng: &mut R) -> BitMatrix {
    assert!(r >= 1);
    loop {
        let m = BitMatrix::random(r, r, rng);
        if m.rank() == r {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::from_seed;
    use proptest::prelude::*;

    #[test]
    fn solve_zero_and_identity() {
        let mut rng = from_seed(1);
        let h = BitMatrix::random(5, 9, &mut rng);
        assert!(h.mul_vec(&h.solve(&BitVector::zeros(5)).unwrap()).is_zero());

        let id = BitMatrix::identity(4).hstack(&BitMatrix::zeros(4, 3));
        let s = BitVector::from_indices(4, [0, 3]);
        assert_eq!(id.solve(&s).unwrap(), BitVector::from_indices(7, [0, 3]));
    }

    #[test]
    fn solve_matches_exhaustive_search() {
        // 4x8 full-rank system: enumerate all 256 candidates.
        let mut rng = from_seed(77);
        let h = loop {
            let h = BitMatrix::random(4, 8, &mut rng);
            if h.rank() == 4 {
                break h;
            }
        };
        for sv in 0..16u64 {
            let s = BitVector::from_u64(4, sv);
            let brute: Vec<u64> = (0..256u64)
                .filter(|&x| h.mul_vec(&BitVector::from_u64(8, x)) == s)
                .collect();
            assert_eq!(brute.len(), 16);
            let x = h.solve(&s).unwrap();
            assert!(brute.contains(&x.to_u64()));
        }
    }

    #[test]
    fn inconsistent_system() {
        let h = BitMatrix::from_rows(
            3,
            vec![BitVector::from_indices(3, [0, 1]), BitVector::from_indices(3, [0, 1])],
        );
        assert_eq!(h.solve(&BitVector::from_indices(2, [0])), Err(Error::NoSolution));
        assert!(matches!(
            h.solve(&BitVector::zeros(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn invertible_one_by_one() {
        let mut rng = from_seed(5);
        assert_eq!(random_invertible(1, &mut rng), BitMatrix::identity(1));
    }

    #[test]
    fn inverse_of_random_invertible() {
        let mut rng = from_seed(42);
        let q = random_invertible(8, &mut rng);
        let qi = q.inverse().unwrap();
        assert_eq!(q.mul(&qi), BitMatrix::identity(8));
        assert_eq!(qi.mul(&q), BitMatrix::identity(8));
    }

    #[test]
    fn invertible_fraction_matches_product_formula() {
        // P(random 8x8 invertible) = prod_{i=1..8} (1 - 2^-i)
        let expected: f64 = (1..=8).map(|i| 1.0 - 0.5f64.powi(i)).product();
        assert!((expected - 0.28992).abs() < 1e-4);
        let mut rng = from_seed(2024);
        let trials = 10_000;
        let hits = (0..trials)
            .filter(|_| BitMatrix::random(8, 8, &mut rng).is_invertible())
            .count();
        let p = hits as f64 / trials as f64;
        let sigma = (expected * (1.0 - expected) / trials as f64).sqrt();
        assert!((p - expected).abs() < 4.0 * sigma, "{p} vs {expected}");
    }

    #[test]
    fn permuted_columns_preserve_syndromes() {
        let mut rng = from_seed(9);
        let h = BitMatrix::random(6, 20, &mut rng);
        let p = crate::algebra::random_permutation(20, &mut rng);
        let hp = h.mul_permutation(&p);
        let x = BitVector::random(20, &mut rng);
        // (H P) x^T = H (P x^T)
        assert_eq!(hp.mul_vec(&x), h.mul_vec(&p.apply(&x)));
    }

    proptest! {
        #[test]
        fn null_space_is_annihilated(seed in any::<u64>(), r in 1usize..12, extra in 0usize..12) {
            let mut rng = from_seed(seed);
            let n = r + extra;
            let h = BitMatrix::random(r, n, &mut rng);
            let g = h.null_space();
            prop_assert_eq!(g.rows(), n - h.rank());
            prop_assert_eq!(g.rank(), g.rows());
            for row in g.row_vectors() {
                prop_assert!(h.mul_vec(row).is_zero());
            }
        }

        #[test]
        fn rank_bounded(seed in any::<u64>(), r in 1usize..20, c in 1usize..20) {
            let mut rng = from_seed(seed);
            let m = BitMatrix::random(r, c, &mut rng);
            prop_assert!(m.rank() <= r.min(c));
            prop_assert_eq!(m.transpose().rank(), m.rank());
            prop_assert_eq!(m.transpose().transpose(), m);
        }
    }
}
