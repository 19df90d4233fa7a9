//! Exhaustive syndrome-decoding oracle. Exponential; used as ground truth
//! in tests and never on the signing path.

use super::{binomial, BitMatrix, BitVector};
use crate::{Error, Result};

pub const SD_ORACLE_MAX_N: usize = 64;
pub const SD_ORACLE_MAX_CANDIDATES: u64 = 1 << 26;

/// Minimal-weight `x` with `H x^T = s` and `wt(x) <= t`, lexicographically
/// smallest support among ties.
pub fn sd_bruteforce(h: &BitMatrix, s: &BitVector, t: usize) -> Result<BitVector> {
    let n = h.cols();
    if s.len() != h.rows() {
        return Err(Error::DimensionMismatch {
            expected: h.rows(),
            actual: s.len(),
        });
    }
    if n > SD_ORACLE_MAX_N {
        return Err(Error::OracleTooLarge(format!("n = {n} > {SD_ORACLE_MAX_N}")));
    }
    let t = t.min(n);
    let candidates: num_bigint::BigUint = (0..=t as u64).map(|w| binomial(n as u64, w)).sum();
    if candidates > SD_ORACLE_MAX_CANDIDATES.into() {
        return Err(Error::OracleTooLarge(format!("{candidates} candidates")));
    }
    let columns: Vec<BitVector> = (0..n).map(|j| h.column(j)).collect();
    for w in 0..=t {
        if let Some(sol) = first_combination(&columns, s, n, w) {
            return Ok(BitVector::from_indices(n, sol));
        }
    }
    Err(Error::NoSolution)
}

fn first_combination(columns: &[BitVector], s: &BitVector, n: usize, w: usize) -> Option<Vec<usize>> {
    let mut idx: Vec<usize> = (0..w).collect();
    loop {
        let mut acc = BitVector::zeros(s.len());
        for &i in &idx {
            acc.xor_assign(&columns[i]);
        }
        if acc == *s {
            return Some(idx);
        }
        // next combination in lexicographic order
        let mut k = w;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            if idx[k] < n - w + k {
                break;
            }
        }
        idx[k] += 1;
        for j in k + 1..w {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::random_weight_word;
    use crate::rng::from_seed;
    use itertools::Itertools;

    #[test]
    fn zero_syndrome() {
        let mut rng = from_seed(1);
        let h = BitMatrix::random(6, 12, &mut rng);
        assert!(sd_bruteforce(&h, &BitVector::zeros(6), 3).unwrap().is_zero());
    }

    #[test]
    fn unit_column_of_identity_block() {
        let mut rng = from_seed(2);
        let h = BitMatrix::identity(5).hstack(&BitMatrix::random(5, 7, &mut rng));
        for j in 0..5 {
            let s = h.column(j);
            assert_eq!(sd_bruteforce(&h, &s, 1).unwrap(), BitVector::unit(12, j));
        }
    }

    #[test]
    fn agrees_with_explicit_enumeration() {
        // Independent route: enumerate all 79 words of weight <= 2, pick the
        // minimal-weight, lexicographically first solution.
        let mut rng = from_seed(3);
        for _ in 0..50 {
            let h = BitMatrix::random(6, 12, &mut rng);
            let e = random_weight_word(12, 2, &mut rng);
            let s = h.mul_vec(&e);
            let mut all: Vec<Vec<usize>> = Vec::new();
            for w in 0..=2 {
                all.extend((0..12).combinations(w));
            }
            assert_eq!(all.len(), 79);
            let expected = all
                .into_iter()
                .find(|c| h.mul_vec(&BitVector::from_indices(12, c.clone())) == s)
                .unwrap();
            let got = sd_bruteforce(&h, &s, 2).unwrap();
            assert_eq!(got, BitVector::from_indices(12, expected));
            assert!(got.weight() <= e.weight());
        }
    }

    #[test]
    fn no_solution_and_caps() {
        let h = BitMatrix::zeros(3, 5);
        assert_eq!(sd_bruteforce(&h, &BitVector::unit(3, 0), 5), Err(Error::NoSolution));
        let big = BitMatrix::zeros(2, 65);
        assert!(matches!(
            sd_bruteforce(&big, &BitVector::zeros(2), 1),
            Err(Error::OracleTooLarge(_))
        ));
        let wide = BitMatrix::zeros(2, 64);
        assert!(matches!(
            sd_bruteforce(&wide, &BitVector::unit(2, 0), 10),
            Err(Error::OracleTooLarge(_))
        ));
    }
}
