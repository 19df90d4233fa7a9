//! Lexicographic ranking of constant-weight words.
//!
//! A weight-`t` word of length `n` is identified with its sorted support
//! `c_1 < .. < c_t`; words are ordered lexicographically on that tuple, so
//! the word with support `{0, .., t-1}` has rank 0.

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::Rng;

use super::BitVector;
use crate::{Error, Result};

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `sum_{w=0}^{t} C(n, w)`, the number of words of weight at most `t`.
pub fn ball_size(n: u64, t: u64) -> BigUint {
    (0..=t.min(n)).map(|w| binomial(n, w)).sum()
}

/// Bits needed to store any rank in `[0, C(n, w))`.
pub fn cw_index_bits(n: u64, w: u64) -> u64 {
    let c = binomial(n, w);
    if c <= BigUint::one() {
        0
    } else {
        (c - 1u32).bits()
    }
}

pub fn cw_rank(v: &BitVector, t: usize) -> Result<BigUint> {
    let w = v.weight();
    if w != t {
        return Err(Error::WeightMismatch { expected: t, actual: w });
    }
    let n = v.len() as u64;
    let t = t as u64;
    let complement: BigUint = v
        .iter_ones()
        .enumerate()
        .map(|(j, c)| binomial(n - 1 - c as u64, t - j as u64))
        .sum();
    Ok(binomial(n, t) - 1u32 - complement)
}

pub fn cw_unrank(n: usize, t: usize, index: &BigUint) -> Result<BitVector> {
    let total = binomial(n as u64, t as u64);
    if *index >= total {
        return Err(Error::IndexOutOfRange);
    }
    // Write C(n,t)-1-index in the combinatorial number system:
    // sum_k C(d_k, k) with d_t > .. > d_1 >= 0, then c = n - 1 - d.
    let mut rest = total - 1u32 - index;
    let mut out = BitVector::zeros(n);
    let mut hi = n as u64; // exclusive upper bound for d
    for k in (1..=t as u64).rev() {
        // largest d < hi with C(d, k) <= rest
        let (mut lo, mut up) = (k - 1, hi - 1);
        while lo < up {
            let mid = (lo + up).div_ceil(2);
            if binomial(mid, k) <= rest {
                lo = mid;
            } else {
                up = mid - 1;
            }
        }
        rest -= binomial(lo, k);
        out.set(n - 1 - lo as usize, true);
        hi = lo;
    }
    Ok(out)
}

/// Uniform word of weight exactly `t`.
pub fn random_weight_word<R: Rng + ?Sized>(n: usize, t: usize, rng: &mut R) -> BitVector {
    BitVector::from_indices(n, rand::seq::index::sample(rng, n, t))
}

/// Uniform word among all words of weight at most `t`.
pub fn random_ball_word<R: Rng + ?Sized>(n: usize, t: usize, rng: &mut R) -> BitVector {
    let mut idx = rng.gen_biguint_below(&ball_size(n as u64, t as u64));
    for w in 0..=t {
        let c = binomial(n as u64, w as u64);
        if idx < c {
            return cw_unrank(n, w, &idx).expect("index within stratum");
        }
        idx -= c;
    }
    unreachable!("index below ball size")
}
