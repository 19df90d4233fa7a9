//! Keyed permutations `E_{k,i}` of `bits`-bit strings.
//!
//! Four Feistel rounds on an unbalanced split: the low `ceil(bits/2)` bits
//! and the high `floor(bits/2)` bits take turns being masked by a SHA-256
//! round function of the other half, keyed by `(k, i, round)`.

use crate::hash::{Digest, TaggedHasher};

const ROUNDS: u32 = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Feistel {
    key: Digest,
    index: u64,
    lo_bits: u32,
    hi_bits: u32,
}

fn mask(bits: u32) -> u64 {
    if bits == 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

impl Feistel {
    /// Permutation of `[0, 2^bits)`, `2 <= bits <= 64`.
    pub fn new(key: Digest, index: u64, bits: u32) -> Self {
        assert!((2..=64).contains(&bits), "Feistel width {bits} out of range");
        let lo_bits = bits.div_ceil(2);
        Feistel {
            key,
            index,
            lo_bits,
            hi_bits: bits - lo_bits,
        }
    }

    pub fn bits(&self) -> u32 {
        self.lo_bits + self.hi_bits
    }

    fn round(&self, round: u32, input: u64, out_bits: u32) -> u64 {
        let mut h = TaggedHasher::new("dv/feistel");
        h.update(&self.key).update_u64(self.index).update_u32(round).update_u64(input);
        let d = h.finalize();
        u64::from_le_bytes(d[..8].try_into().unwrap()) & mask(out_bits)
    }

    fn split(&self, x: u64) -> (u64, u64) {
        (x & mask(self.lo_bits), x >> self.lo_bits)
    }

    fn join(&self, lo: u64, hi: u64) -> u64 {
        lo | (hi << self.lo_bits)
    }

    pub fn encrypt(&self, x: u64) -> u64 {
        debug_assert!(x & !mask(self.bits()) == 0);
        let (mut lo, mut hi) = self.split(x);
        for r in 0..ROUNDS {
            if r % 2 == 0 {
                lo ^= self.round(r, hi, self.lo_bits);
            } else {
                hi ^= self.round(r, lo, self.hi_bits);
            }
        }
        self.join(lo, hi)
    }

    pub fn decrypt(&self, y: u64) -> u64 {
        let (mut lo, mut hi) = self.split(y);
        for r in (0..ROUNDS).rev() {
            if r % 2 == 0 {
                lo ^= self.round(r, hi, self.lo_bits);
            } else {
                hi ^= self.round(r, lo, self.hi_bits);
            }
        }
        self.join(lo, hi)
    }
}
