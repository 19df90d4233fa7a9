//! SHA-256 based hashing helpers.
//!
//! Every hash used by the schemes is SHA-256. Outputs longer or shorter than
//! 256 bits are produced by [`expand_bits`]: the first block is the digest of
//! the input itself, further blocks are `SHA-256(d0 || j)` with `j` a
//! big-endian `u32` starting at 1. Bits are taken LSB-first from each byte.

use sha2::{Digest as _, Sha256};

use crate::algebra::BitVector;

pub type Digest = [u8; 32];

pub fn sha256(data: &[u8]) -> Digest {
    Sha256::digest(data).into()
}

/// Incremental hasher with a domain-separation tag.
#[derive(Clone)]
pub struct TaggedHasher(Sha256);

impl TaggedHasher {
    pub fn new(tag: &str) -> Self {
        let mut h = Sha256::new();
        h.update((tag.len() as u32).to_be_bytes());
        h.update(tag.as_bytes());
        TaggedHasher(h)
    }

    pub fn update(&mut self, data: &[u8]) -> &mut Self {
        self.0.update(data);
        self
    }

    pub fn update_u32(&mut self, v: u32) -> &mut Self {
        self.0.update(v.to_be_bytes());
        self
    }

    pub fn update_u64(&mut self, v: u64) -> &mut Self {
        self.0.update(v.to_be_bytes());
        self
    }

    pub fn update_bits(&mut self, v: &BitVector) -> &mut Self {
        self.0.update(v.to_bytes());
        self
    }

    pub fn finalize(self) -> Digest {
        self.0.finalize().into()
    }
}

/// Expands `seed` to exactly `nbits` bits.
pub fn expand_bits(seed: &[u8], nbits: usize) -> BitVector {
    let bytes = expand_bytes(seed, nbits.div_ceil(8));
    BitVector::from_bytes_truncated(nbits, &bytes)
}

/// Counter-mode expansion of `seed` into `len` bytes.
pub fn expand_bytes(seed: &[u8], len: usize) -> Vec<u8> {
    let d0 = sha256(seed);
    let mut out = Vec::with_capacity(len.max(32));
    out.extend_from_slice(&d0);
    let mut j: u32 = 1;
    while out.len() < len {
        let mut h = Sha256::new();
        h.update(d0);
        h.update(j.to_be_bytes());
        out.extend_from_slice(&h.finalize());
        j += 1;
    }
    out.truncate(len);
    out
}

/// Endless byte stream derived from a digest, used for challenge extraction.
pub struct ByteStream {
    seed: Digest,
    block: Digest,
    pos: usize,
    counter: u32,
}

impl ByteStream {
    pub fn new(seed: Digest) -> Self {
        ByteStream {
            seed,
            block: [0; 32],
            pos: 32,
            counter: 0,
        }
    }
}

impl Iterator for ByteStream {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        if self.pos == 32 {
            let mut h = Sha256::new();
            h.update(self.seed);
            h.update(self.counter.to_be_bytes());
            self.block = h.finalize().into();
            self.counter = self.counter.wrapping_add(1);
            self.pos = 0;
        }
        let b = self.block[self.pos];
        self.pos += 1;
        Some(b)
    }
}

/// Derives `count` base-3 challenges from `seed`.
///
/// Bytes `>= 243` are rejected so that each accepted byte yields five
/// unbiased ternary digits.
pub fn ternary_challenges(seed: Digest, count: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(count);
    for byte in ByteStream::new(seed) {
        if out.len() >= count {
            break;
        }
        if byte >= 243 {
            continue;
        }
        let mut v = byte;
        for _ in 0..5 {
            if out.len() == count {
                break;
            }
            out.push(v % 3);
            v /= 3;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expand_prefix_is_plain_digest() {
        let d = sha256(b"abc");
        let v = expand_bits(b"abc", 256);
        assert_eq!(v.to_bytes(), d.to_vec());
        let long = expand_bytes(b"abc", 100);
        assert_eq!(&long[..32], &d);
        assert_eq!(long.len(), 100);
    }

    #[test]
    fn truncation_keeps_low_bits() {
        let v = expand_bits(b"x", 10);
        let full = expand_bits(b"x", 256);
        for i in 0..10 {
            assert_eq!(v.get(i), full.get(i));
        }
        assert_eq!(v.len(), 10);
    }

    #[test]
    fn ternary_digits_are_balanced() {
        let digits = ternary_challenges(sha256(b"seed"), 30_000);
        let mut counts = [0usize; 3];
        for d in &digits {
            counts[*d as usize] += 1;
        }
        for c in counts {
            assert!((c as f64 / 30_000.0 - 1.0 / 3.0).abs() < 0.02, "{counts:?}");
        }
    }

    #[test]
    fn tags_separate_domains() {
        let mut a = TaggedHasher::new("a");
        a.update(b"x");
        let mut b = TaggedHasher::new("b");
        b.update(b"x");
        assert_ne!(a.finalize(), b.finalize());
    }
}
