//! KKS signatures: the signature is a codeword of a secret weight-bounded
//! code `U`, embedded on a secret support `J` of a public random code.
//!
//! Column `a` of `G` lands on the `a`-th smallest element of `J`. The public
//! key is `F = H(J) G^T`, so every signature `sigma = (m G)` scattered onto
//! `J` satisfies `H sigma^T = F m^T`.

use rand::seq::index::sample;
use rand::Rng;

use crate::algebra::{BitMatrix, BitVector};
use crate::codec::{Decode, Encode, Reader, Writer};
use crate::hash::{expand_bits, TaggedHasher};
use crate::{Error, Result};

pub const KEYGEN_TRIES: u64 = 10_000;
/// Largest `k` for which keygen checks all `2^k - 1` codewords.
pub const EXHAUSTIVE_MAX_K: usize = 16;
/// Codewords sampled per candidate when `k` is too large to enumerate.
pub const SAMPLED_CODEWORDS: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KksParams {
    pub n: usize,
    pub r: usize,
    pub n_prime: usize,
    pub k: usize,
    pub t1: usize,
    pub t2: usize,
}

/// Parameters suggested for a security of 40 signatures.
pub const PAPER_PARAMS: KksParams = KksParams {
    n: 2000,
    r: 1100,
    n_prime: 1000,
    k: 160,
    t1: 90,
    t2: 110,
};

impl KksParams {
    pub fn validate(&self) -> Result<()> {
        let KksParams { n, r, n_prime, k, t1, t2 } = *self;
        let ok = n_prime < n && (1..=n_prime).contains(&k) && 1 <= t1 && t1 <= t2 && t2 <= n_prime && (1..n).contains(&r);
        if ok {
            Ok(())
        } else {
            Err(Error::param(format!("inconsistent KKS parameters {self:?}")))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KksPublicKey {
    pub f: BitMatrix,
    pub h: BitMatrix,
    pub t1: usize,
    pub t2: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KksSecretKey {
    /// Sorted support of the hidden code.
    pub j: Vec<usize>,
    pub g: BitMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KksKeyPair {
    pub public: KksPublicKey,
    pub secret: KksSecretKey,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KksSignature {
    pub sigma: BitVector,
}

/// True if every nonzero codeword of the row space of `g` has weight in
/// `[t1, t2]`. Exhaustive for `k <= 16`, sampled otherwise.
pub fn weights_within<R: Rng + ?Sized>(g: &BitMatrix, t1: usize, t2: usize, rng: &mut R) -> bool {
    let in_range = |w: usize| (t1..=t2).contains(&w);
    let k = g.rows();
    if k <= EXHAUSTIVE_MAX_K {
        // Gray code walk over all nonzero messages
        let mut word = BitVector::zeros(g.cols());
        for i in 1u32..1 << k {
            word.xor_assign(g.row(i.trailing_zeros() as usize));
            if !in_range(word.weight()) {
                return false;
            }
        }
        true
    } else {
        (0..SAMPLED_CODEWORDS).all(|_| {
            let m = BitVector::random(k, rng);
            m.is_zero() || in_range(g.vec_mul(&m).weight())
        })
    }
}

impl KksKeyPair {
    pub fn generate<R: Rng + ?Sized>(params: &KksParams, rng: &mut R) -> Result<Self> {
        params.validate()?;
        let KksParams { n, r, n_prime, k, t1, t2 } = *params;
        let h = loop {
            let h = BitMatrix::random(r, n, rng);
            if h.rank() == r {
                break h;
            }
        };
        let mut j = sample(rng, n, n_prime).into_vec();
        j.sort_unstable();
        let mut found = None;
        for _ in 0..KEYGEN_TRIES {
            let g = BitMatrix::random(k, n_prime, rng);
            if weights_within(&g, t1, t2, rng) {
                found = Some(g);
                break;
            }
        }
        let g = found.ok_or(Error::KeygenExhausted(KEYGEN_TRIES))?;
        let f = h.select_columns(&j).mul(&g.transpose());
        Ok(KksKeyPair {
            public: KksPublicKey { f, h, t1, t2 },
            secret: KksSecretKey { j, g },
        })
    }
}

impl KksSecretKey {
    pub fn k(&self) -> usize {
        self.g.rows()
    }

    pub fn sign(&self, n: usize, m: &BitVector) -> Result<KksSignature> {
        if m.len() != self.k() {
            return Err(Error::DimensionMismatch {
                expected: self.k(),
                actual: m.len(),
            });
        }
        if m.is_zero() {
            return Err(Error::ZeroMessage);
        }
        let star = self.g.vec_mul(m);
        Ok(KksSignature {
            sigma: BitVector::from_indices(n, star.iter_ones().map(|a| self.j[a])),
        })
    }
}

impl KksKeyPair {
    pub fn sign(&self, m: &BitVector) -> Result<KksSignature> {
        self.secret.sign(self.public.h.cols(), m)
    }
}

impl KksPublicKey {
    pub fn n(&self) -> usize {
        self.h.cols()
    }

    pub fn k(&self) -> usize {
        self.f.cols()
    }

    pub fn verify(&self, m: &BitVector, sig: &KksSignature) -> bool {
        let s = &sig.sigma;
        m.len() == self.k()
            && s.len() == self.n()
            && (self.t1..=self.t2).contains(&s.weight())
            && self.h.mul_vec(s) == self.f.mul_vec(m)
    }
}

/// Maps a byte message to `k` bits. Not part of the original scheme, which
/// signs raw `k`-bit vectors.
pub fn hash_message(msg: &[u8], k: usize) -> BitVector {
    let mut h = TaggedHasher::new("kks/msg");
    h.update(msg);
    expand_bits(&h.finalize(), k)
}

impl Encode for KksPublicKey {
    fn encode(&self, w: &mut Writer) {
        w.matrix(&self.f).matrix(&self.h).len(self.t1).len(self.t2);
    }
}

impl Decode for KksPublicKey {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        let f = r.matrix()?;
        let h = r.matrix()?;
        let (t1, t2) = (r.len()?, r.len()?);
        if f.rows() != h.rows() || t1 > t2 || t2 > h.cols() {
            return Err(Error::malformed("inconsistent KKS public key"));
        }
        Ok(KksPublicKey { f, h, t1, t2 })
    }
}

impl Encode for KksSecretKey {
    fn encode(&self, w: &mut Writer) {
        w.len(self.j.len());
        for &x in &self.j {
            w.len(x);
        }
        w.matrix(&self.g);
    }
}

impl Decode for KksSecretKey {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        let len = r.len()?;
        if len > r.remaining() {
            return Err(Error::malformed("support longer than input"));
        }
        let j = (0..len).map(|_| r.len()).collect::<Result<Vec<_>>>()?;
        if j.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::malformed("support must be strictly increasing"));
        }
        let g = r.matrix()?;
        if g.cols() != j.len() {
            return Err(Error::malformed("generator width differs from support size"));
        }
        Ok(KksSecretKey { j, g })
    }
}

impl Encode for KksKeyPair {
    fn encode(&self, w: &mut Writer) {
        w.put(&self.public).put(&self.secret);
    }
}

impl Decode for KksKeyPair {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        let public: KksPublicKey = r.get()?;
        let secret: KksSecretKey = r.get()?;
        if secret.j.last().is_some_and(|&x| x >= public.n()) || secret.k() != public.k() {
            return Err(Error::malformed("secret key does not fit the public key"));
        }
        Ok(KksKeyPair { public, secret })
    }
}

impl Encode for KksSignature {
    fn encode(&self, w: &mut Writer) {
        w.bits(&self.sigma);
    }
}

impl Decode for KksSignature {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        Ok(KksSignature { sigma: r.bits()? })
    }
}
