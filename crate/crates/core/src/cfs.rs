//! CFS hash-and-decode signatures, with sequential or random (mCFS) counters.
//!
//! The signed syndrome for counter `i` is `h(h(M) || i)`: the 32-byte SHA-256
//! digest of `M`, followed by `i` as an 8-byte big-endian integer, expanded to
//! exactly `n - k` bits with [`expand_bits`]. The signer decodes
//! `Q^-1 h(h(M) || i)` and maps the error back through `P`.

use rand::Rng;

use crate::algebra::BitVector;
use crate::codec::{Decode, Encode, Reader, Writer};
use crate::goppa::{code_length, NiederreiterPublicKey, NiederreiterSecretKey};
use crate::hash::{expand_bits, sha256};
use crate::{Error, Result};

pub const DEFAULT_ATTEMPT_BUDGET: u64 = 1_000_000;

/// Parameter sets proposed for 80-bit security, as `(m, t)`. Signing at these
/// sizes needs around `t!` (up to 4.8e8) decoding attempts per signature.
pub const PAPER_PARAMETERS: [(u32, usize); 3] = [(21, 10), (19, 11), (15, 12)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CounterMode {
    /// Counters `1, 2, 3, ...`.
    #[default]
    Sequential,
    /// mCFS: each counter uniform in `[1, 2^(n-k)]` (capped at `u64::MAX`).
    Random,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfsSignature {
    pub m: u32,
    pub t: usize,
    pub counter: u64,
    /// `z = x'P`, of weight at most `t`.
    pub z: BitVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignOutcome {
    pub signature: CfsSignature,
    pub attempts: u64,
}

pub fn message_syndrome(msg: &[u8], counter: u64, bits: usize) -> BitVector {
    digest_syndrome(&sha256(msg), counter, bits)
}

pub(crate) fn digest_syndrome(digest: &[u8; 32], counter: u64, bits: usize) -> BitVector {
    let mut input = [0u8; 40];
    input[..32].copy_from_slice(digest);
    input[32..].copy_from_slice(&counter.to_be_bytes());
    expand_bits(&input, bits)
}

fn random_counter<R: Rng + ?Sized>(bits: usize, rng: &mut R) -> u64 {
    if bits >= 64 {
        rng.gen_range(1..=u64::MAX)
    } else {
        rng.gen_range(1..=1u64 << bits)
    }
}

pub fn sign<R: Rng + ?Sized>(
    sk: &NiederreiterSecretKey,
    msg: &[u8],
    mode: CounterMode,
    budget: u64,
    rng: &mut R,
) -> Result<SignOutcome> {
    let code = sk.code();
    let bits = code.syndrome_len();
    let digest = sha256(msg);
    for attempt in 1..=budget {
        let counter = match mode {
            CounterMode::Sequential => attempt,
            CounterMode::Random => random_counter(bits, rng),
        };
        match sk.invert(&digest_syndrome(&digest, counter, bits)) {
            Ok(z) => {
                return Ok(SignOutcome {
                    signature: CfsSignature {
                        m: code.m(),
                        t: code.t(),
                        counter,
                        z,
                    },
                    attempts: attempt,
                })
            }
            Err(Error::Undecodable) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::AttemptBudgetExceeded(budget))
}

pub fn verify(pk: &NiederreiterPublicKey, msg: &[u8], sig: &CfsSignature) -> bool {
    sig.m == pk.m()
        && sig.t == pk.t()
        && sig.z.len() == pk.n()
        && sig.z.weight() <= pk.t()
        && pk.matrix().mul_vec(&sig.z) == message_syndrome(msg, sig.counter, pk.syndrome_len())
}

/// `(m, t)` header, counter, then `z` as a constant-weight word.
impl Encode for CfsSignature {
    fn encode(&self, w: &mut Writer) {
        w.u32(self.m).len(self.t).u64(self.counter).cw(&self.z);
    }
}

impl Decode for CfsSignature {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        let m = r.u32()?;
        let t = r.len()?;
        let n = code_length(m, t).map_err(|e| Error::malformed(e.to_string()))?;
        let counter = r.u64()?;
        let z = r.cw(n, t)?;
        Ok(CfsSignature { m, t, counter, z })
    }
}
