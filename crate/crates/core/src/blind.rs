//! Blind signatures by blinding the public code.
//!
//! The user hides the signer's code `C = ker H` inside a permuted supercode
//! with generator `G_b = [G / R] Pi`, where `R = K R_0` and `R_0` is
//! expanded from a public 16-byte seed. With `H_b` a parity check of `G_b`,
//! the user solves `H_b x^T = h(M | H_b)` and asks the signer to decode
//! `s = H (x Pi^-1)^T`. A decoded `sigma` of weight `t` unblinds to
//! `sigma Pi`, which satisfies `H_b (sigma Pi)^T = h(M | H_b)`.
//!
//! Conventions: `v Pi` is [`Permutation::apply_inverse`] and `v Pi^-1` is
//! [`Permutation::apply`]; a matrix times `Pi` permutes every row the same
//! way.

use rand::Rng;

use crate::algebra::{random_permutation, BitMatrix, BitVector, Permutation};
use crate::codec::{Decode, Encode, Reader, Writer};
use crate::goppa::{NiederreiterPublicKey, NiederreiterSecretKey};
use crate::hash::{expand_bits, sha256, Digest, TaggedHasher};
use crate::{Error, Result};

pub const SEED_LEN: usize = 16;

/// `R_0`: `p x n`, row `i` taken from the expansion of `seed`.
pub fn public_matrix(seed: &[u8; SEED_LEN], p: usize, n: usize) -> BitMatrix {
    let mut input = b"blind/R0".to_vec();
    input.extend_from_slice(seed);
    let bits = expand_bits(&input, p * n);
    BitMatrix::from_rows(n, (0..p).map(|i| bits.slice(i * n, (i + 1) * n)).collect())
}

pub fn message_target(msg: &[u8], h_b: &BitMatrix) -> BitVector {
    let mut h = TaggedHasher::new("blind/msg");
    h.update_u64(msg.len() as u64).update(msg).update(&h_b.to_bytes());
    expand_bits(&h.finalize(), h_b.rows())
}

/// Stand-in for a proof that `ker H_b` contains a permuted copy of
/// `ker H + rowspace(K R_0)`. It discloses the witness `(Pi, K)` and is
/// therefore NOT zero-knowledge: anyone holding it can link the blind
/// signature to the blinding session.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisclosedWitnessAttestation {
    pub h_b_digest: Digest,
    /// Digest of `H_0 = [H / R_0]`.
    pub h0_digest: Digest,
    pub pi: Permutation,
    pub k: BitMatrix,
}

/// Interface a real PKP proof would implement.
pub trait PkpAttestation {
    /// Type tag written in front of the encoded attestation.
    const TAG: u8;
    /// True iff the attested relation holds between `h_b` and `h0 = [H / R_0]`.
    fn verify(&self, h_b: &BitMatrix, h: &BitMatrix, r0: &BitMatrix) -> bool;
    fn is_zero_knowledge(&self) -> bool;
}

fn matrix_digest(m: &BitMatrix) -> Digest {
    let mut w = Writer::new();
    w.matrix(m);
    sha256(&w.into_bytes())
}

impl PkpAttestation for DisclosedWitnessAttestation {
    const TAG: u8 = 1;

    fn verify(&self, h_b: &BitMatrix, h: &BitMatrix, r0: &BitMatrix) -> bool {
        let n = h.cols();
        if self.h_b_digest != matrix_digest(h_b)
            || self.h0_digest != matrix_digest(&h.vstack(r0))
            || self.pi.len() != n
            || h_b.cols() != n
            || self.k.cols() != r0.rows()
            || self.k.rank() != self.k.rows()
        {
            return false;
        }
        let stacked = h.null_space().vstack(&self.k.mul(r0));
        let g_b = stacked.mul_permutation(&self.pi);
        h_b.rank() == h_b.rows() && h_b.rows() + stacked.rank() == n && h_b.mul(&g_b.transpose()).rank() == 0
    }

    fn is_zero_knowledge(&self) -> bool {
        false
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlindingState {
    pub seed: [u8; SEED_LEN],
    pub k: BitMatrix,
    pub pi: Permutation,
    pub h_b: BitMatrix,
    pub x: BitVector,
    /// The blind syndrome sent to the signer.
    pub s: BitVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlindSignature {
    pub seed: [u8; SEED_LEN],
    pub h_b: BitMatrix,
    pub sigma_pi: BitVector,
    pub attestation: DisclosedWitnessAttestation,
}

fn check_dims(pk: &NiederreiterPublicKey, p: usize, l: usize) -> Result<()> {
    if l == 0 || l > p || l >= pk.syndrome_len() || l >= pk.k() {
        return Err(Error::param(format!(
            "need 1 <= L <= p, L < mt and L < k; got L={l} p={p} mt={} k={}",
            pk.syndrome_len(),
            pk.k()
        )));
    }
    Ok(())
}

/// Blinds with explicit `seed`, `K` and `Pi`.
pub fn blind_with(
    pk: &NiederreiterPublicKey,
    msg: &[u8],
    seed: [u8; SEED_LEN],
    k: BitMatrix,
    pi: Permutation,
) -> Result<BlindingState> {
    let n = pk.n();
    check_dims(pk, k.cols(), k.rows())?;
    if k.rank() != k.rows() || pi.len() != n {
        return Err(Error::param("K must have full rank and Pi length n"));
    }
    let r0 = public_matrix(&seed, k.cols(), n);
    let stacked = pk.matrix().null_space().vstack(&k.mul(&r0));
    if stacked.rank() != stacked.rows() {
        return Err(Error::param("R meets the code; choose another blinding"));
    }
    let h_b = stacked.mul_permutation(&pi).null_space();
    let x = h_b.solve(&message_target(msg, &h_b))?;
    let s = pk.matrix().mul_vec(&pi.apply(&x));
    Ok(BlindingState { seed, k, pi, h_b, x, s })
}

/// Fresh random blinding with `R_0` of `p` rows and `K` of rank `l`.
pub fn blind<R: Rng + ?Sized>(
    pk: &NiederreiterPublicKey,
    msg: &[u8],
    p: usize,
    l: usize,
    rng: &mut R,
) -> Result<BlindingState> {
    check_dims(pk, p, l)?;
    loop {
        let mut seed = [0u8; SEED_LEN];
        rng.fill(&mut seed);
        let k = loop {
            let k = BitMatrix::random(l, p, rng);
            if k.rank() == l {
                break k;
            }
        };
        let pi = random_permutation(pk.n(), rng);
        match blind_with(pk, msg, seed, k, pi) {
            Err(Error::ParameterInvalid(_)) => continue,
            other => return other,
        }
    }
}

/// Signer side: plain Niederreiter inversion of the blind syndrome.
pub fn blind_sign(sk: &NiederreiterSecretKey, s: &BitVector) -> Result<BitVector> {
    sk.invert(s)
}

pub fn unblind(pk: &NiederreiterPublicKey, state: &BlindingState, sigma: &BitVector) -> Result<BlindSignature> {
    if sigma.len() != pk.n() {
        return Err(Error::DimensionMismatch {
            expected: pk.n(),
            actual: sigma.len(),
        });
    }
    if sigma.weight() != pk.t() {
        return Err(Error::WeightInvalid {
            expected: pk.t(),
            actual: sigma.weight(),
        });
    }
    if pk.matrix().mul_vec(sigma) != state.s {
        return Err(Error::Failure("signature does not match the blind syndrome".into()));
    }
    let r0 = public_matrix(&state.seed, state.k.cols(), pk.n());
    Ok(BlindSignature {
        seed: state.seed,
        h_b: state.h_b.clone(),
        sigma_pi: state.pi.apply_inverse(sigma),
        attestation: DisclosedWitnessAttestation {
            h_b_digest: matrix_digest(&state.h_b),
            h0_digest: matrix_digest(&pk.matrix().vstack(&r0)),
            pi: state.pi.clone(),
            k: state.k.clone(),
        },
    })
}

pub fn verify(pk: &NiederreiterPublicKey, msg: &[u8], sig: &BlindSignature) -> bool {
    let n = pk.n();
    if sig.h_b.cols() != n || sig.sigma_pi.len() != n || sig.sigma_pi.weight() > pk.t() {
        return false;
    }
    let target = message_target(msg, &sig.h_b);
    let Ok(tau) = sig.h_b.solve(&target) else { return false };
    if !sig.h_b.mul_vec(&tau.xor(&sig.sigma_pi)).is_zero() {
        return false;
    }
    let r0 = public_matrix(&sig.seed, sig.attestation.k.cols(), n);
    sig.attestation.verify(&sig.h_b, pk.matrix(), &r0)
}

/// `2^(mt) / C(2^m, t)`: expected blindings per signature.
pub fn expected_attempts(m: u32, t: usize) -> f64 {
    let c = crate::algebra::binomial(1u64 << m, t as u64);
    let bits = c.bits();
    // c / 2^bits is in [1/2, 1); keep the division in floating point range
    let shift = bits.saturating_sub(60);
    let mant = (&c >> shift).to_string().parse::<f64>().unwrap();
    2f64.powf(m as f64 * t as f64 - shift as f64) / mant
}

/// Runs blind, sign and unblind until a weight-`t` signature comes back.
pub fn run_pipeline<R: Rng + ?Sized>(
    pk: &NiederreiterPublicKey,
    sk: &NiederreiterSecretKey,
    msg: &[u8],
    p: usize,
    l: usize,
    budget: u64,
    rng: &mut R,
) -> Result<(BlindSignature, u64)> {
    for attempt in 1..=budget {
        let state = blind(pk, msg, p, l, rng)?;
        let Ok(sigma) = blind_sign(sk, &state.s) else { continue };
        match unblind(pk, &state, &sigma) {
            Ok(sig) => return Ok((sig, attempt)),
            Err(Error::WeightInvalid { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::AttemptBudgetExceeded(budget))
}

impl Encode for DisclosedWitnessAttestation {
    fn encode(&self, w: &mut Writer) {
        w.u8(Self::TAG).raw(&self.h_b_digest).raw(&self.h0_digest).perm(&self.pi).matrix(&self.k);
    }
}

impl Decode for DisclosedWitnessAttestation {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        let tag = r.u8()?;
        if tag != Self::TAG {
            return Err(Error::malformed(format!("attestation type {tag}")));
        }
        Ok(DisclosedWitnessAttestation {
            h_b_digest: r.raw(32)?.try_into().unwrap(),
            h0_digest: r.raw(32)?.try_into().unwrap(),
            pi: r.perm()?,
            k: r.matrix()?,
        })
    }
}

impl Encode for BlindingState {
    fn encode(&self, w: &mut Writer) {
        w.raw(&self.seed).matrix(&self.k).perm(&self.pi).matrix(&self.h_b).bits(&self.x).bits(&self.s);
    }
}

impl Decode for BlindingState {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        Ok(BlindingState {
            seed: r.raw(SEED_LEN)?.try_into().unwrap(),
            k: r.matrix()?,
            pi: r.perm()?,
            h_b: r.matrix()?,
            x: r.bits()?,
            s: r.bits()?,
        })
    }
}

impl Encode for BlindSignature {
    fn encode(&self, w: &mut Writer) {
        w.raw(&self.seed).matrix(&self.h_b).cw(&self.sigma_pi).put(&self.attestation);
    }
}

impl Decode for BlindSignature {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        let seed = r.raw(SEED_LEN)?.try_into().unwrap();
        let h_b = r.matrix()?;
        let sigma_pi = r.cw(h_b.cols(), h_b.cols())?;
        Ok(BlindSignature {
            seed,
            h_b,
            sigma_pi,
            attestation: r.get()?,
        })
    }
}
