//! Identity-based identification: a key generation center (KGC) turns an
//! identity into a CFS signature on it, and the holder proves knowledge of
//! that signature with Stern's protocol.

use rand::Rng;

use crate::algebra::BitVector;
use crate::cfs::{self, CounterMode};
use crate::codec::{Decode, Encode, Reader, Writer};
use crate::goppa::{NiederreiterPublicKey, NiederreiterSecretKey};
use crate::stern::{self, HonestProver, Prover, Statement, Transcript};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IbsCredential {
    pub identity: Vec<u8>,
    pub j: u64,
    /// `H s^T = h(h(y) | j)`, `wt(s) <= t`.
    pub s: BitVector,
}

/// `h(h(y) | j)`.
pub fn public_syndrome(pk: &NiederreiterPublicKey, identity: &[u8], j: u64) -> BitVector {
    cfs::message_syndrome(identity, j, pk.syndrome_len())
}

/// Stern statement for `identity` under counter `j`. The weight `w` of the
/// holder's secret goes into the context so that it is committed to.
pub fn statement(pk: &NiederreiterPublicKey, identity: &[u8], j: u64, w: usize) -> Result<Statement> {
    if w > pk.t() {
        return Err(Error::WeightInvalid {
            expected: pk.t(),
            actual: w,
        });
    }
    let mut context = b"ibs".to_vec();
    context.extend_from_slice(&(w as u64).to_be_bytes());
    context.extend_from_slice(&j.to_be_bytes());
    Statement::new(pk.matrix().clone(), public_syndrome(pk, identity, j), w, context)
}

/// Runs CFS signing (sequential counters) on the identity.
pub fn kgc_extract<R: Rng + ?Sized>(
    sk: &NiederreiterSecretKey,
    identity: &[u8],
    budget: u64,
    rng: &mut R,
) -> Result<(IbsCredential, u64)> {
    let out = cfs::sign(sk, identity, CounterMode::Sequential, budget, rng)?;
    Ok((
        IbsCredential {
            identity: identity.to_vec(),
            j: out.signature.counter,
            s: out.signature.z,
        },
        out.attempts,
    ))
}

impl IbsCredential {
    pub fn is_valid(&self, pk: &NiederreiterPublicKey) -> bool {
        self.s.len() == pk.n()
            && self.s.weight() <= pk.t()
            && pk.matrix().mul_vec(&self.s) == public_syndrome(pk, &self.identity, self.j)
    }

    pub fn statement(&self, pk: &NiederreiterPublicKey) -> Result<Statement> {
        statement(pk, &self.identity, self.j, self.s.weight())
    }
}

/// Verifier side of identification. The prover announces `j` and `w`; the
/// verifier rebuilds the syndrome from `(identity, j)` itself.
pub fn identify<R: Rng>(
    pk: &NiederreiterPublicKey,
    identity: &[u8],
    announced_j: u64,
    announced_w: usize,
    prover: &mut dyn Prover,
    rounds: usize,
    rng: &mut R,
) -> (bool, Vec<Transcript>) {
    match statement(pk, identity, announced_j, announced_w) {
        Ok(stmt) => stern::identify(&stmt, prover, rounds, rng),
        Err(_) => (false, Vec::new()),
    }
}

/// Honest run with a credential.
pub fn identify_with_credential<R: Rng>(
    pk: &NiederreiterPublicKey,
    cred: &IbsCredential,
    rounds: usize,
    rng: &mut R,
) -> Result<(bool, Vec<Transcript>)> {
    let stmt = cred.statement(pk)?;
    let mut prover = HonestProver::new(&stmt, &cred.s);
    Ok(identify(pk, &cred.identity, cred.j, cred.s.weight(), &mut prover, rounds, rng))
}

impl Encode for IbsCredential {
    fn encode(&self, w: &mut Writer) {
        w.bytes(&self.identity).u64(self.j).u32(self.s.len() as u32).cw(&self.s);
    }
}

impl Decode for IbsCredential {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        let identity = r.bytes()?.to_vec();
        let j = r.u64()?;
        let n = r.u32()? as usize;
        if n > 1 << 16 {
            return Err(Error::malformed("credential length"));
        }
        Ok(IbsCredential {
            identity,
            j,
            s: r.cw(n, n)?,
        })
    }
}
