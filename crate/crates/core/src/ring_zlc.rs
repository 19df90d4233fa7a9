//! ZLC ring signatures over CFS keys.
//!
//! Ring members `0..N` hold Niederreiter keys with equal `(m, t)`. With
//! `x_{i+1} = h(N | h(M) | H_i z_i^T + x_i)` (indices mod `N`) a signature
//! `(x_0, z_0, .., z_{N-1})` is valid iff the sequence returns to `x_0`.
//!
//! The signer `r` starts the ring at `x_{r+1} = h(N | h(M) | xbar)`, fills
//! every other slot with a random `z_i`, and closes the ring by decoding
//! `x_r + xbar`. Decoded words are uniform over the ball of radius `t`, so
//! the other slots are drawn from the same ball rather than the weight-`t`
//! sphere; otherwise a short `z` would single out the signer.
//!
//! Each `z_i` is encoded as a 16-bit weight followed by its rank among
//! words of that weight, `cw_index_bits(n, w)` bits wide.

use rand::Rng;

use crate::algebra::{binomial, cw_index_bits, cw_rank, cw_unrank, random_ball_word, BitVector};
use crate::codec::{Decode, Encode, Reader, Writer};
use crate::goppa::{code_length, NiederreiterPublicKey, NiederreiterSecretKey};
use crate::hash::{expand_bits, sha256, Digest, TaggedHasher};
use crate::{Error, Result};

const WEIGHT_BITS: usize = 16;

/// Canonical ring: public keys sorted by their encoding, no duplicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    members: Vec<NiederreiterPublicKey>,
}

impl Ring {
    pub fn new(mut members: Vec<NiederreiterPublicKey>) -> Result<Self> {
        check_members(&members)?;
        members.sort_by_cached_key(|pk| pk.encoded());
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::param("duplicate ring member"));
        }
        Ok(Ring { members })
    }

    pub fn members(&self) -> &[NiederreiterPublicKey] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn position(&self, pk: &NiederreiterPublicKey) -> Option<usize> {
        self.members.iter().position(|m| m == pk)
    }

    pub fn digest(&self) -> Digest {
        let mut h = TaggedHasher::new("zlc/ring");
        h.update_u32(self.members.len() as u32);
        for pk in &self.members {
            h.update(&pk.encoded());
        }
        h.finalize()
    }
}

fn check_members(members: &[NiederreiterPublicKey]) -> Result<()> {
    let first = members.first().ok_or_else(|| Error::param("empty ring"))?;
    if members.iter().any(|pk| pk.m() != first.m() || pk.t() != first.t()) {
        return Err(Error::param("ring members must share (m, t)"));
    }
    if u32::try_from(members.len()).is_err() {
        return Err(Error::param("ring too large"));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingSignature {
    pub m: u32,
    pub t: usize,
    pub x0: BitVector,
    pub z: Vec<BitVector>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VerifyStats {
    /// Column additions performed while computing the `H_i z_i^T`.
    pub column_ops: u64,
    pub hash_calls: u64,
}

fn step(n_members: usize, msg_digest: &Digest, v: &BitVector) -> BitVector {
    let mut h = TaggedHasher::new("zlc/step");
    h.update_u32(n_members as u32).update(msg_digest).update_bits(v);
    expand_bits(&h.finalize(), v.len())
}

fn add_columns(pk: &NiederreiterPublicKey, z: &BitVector, x: &BitVector, ops: &mut u64) -> BitVector {
    let mut acc = x.clone();
    for i in z.iter_ones() {
        acc.xor_assign(&pk.matrix().column(i));
        *ops += 1;
    }
    acc
}

pub fn sign<R: Rng + ?Sized>(
    members: &[NiederreiterPublicKey],
    signer: usize,
    sk: &NiederreiterSecretKey,
    msg: &[u8],
    budget: u64,
    rng: &mut R,
) -> Result<(RingSignature, u64)> {
    check_members(members)?;
    let n_members = members.len();
    if signer >= n_members {
        return Err(Error::param(format!("signer {signer} outside a ring of {n_members}")));
    }
    let pk0 = &members[0];
    if sk.code().m() != pk0.m() || sk.code().t() != pk0.t() {
        return Err(Error::param("signing key parameters differ from the ring"));
    }
    let (n, nk, t) = (pk0.n(), pk0.syndrome_len(), pk0.t());
    let digest = sha256(msg);
    let mut ops = 0;
    for attempt in 1..=budget {
        let xbar = BitVector::random(nk, rng);
        let mut x = vec![BitVector::zeros(nk); n_members];
        let mut z = vec![BitVector::zeros(n); n_members];
        let mut i = (signer + 1) % n_members;
        x[i] = step(n_members, &digest, &xbar);
        while i != signer {
            z[i] = random_ball_word(n, t, rng);
            let next = step(n_members, &digest, &add_columns(&members[i], &z[i], &x[i], &mut ops));
            i = (i + 1) % n_members;
            x[i] = next;
        }
        match sk.invert(&x[signer].xor(&xbar)) {
            Ok(zr) => {
                z[signer] = zr;
                let sig = RingSignature {
                    m: pk0.m(),
                    t,
                    x0: x.swap_remove(0),
                    z,
                };
                if !verify(members, msg, &sig) {
                    return Err(Error::param("signing key does not match the ring member"));
                }
                return Ok((sig, attempt));
            }
            Err(Error::Undecodable) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::AttemptBudgetExceeded(budget))
}

/// The sequence `x_0, x_1, .., x_N` recomputed from a signature, or `None`
/// if shapes do not fit the ring.
pub fn ring_sequence(
    members: &[NiederreiterPublicKey],
    msg: &[u8],
    sig: &RingSignature,
    stats: &mut VerifyStats,
) -> Option<Vec<BitVector>> {
    let pk0 = members.first()?;
    if sig.z.len() != members.len()
        || sig.m != pk0.m()
        || sig.t != pk0.t()
        || sig.x0.len() != pk0.syndrome_len()
        || check_members(members).is_err()
    {
        return None;
    }
    let digest = sha256(msg);
    stats.hash_calls += 1;
    let mut xs = vec![sig.x0.clone()];
    for (pk, z) in members.iter().zip(&sig.z) {
        if z.len() != pk.n() || z.weight() > pk.t() {
            return None;
        }
        let v = add_columns(pk, z, xs.last().unwrap(), &mut stats.column_ops);
        xs.push(step(members.len(), &digest, &v));
        stats.hash_calls += 1;
    }
    Some(xs)
}

pub fn verify_with_stats(members: &[NiederreiterPublicKey], msg: &[u8], sig: &RingSignature) -> (bool, VerifyStats) {
    let mut stats = VerifyStats::default();
    let ok = ring_sequence(members, msg, sig, &mut stats).is_some_and(|xs| xs.last() == Some(&sig.x0));
    (ok, stats)
}

pub fn verify(members: &[NiederreiterPublicKey], msg: &[u8], sig: &RingSignature) -> bool {
    verify_with_stats(members, msg, sig).0
}

/// `(n - k) + sum_i (16 + cw_index_bits(n, wt(z_i)))`.
pub fn packed_len(sig: &RingSignature) -> usize {
    sig.x0.len()
        + sig
            .z
            .iter()
            .map(|z| WEIGHT_BITS + cw_index_bits(z.len() as u64, z.weight() as u64) as usize)
            .sum::<usize>()
}

/// Length estimate `mt + ceil(log2 C(2^m, t)) l` for `l` slots.
pub fn estimated_bits(m: u32, t: usize, l: usize) -> u64 {
    let width = cw_index_bits(1u64 << m, t as u64);
    m as u64 * t as u64 + width * l as u64
}

impl RingSignature {
    /// Bit-exact packing: `x_0`, then per slot the weight and the rank.
    pub fn pack(&self) -> BitVector {
        let mut bits: Vec<bool> = self.x0.iter().collect();
        for z in &self.z {
            let w = z.weight();
            bits.extend((0..WEIGHT_BITS).map(|b| (w >> b) & 1 == 1));
            let width = cw_index_bits(z.len() as u64, w as u64) as usize;
            let rank = cw_rank(z, w).expect("weight matches");
            bits.extend((0..width).map(|b| rank.bit(b as u64)));
        }
        BitVector::from_bools(&bits)
    }

    pub fn unpack(m: u32, t: usize, members: usize, bits: &BitVector) -> Result<Self> {
        let n = code_length(m, t)?;
        let nk = m as usize * t;
        let mut pos = 0;
        let mut take = |len: usize| -> Result<BitVector> {
            if pos + len > bits.len() {
                return Err(Error::malformed("packed ring signature too short"));
            }
            pos += len;
            Ok(bits.slice(pos - len, pos))
        };
        let x0 = take(nk)?;
        let mut z = Vec::with_capacity(members);
        for _ in 0..members {
            let w = take(WEIGHT_BITS)?.to_u64() as usize;
            if w > t {
                return Err(Error::malformed("slot weight exceeds t"));
            }
            let width = cw_index_bits(n as u64, w as u64) as usize;
            let raw = take(width)?;
            let mut rank = num_bigint::BigUint::default();
            for b in raw.iter_ones() {
                rank.set_bit(b as u64, true);
            }
            if rank >= binomial(n as u64, w as u64) {
                return Err(Error::malformed("rank out of range"));
            }
            z.push(cw_unrank(n, w, &rank)?);
        }
        if pos != bits.len() {
            return Err(Error::malformed("trailing bits"));
        }
        Ok(RingSignature { m, t, x0, z })
    }
}

impl Encode for Ring {
    fn encode(&self, w: &mut Writer) {
        w.put(&self.members);
    }
}

impl Decode for Ring {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        let members: Vec<NiederreiterPublicKey> = r.get()?;
        let ring = Ring::new(members.clone()).map_err(|e| Error::malformed(e.to_string()))?;
        if ring.members != members {
            return Err(Error::malformed("ring members are not in canonical order"));
        }
        Ok(ring)
    }
}

impl Encode for RingSignature {
    fn encode(&self, w: &mut Writer) {
        w.u32(self.m).len(self.t).raw(&self.x0.to_bytes()).len(self.z.len());
        for z in &self.z {
            w.cw(z);
        }
    }
}

impl Decode for RingSignature {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        let m = r.u32()?;
        let t = r.len()?;
        let n = code_length(m, t).map_err(|e| Error::malformed(e.to_string()))?;
        let nk = m as usize * t;
        let x0 = BitVector::from_bytes(nk, r.raw(nk.div_ceil(8))?)?;
        let count = r.len()?;
        if count > r.remaining() {
            return Err(Error::malformed("slot count exceeds input"));
        }
        let z = (0..count).map(|_| r.cw(n, t)).collect::<Result<Vec<_>>>()?;
        Ok(RingSignature { m, t, x0, z })
    }
}
