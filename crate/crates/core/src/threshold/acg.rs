//! ACG threshold ring identification.
//!
//! Each member `i` publishes `H_i` with a secret `s_i` of weight `t` in its
//! kernel. A leader runs one Stern instance per member, padding the
//! non-signers with `s_i = 0`, and shuffles the `N` blocks with a secret
//! block permutation `Pi` before hashing them into master commitments
//!
//! ```text
//! C_j = h(Pi(c_{j,1}, .., c_{j,N}))      (Pi scatters slot i to Pi(i))
//! ```
//!
//! The global permutation `Omega = Pi o (sigma_1, .., sigma_N)` is revealed
//! as the pair `(Pi, sigma_1..sigma_N)`, which makes it an `n`-block
//! permutation by construction. For `b = 2` the responses are listed in
//! shuffled order, so the verifier learns the block weights but not which
//! members signed.

use rand::{Rng, RngCore};

use crate::algebra::{random_permutation, random_weight_word, BitMatrix, BitVector, Permutation};
use crate::codec::{Decode, Encode, Reader, Writer};
use crate::hash::{ternary_challenges, Digest, TaggedHasher};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcgRing {
    pub t: usize,
    pub members: Vec<BitMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcgMemberKey {
    pub h: BitMatrix,
    pub s: BitVector,
}

impl AcgMemberKey {
    /// Samples `s` first, then a random `H` adjusted so that `H s^T = 0`.
    pub fn generate<R: Rng + ?Sized>(n: usize, k: usize, t: usize, rng: &mut R) -> Result<Self> {
        if k >= n || t == 0 || t > n {
            return Err(Error::param(format!("need 0 < t <= n and k < n, got n={n} k={k} t={t}")));
        }
        let s = random_weight_word(n, t, rng);
        let pivot = s.iter_ones().next().expect("t > 0");
        let rows = (0..n - k)
            .map(|_| {
                let mut row = BitVector::random(n, rng);
                if row.dot(&s) {
                    row.flip(pivot);
                }
                row
            })
            .collect();
        Ok(AcgMemberKey {
            h: BitMatrix::from_rows(n, rows),
            s,
        })
    }
}

/// Generates `N` member keys and the ring they form.
pub fn keygen<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    t: usize,
    members: usize,
    rng: &mut R,
) -> Result<(AcgRing, Vec<AcgMemberKey>)> {
    if members == 0 {
        return Err(Error::param("empty ring"));
    }
    let keys = (0..members)
        .map(|_| AcgMemberKey::generate(n, k, t, rng))
        .collect::<Result<Vec<_>>>()?;
    let ring = AcgRing {
        t,
        members: keys.iter().map(|k| k.h.clone()).collect(),
    };
    Ok((ring, keys))
}

impl AcgRing {
    pub fn new(t: usize, members: Vec<BitMatrix>) -> Result<Self> {
        let first = members.first().ok_or_else(|| Error::param("empty ring"))?;
        if members.iter().any(|h| h.rows() != first.rows() || h.cols() != first.cols()) {
            return Err(Error::param("ring members must share dimensions"));
        }
        if t == 0 || t > first.cols() {
            return Err(Error::param("weight out of range"));
        }
        Ok(AcgRing { t, members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn n(&self) -> usize {
        self.members[0].cols()
    }

    /// The block-diagonal `(n-k)N x nN` ring matrix.
    pub fn block_matrix(&self) -> BitMatrix {
        let (r, n) = (self.members[0].rows(), self.n());
        let total = n * self.len();
        let rows = self
            .members
            .iter()
            .enumerate()
            .flat_map(|(i, h)| {
                (0..r).map(move |j| {
                    BitVector::from_indices(total, h.row(j).iter_ones().map(|c| c + i * n))
                })
            })
            .collect();
        BitMatrix::from_rows(total, rows)
    }
}

fn slot_c1(sigma: &Permutation, hz: &BitVector) -> Digest {
    let mut h = TaggedHasher::new("acg/c1");
    h.update(&sigma.to_bytes()).update_bits(hz);
    h.finalize()
}

fn slot_c(tag: &str, v: &BitVector) -> Digest {
    let mut h = TaggedHasher::new(tag);
    h.update_bits(v);
    h.finalize()
}

fn master(tag: &str, ordered: &[Digest]) -> Digest {
    let mut h = TaggedHasher::new(tag);
    h.update_u32(ordered.len() as u32);
    for d in ordered {
        h.update(d);
    }
    h.finalize()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MasterCommitments {
    pub c1: Digest,
    pub c2: Digest,
    pub c3: Digest,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AcgResponse {
    /// `z` in member order, with `Omega`.
    Zero {
        z: Vec<BitVector>,
        pi: Permutation,
        sigmas: Vec<Permutation>,
    },
    /// `z + s` in member order, with `Omega`.
    One {
        x: Vec<BitVector>,
        pi: Permutation,
        sigmas: Vec<Permutation>,
    },
    /// `sigma_i(z_i)` and `sigma_i(s_i)`, both placed at block `Pi(i)`.
    Two { w: Vec<BitVector>, v: Vec<BitVector> },
}

impl AcgResponse {
    pub fn challenge(&self) -> u8 {
        match self {
            AcgResponse::Zero { .. } => 0,
            AcgResponse::One { .. } => 1,
            AcgResponse::Two { .. } => 2,
        }
    }
}

/// Work counter: bit operations spent on syndromes, permutations and
/// hashing input.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Cost {
    pub bit_ops: u64,
}

impl Cost {
    fn syndrome(&mut self, h: &BitMatrix) {
        self.bit_ops += (h.rows() * h.cols()) as u64;
    }

    fn linear(&mut self, n: usize) {
        self.bit_ops += n as u64;
    }
}

pub trait Leader {
    fn commit(&mut self, rng: &mut dyn RngCore) -> MasterCommitments;
    fn respond(&mut self, b: u8) -> AcgResponse;
}

struct RoundState {
    z: Vec<BitVector>,
    sigmas: Vec<Permutation>,
    pi: Permutation,
    /// The secrets used in this round (real, padded or fake).
    s: Vec<BitVector>,
}

fn commit_blocks(
    ring: &AcgRing,
    s: Vec<BitVector>,
    c1_offset: Option<&[BitVector]>,
    cost: &mut Cost,
    rng: &mut dyn RngCore,
) -> (MasterCommitments, RoundState) {
    let n = ring.n();
    let big_n = ring.len();
    let z: Vec<BitVector> = (0..big_n).map(|_| BitVector::random(n, rng)).collect();
    let sigmas: Vec<Permutation> = (0..big_n).map(|_| random_permutation(n, rng)).collect();
    let pi = random_permutation(big_n, rng);
    let mut c1 = Vec::with_capacity(big_n);
    let mut c2 = Vec::with_capacity(big_n);
    let mut c3 = Vec::with_capacity(big_n);
    for i in 0..big_n {
        let h = &ring.members[i];
        let hz = match c1_offset {
            Some(fake) => h.mul_vec(&z[i].xor(&fake[i])),
            None => h.mul_vec(&z[i]),
        };
        cost.syndrome(h);
        c1.push(slot_c1(&sigmas[i], &hz));
        c2.push(slot_c("acg/c2", &sigmas[i].apply(&z[i])));
        c3.push(slot_c("acg/c3", &sigmas[i].apply(&z[i].xor(&s[i]))));
        cost.linear(4 * n);
    }
    let commitments = MasterCommitments {
        c1: master("acg/C1", &pi.apply_slice(&c1)),
        c2: master("acg/C2", &pi.apply_slice(&c2)),
        c3: master("acg/C3", &pi.apply_slice(&c3)),
    };
    (commitments, RoundState { z, sigmas, pi, s })
}

fn respond_blocks(state: &RoundState, b: u8) -> AcgResponse {
    let RoundState { z, sigmas, pi, s } = state;
    match b {
        0 => AcgResponse::Zero {
            z: z.clone(),
            pi: pi.clone(),
            sigmas: sigmas.clone(),
        },
        1 => AcgResponse::One {
            x: z.iter().zip(s).map(|(z, s)| z.xor(s)).collect(),
            pi: pi.clone(),
            sigmas: sigmas.clone(),
        },
        _ => {
            let w: Vec<BitVector> = z.iter().zip(sigmas).map(|(z, p)| p.apply(z)).collect();
            let v: Vec<BitVector> = s.iter().zip(sigmas).map(|(s, p)| p.apply(s)).collect();
            AcgResponse::Two {
                w: pi.apply_slice(&w),
                v: pi.apply_slice(&v),
            }
        }
    }
}

/// Leader holding the secrets of the participating signers. With fewer
/// than `l` secrets it still runs, and is caught whenever `b = 2`.
pub struct HonestLeader<'a> {
    ring: &'a AcgRing,
    secrets: Vec<BitVector>,
    state: Option<RoundState>,
    pub cost: Cost,
}

impl<'a> HonestLeader<'a> {
    /// `signers` pairs member indices with their secrets.
    pub fn new(ring: &'a AcgRing, signers: &[(usize, &BitVector)]) -> Result<Self> {
        let mut secrets = vec![BitVector::zeros(ring.n()); ring.len()];
        for &(i, s) in signers {
            if i >= ring.len() || s.len() != ring.n() {
                return Err(Error::param(format!("signer {i} does not fit the ring")));
            }
            if !secrets[i].is_zero() {
                return Err(Error::param(format!("signer {i} listed twice")));
            }
            secrets[i] = s.clone();
        }
        Ok(HonestLeader {
            ring,
            secrets,
            state: None,
            cost: Cost::default(),
        })
    }
}

impl Leader for HonestLeader<'_> {
    fn commit(&mut self, rng: &mut dyn RngCore) -> MasterCommitments {
        let (c, state) = commit_blocks(self.ring, self.secrets.clone(), None, &mut self.cost, rng);
        self.state = Some(state);
        c
    }

    fn respond(&mut self, b: u8) -> AcgResponse {
        respond_blocks(self.state.as_ref().expect("commit before respond"), b)
    }
}

/// Impersonator with public data only: each round it prepares for two of
/// the three challenges, like the Stern cheater.
pub struct Cheater<'a> {
    ring: &'a AcgRing,
    l: usize,
    state: Option<RoundState>,
}

impl<'a> Cheater<'a> {
    pub fn new(ring: &'a AcgRing, l: usize) -> Self {
        Cheater { ring, l, state: None }
    }
}

impl Leader for Cheater<'_> {
    fn commit(&mut self, rng: &mut dyn RngCore) -> MasterCommitments {
        let (n, big_n, t) = (self.ring.n(), self.ring.len(), self.ring.t);
        let mut cost = Cost::default();
        let strategy = rng.gen_range(0..3);
        // s = 0 solves every block but has the wrong weight: passes b in {0, 1}
        if strategy == 0 {
            let (c, st) = commit_blocks(self.ring, vec![BitVector::zeros(n); big_n], None, &mut cost, rng);
            self.state = Some(st);
            return c;
        }
        // a fake with the right block weights but nonzero syndromes
        let chosen = rand::seq::index::sample(rng, big_n, self.l.min(big_n));
        let mut fake = vec![BitVector::zeros(n); big_n];
        for i in chosen {
            fake[i] = random_weight_word(n, t, rng);
        }
        let offset = if strategy == 1 { None } else { Some(fake.clone()) };
        let (c, st) = commit_blocks(self.ring, fake, offset.as_deref(), &mut cost, rng);
        self.state = Some(st);
        c
    }

    fn respond(&mut self, b: u8) -> AcgResponse {
        respond_blocks(self.state.as_ref().expect("commit before respond"), b)
    }
}

/// Verifier check for an `l`-out-of-`N` claim.
pub fn check(ring: &AcgRing, l: usize, c: &MasterCommitments, b: u8, resp: &AcgResponse) -> bool {
    let (n, big_n) = (ring.n(), ring.len());
    let shape_ok = |vs: &[BitVector]| vs.len() == big_n && vs.iter().all(|v| v.len() == n);
    let omega_ok = |pi: &Permutation, sigmas: &[Permutation]| {
        pi.len() == big_n && sigmas.len() == big_n && sigmas.iter().all(|s| s.len() == n)
    };
    let c1_of = |vs: &[BitVector], sigmas: &[Permutation], pi: &Permutation| {
        let slots: Vec<Digest> = (0..big_n).map(|i| slot_c1(&sigmas[i], &ring.members[i].mul_vec(&vs[i]))).collect();
        master("acg/C1", &pi.apply_slice(&slots))
    };
    let cj_of = |tag: &str, master_tag: &str, vs: &[BitVector], sigmas: &[Permutation], pi: &Permutation| {
        let slots: Vec<Digest> = (0..big_n).map(|i| slot_c(tag, &sigmas[i].apply(&vs[i]))).collect();
        master(master_tag, &pi.apply_slice(&slots))
    };
    match (b, resp) {
        (0, AcgResponse::Zero { z, pi, sigmas }) => {
            shape_ok(z)
                && omega_ok(pi, sigmas)
                && c.c1 == c1_of(z, sigmas, pi)
                && c.c2 == cj_of("acg/c2", "acg/C2", z, sigmas, pi)
        }
        (1, AcgResponse::One { x, pi, sigmas }) => {
            shape_ok(x)
                && omega_ok(pi, sigmas)
                && c.c1 == c1_of(x, sigmas, pi)
                && c.c3 == cj_of("acg/c3", "acg/C3", x, sigmas, pi)
        }
        (2, AcgResponse::Two { w, v }) => {
            if !shape_ok(w) || !shape_ok(v) {
                return false;
            }
            let total: usize = v.iter().map(|b| b.weight()).sum();
            let blocks_ok = v.iter().all(|b| b.weight() == 0 || b.weight() == ring.t);
            let c2: Vec<Digest> = w.iter().map(|x| slot_c("acg/c2", x)).collect();
            let c3: Vec<Digest> = w.iter().zip(v).map(|(x, y)| slot_c("acg/c3", &x.xor(y))).collect();
            total == l * ring.t && blocks_ok && c.c2 == master("acg/C2", &c2) && c.c3 == master("acg/C3", &c3)
        }
        _ => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub round: usize,
    pub commitments: MasterCommitments,
    pub challenge: u8,
    pub response: AcgResponse,
    pub accepted: bool,
}

pub fn round<R: Rng>(ring: &AcgRing, l: usize, leader: &mut dyn Leader, index: usize, rng: &mut R) -> Transcript {
    let commitments = leader.commit(rng);
    let challenge = rng.gen_range(0..3u8);
    let response = leader.respond(challenge);
    let accepted = check(ring, l, &commitments, challenge, &response);
    Transcript {
        round: index,
        commitments,
        challenge,
        response,
        accepted,
    }
}

pub fn identify<R: Rng>(ring: &AcgRing, l: usize, leader: &mut dyn Leader, rounds: usize, rng: &mut R) -> bool {
    (0..rounds).all(|i| round(ring, l, leader, i, rng).accepted)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcgSignature {
    pub l: usize,
    pub commitments: Vec<MasterCommitments>,
    pub responses: Vec<AcgResponse>,
}

fn fs_challenges(ring: &AcgRing, l: usize, msg: &[u8], commitments: &[MasterCommitments]) -> Vec<u8> {
    let mut h = TaggedHasher::new("acg/fs");
    h.update_u32(ring.len() as u32).update_u32(l as u32).update_u64(msg.len() as u64).update(msg);
    for m in &ring.members {
        h.update(&m.to_bytes());
    }
    for c in commitments {
        h.update(&c.c1).update(&c.c2).update(&c.c3);
    }
    ternary_challenges(h.finalize(), commitments.len())
}

/// Signs on behalf of `l = signers.len()` members. Returns the signature
/// and the leader's work counter.
pub fn fs_sign<R: Rng>(
    ring: &AcgRing,
    signers: &[(usize, &BitVector)],
    msg: &[u8],
    rounds: usize,
    rng: &mut R,
) -> Result<(AcgSignature, Cost)> {
    if rounds == 0 {
        return Err(Error::param("at least one round is required"));
    }
    for &(i, s) in signers {
        if i >= ring.len() || s.weight() != ring.t || !ring.members[i].mul_vec(s).is_zero() {
            return Err(Error::param(format!("secret for member {i} is not valid")));
        }
    }
    let l = signers.len();
    let mut leaders: Vec<HonestLeader> = (0..rounds)
        .map(|_| HonestLeader::new(ring, signers))
        .collect::<Result<_>>()?;
    let commitments: Vec<MasterCommitments> = leaders.iter_mut().map(|ld| ld.commit(rng)).collect();
    let challenges = fs_challenges(ring, l, msg, &commitments);
    let responses = leaders.iter_mut().zip(&challenges).map(|(ld, &b)| ld.respond(b)).collect();
    let cost = Cost {
        bit_ops: leaders.iter().map(|ld| ld.cost.bit_ops).sum(),
    };
    Ok((
        AcgSignature {
            l,
            commitments,
            responses,
        },
        cost,
    ))
}

pub fn fs_verify(ring: &AcgRing, msg: &[u8], sig: &AcgSignature) -> bool {
    if sig.l == 0 || sig.l > ring.len() || sig.commitments.is_empty() || sig.commitments.len() != sig.responses.len() {
        return false;
    }
    let challenges = fs_challenges(ring, sig.l, msg, &sig.commitments);
    sig.commitments
        .iter()
        .zip(&sig.responses)
        .zip(challenges)
        .all(|((c, r), b)| check(ring, sig.l, c, b, r))
}

impl Encode for AcgRing {
    fn encode(&self, w: &mut Writer) {
        w.len(self.t).put(&self.members);
    }
}

impl Decode for AcgRing {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        let t = r.len()?;
        let members = r.get()?;
        AcgRing::new(t, members).map_err(|e| Error::malformed(e.to_string()))
    }
}

impl Encode for AcgMemberKey {
    fn encode(&self, w: &mut Writer) {
        w.matrix(&self.h).bits(&self.s);
    }
}

impl Decode for AcgMemberKey {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        let h = r.matrix()?;
        let s = r.bits()?;
        if s.len() != h.cols() || !h.mul_vec(&s).is_zero() {
            return Err(Error::malformed("secret is not in the kernel"));
        }
        Ok(AcgMemberKey { h, s })
    }
}

impl Encode for MasterCommitments {
    fn encode(&self, w: &mut Writer) {
        w.raw(&self.c1).raw(&self.c2).raw(&self.c3);
    }
}

impl Decode for MasterCommitments {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        let mut take = || -> Result<Digest> { Ok(r.raw(32)?.try_into().unwrap()) };
        Ok(MasterCommitments {
            c1: take()?,
            c2: take()?,
            c3: take()?,
        })
    }
}

impl Encode for AcgResponse {
    fn encode(&self, w: &mut Writer) {
        w.u8(self.challenge());
        match self {
            AcgResponse::Zero { z: v, pi, sigmas } | AcgResponse::One { x: v, pi, sigmas } => {
                w.put(v).perm(pi).put(sigmas);
            }
            AcgResponse::Two { w: a, v } => {
                w.put(a).put(v);
            }
        }
    }
}

impl Decode for AcgResponse {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        Ok(match r.u8()? {
            0 => AcgResponse::Zero {
                z: r.get()?,
                pi: r.perm()?,
                sigmas: r.get()?,
            },
            1 => AcgResponse::One {
                x: r.get()?,
                pi: r.perm()?,
                sigmas: r.get()?,
            },
            2 => AcgResponse::Two { w: r.get()?, v: r.get()? },
            b => return Err(Error::malformed(format!("challenge tag {b}"))),
        })
    }
}

impl Encode for AcgSignature {
    fn encode(&self, w: &mut Writer) {
        w.len(self.l).put(&self.commitments).put(&self.responses);
    }
}

impl Decode for AcgSignature {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        Ok(AcgSignature {
            l: r.len()?,
            commitments: r.get()?,
            responses: r.get()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::from_seed;

    fn setup(members: usize, seed: u64) -> (AcgRing, Vec<AcgMemberKey>) {
        keygen(32, 16, 4, members, &mut from_seed(seed)).unwrap()
    }

    fn signers(keys: &[AcgMemberKey], idx: &[usize]) -> Vec<(usize, BitVector)> {
        idx.iter().map(|&i| (i, keys[i].s.clone())).collect()
    }

    fn refs(v: &[(usize, BitVector)]) -> Vec<(usize, &BitVector)> {
        v.iter().map(|(i, s)| (*i, s)).collect()
    }

    #[test]
    fn key_invariants() {
        let (ring, keys) = setup(5, 1);
        for k in &keys {
            assert_eq!(k.s.weight(), 4);
            assert!(k.h.mul_vec(&k.s).is_zero());
        }
        let big = ring.block_matrix();
        assert_eq!((big.rows(), big.cols()), (80, 160));
        let all = keys.iter().fold(BitVector::zeros(0), |acc, k| acc.concat(&k.s));
        assert!(big.mul_vec(&all).is_zero());
    }

    #[test]
    fn honest_leader_passes_every_challenge() {
        for (big_n, l) in [(1usize, 1usize), (3, 1), (5, 3)] {
            let (ring, keys) = setup(big_n, 2 + big_n as u64);
            let chosen: Vec<usize> = (0..l).map(|i| (2 * i + 1) % big_n).collect();
            let sv = signers(&keys, &chosen);
            let mut leader = HonestLeader::new(&ring, &refs(&sv)).unwrap();
            let mut rng = from_seed(7);
            for b in 0..3 {
                let c = leader.commit(&mut rng);
                assert!(check(&ring, l, &c, b, &leader.respond(b)), "N={big_n} l={l} b={b}");
            }
        }
    }

    #[test]
    fn under_threshold_leader_fails_b2() {
        let (ring, keys) = setup(5, 3);
        let sv = signers(&keys, &[0, 2]);
        let mut leader = HonestLeader::new(&ring, &refs(&sv)).unwrap();
        let mut rng = from_seed(8);
        for _ in 0..20 {
            let c = leader.commit(&mut rng);
            assert!(!check(&ring, 3, &c, 2, &leader.respond(2)));
            let c = leader.commit(&mut rng);
            assert!(check(&ring, 3, &c, 0, &leader.respond(0)));
        }
    }

    #[test]
    fn cheater_near_two_thirds() {
        let (ring, _) = setup(3, 4);
        let mut cheater = Cheater::new(&ring, 2);
        let mut rng = from_seed(9);
        let trials = 1500;
        let hits = (0..trials).filter(|&i| round(&ring, 2, &mut cheater, i, &mut rng).accepted).count();
        let p = hits as f64 / trials as f64;
        assert!((p - 2.0 / 3.0).abs() < 0.05, "{p}");
    }

    #[test]
    fn fiat_shamir_round_trip() {
        let (ring, keys) = setup(4, 5);
        let sv = signers(&keys, &[1, 3]);
        let (sig, _) = fs_sign(&ring, &refs(&sv), b"msg", 12, &mut from_seed(10)).unwrap();
        assert!(fs_verify(&ring, b"msg", &sig));
        assert!(!fs_verify(&ring, b"msh", &sig));
        let mut claim = sig.clone();
        claim.l = 3;
        assert!(!fs_verify(&ring, b"msg", &claim));
        assert_eq!(AcgSignature::decode_exact(&sig.encoded()).unwrap(), sig);
        assert_eq!(AcgRing::decode_exact(&ring.encoded()).unwrap(), ring);
    }

    #[test]
    fn cost_is_linear_in_ring_size() {
        let per_member: Vec<f64> = [2usize, 4, 8]
            .iter()
            .map(|&big_n| {
                let (ring, keys) = setup(big_n, 20 + big_n as u64);
                let sv = signers(&keys, &[0]);
                let (_, cost) = fs_sign(&ring, &refs(&sv), b"m", 5, &mut from_seed(1)).unwrap();
                cost.bit_ops as f64 / big_n as f64
            })
            .collect();
        for c in &per_member {
            assert!((c / per_member[0] - 1.0).abs() < 0.15);
        }
    }

    #[test]
    fn b2_response_hides_signer_positions() {
        // The multiset of block weights is all the verifier sees.
        let (ring, keys) = setup(4, 6);
        let sv = signers(&keys, &[0]);
        let mut leader = HonestLeader::new(&ring, &refs(&sv)).unwrap();
        let mut rng = from_seed(11);
        let mut positions = [0usize; 4];
        for _ in 0..400 {
            leader.commit(&mut rng);
            if let AcgResponse::Two { v, .. } = leader.respond(2) {
                positions[v.iter().position(|b| b.weight() == 4).unwrap()] += 1;
            }
        }
        assert!(positions.iter().all(|&c| c > 60), "{positions:?}");
    }
}
