//! Stern's 3-pass identification and its Fiat-Shamir signature.
//!
//! One round: the prover picks a random `u` and permutation `sigma` and
//! commits to
//!
//! ```text
//! c1 = h(sigma, H u^T)    c2 = h(sigma(u))    c3 = h(sigma(u + s))
//! ```
//!
//! On challenge `b` it opens two of them: `b = 0` reveals `(u, sigma)`,
//! `b = 1` reveals `(u + s, sigma)` and `b = 2` reveals
//! `(sigma(u), sigma(s))`. Each commitment is domain-separated by its slot
//! and by the statement's context string.

use rand::Rng;

use crate::algebra::{random_permutation, random_weight_word, BitMatrix, BitVector, Permutation};
use crate::codec::{Decode, Encode, Reader, Writer};
use crate::hash::{ternary_challenges, Digest, TaggedHasher};
use crate::{Error, Result};

/// Public data of one proof: `H s^T = y` with `wt(s) = weight`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    pub h: BitMatrix,
    pub y: BitVector,
    pub weight: usize,
    /// Bound into every commitment and challenge.
    pub context: Vec<u8>,
}

impl Statement {
    pub fn new(h: BitMatrix, y: BitVector, weight: usize, context: Vec<u8>) -> Result<Self> {
        if y.len() != h.rows() {
            return Err(Error::DimensionMismatch {
                expected: h.rows(),
                actual: y.len(),
            });
        }
        if weight > h.cols() {
            return Err(Error::param("weight exceeds code length"));
        }
        Ok(Statement { h, y, weight, context })
    }

    pub fn n(&self) -> usize {
        self.h.cols()
    }

    pub fn is_witness(&self, s: &BitVector) -> bool {
        s.len() == self.n() && s.weight() == self.weight && self.h.mul_vec(s) == self.y
    }

    fn c1(&self, sigma: &Permutation, hu: &BitVector) -> Digest {
        let mut h = TaggedHasher::new("stern/c1");
        h.update(&self.context).update(&sigma.to_bytes()).update_bits(hu);
        h.finalize()
    }

    fn c2(&self, su: &BitVector) -> Digest {
        let mut h = TaggedHasher::new("stern/c2");
        h.update(&self.context).update_bits(su);
        h.finalize()
    }

    fn c3(&self, sus: &BitVector) -> Digest {
        let mut h = TaggedHasher::new("stern/c3");
        h.update(&self.context).update_bits(sus);
        h.finalize()
    }

    /// Checks the response to challenge `b` against the commitments.
    pub fn check(&self, c: &Commitments, b: u8, response: &Response) -> bool {
        let n = self.n();
        match (b, response) {
            (0, Response::Zero { u, sigma }) => {
                u.len() == n
                    && sigma.len() == n
                    && c.c1 == self.c1(sigma, &self.h.mul_vec(u))
                    && c.c2 == self.c2(&sigma.apply(u))
            }
            (1, Response::One { u_plus_s, sigma }) => {
                u_plus_s.len() == n
                    && sigma.len() == n
                    && c.c1 == self.c1(sigma, &self.h.mul_vec(u_plus_s).xor(&self.y))
                    && c.c3 == self.c3(&sigma.apply(u_plus_s))
            }
            (2, Response::Two { sigma_u, sigma_s }) => {
                sigma_u.len() == n
                    && sigma_s.len() == n
                    && sigma_s.weight() == self.weight
                    && c.c2 == self.c2(sigma_u)
                    && c.c3 == self.c3(&sigma_u.xor(sigma_s))
            }
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SternKeyPair {
    pub public: Statement,
    pub secret: BitVector,
}

impl SternKeyPair {
    /// Random `(n-k) x n` parity check, uniform weight-`t` secret.
    pub fn generate<R: Rng + ?Sized>(n: usize, k: usize, t: usize, rng: &mut R) -> Result<Self> {
        if k >= n || t > n || t == 0 {
            return Err(Error::param(format!("need 0 < t <= n and k < n, got n={n} k={k} t={t}")));
        }
        let h = BitMatrix::random(n - k, n, rng);
        let s = random_weight_word(n, t, rng);
        let y = h.mul_vec(&s);
        Ok(SternKeyPair {
            public: Statement::new(h, y, t, Vec::new())?,
            secret: s,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Commitments {
    pub c1: Digest,
    pub c2: Digest,
    pub c3: Digest,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Response {
    Zero { u: BitVector, sigma: Permutation },
    One { u_plus_s: BitVector, sigma: Permutation },
    Two { sigma_u: BitVector, sigma_s: BitVector },
}

impl Response {
    pub fn challenge(&self) -> u8 {
        match self {
            Response::Zero { .. } => 0,
            Response::One { .. } => 1,
            Response::Two { .. } => 2,
        }
    }
}

/// The prover side of one round.
pub trait Prover {
    fn commit(&mut self, rng: &mut dyn rand::RngCore) -> Commitments;
    fn respond(&mut self, b: u8) -> Response;
}

pub struct HonestProver<'a> {
    statement: &'a Statement,
    secret: &'a BitVector,
    state: Option<(BitVector, Permutation)>,
}

impl<'a> HonestProver<'a> {
    pub fn new(statement: &'a Statement, secret: &'a BitVector) -> Self {
        HonestProver {
            statement,
            secret,
            state: None,
        }
    }
}

impl Prover for HonestProver<'_> {
    fn commit(&mut self, rng: &mut dyn rand::RngCore) -> Commitments {
        let st = self.statement;
        let u = BitVector::random(st.n(), rng);
        let sigma = random_permutation(st.n(), rng);
        let c = Commitments {
            c1: st.c1(&sigma, &st.h.mul_vec(&u)),
            c2: st.c2(&sigma.apply(&u)),
            c3: st.c3(&sigma.apply(&u.xor(self.secret))),
        };
        self.state = Some((u, sigma));
        c
    }

    fn respond(&mut self, b: u8) -> Response {
        let (u, sigma) = self.state.take().expect("commit before respond");
        match b {
            0 => Response::Zero { u, sigma },
            1 => Response::One {
                u_plus_s: u.xor(self.secret),
                sigma,
            },
            _ => Response::Two {
                sigma_u: sigma.apply(&u),
                sigma_s: sigma.apply(self.secret),
            },
        }
    }
}

/// Which two challenges a cheating round is prepared for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheatStrategy {
    /// Any solution of `H s'^T = y`, ignoring the weight.
    Pass01,
    /// A weight-`t` word that is not a solution, committed as in `b = 0`.
    Pass02,
    /// A weight-`t` word with `c1` adjusted for `b = 1`.
    Pass12,
}

/// Impersonator holding only the public statement. Each round it picks one
/// of the three strategies uniformly, so it is caught with probability 1/3.
pub struct Cheater<'a> {
    statement: &'a Statement,
    heavy: Option<BitVector>,
    state: Option<(CheatStrategy, BitVector, Permutation, BitVector)>,
}

impl<'a> Cheater<'a> {
    pub fn new(statement: &'a Statement) -> Self {
        Cheater {
            statement,
            heavy: statement.h.solve(&statement.y).ok(),
            state: None,
        }
    }

    pub fn last_strategy(&self) -> Option<CheatStrategy> {
        self.state.as_ref().map(|s| s.0)
    }
}

impl Prover for Cheater<'_> {
    fn commit(&mut self, rng: &mut dyn rand::RngCore) -> Commitments {
        let st = self.statement;
        let n = st.n();
        let mut strategy = match rng.gen_range(0..3) {
            0 => CheatStrategy::Pass01,
            1 => CheatStrategy::Pass02,
            _ => CheatStrategy::Pass12,
        };
        if strategy == CheatStrategy::Pass01 && self.heavy.is_none() {
            strategy = CheatStrategy::Pass02;
        }
        let fake = match strategy {
            CheatStrategy::Pass01 => self.heavy.clone().expect("checked above"),
            _ => random_weight_word(n, st.weight, rng),
        };
        let u = BitVector::random(n, rng);
        let sigma = random_permutation(n, rng);
        let hu = match strategy {
            CheatStrategy::Pass12 => st.h.mul_vec(&u.xor(&fake)).xor(&st.y),
            _ => st.h.mul_vec(&u),
        };
        let c = Commitments {
            c1: st.c1(&sigma, &hu),
            c2: st.c2(&sigma.apply(&u)),
            c3: st.c3(&sigma.apply(&u.xor(&fake))),
        };
        self.state = Some((strategy, u, sigma, fake));
        c
    }

    fn respond(&mut self, b: u8) -> Response {
        let (_, u, sigma, fake) = self.state.clone().expect("commit before respond");
        match b {
            0 => Response::Zero { u, sigma },
            1 => Response::One {
                u_plus_s: u.xor(&fake),
                sigma,
            },
            _ => Response::Two {
                sigma_u: sigma.apply(&u),
                sigma_s: sigma.apply(&fake),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub round: usize,
    pub commitments: Commitments,
    pub challenge: u8,
    pub response: Response,
    pub accepted: bool,
}

/// Runs one interactive round with a uniformly drawn challenge.
pub fn round<R: Rng>(statement: &Statement, prover: &mut dyn Prover, index: usize, rng: &mut R) -> Transcript {
    let commitments = prover.commit(rng);
    let challenge = rng.gen_range(0..3u8);
    let response = prover.respond(challenge);
    let accepted = statement.check(&commitments, challenge, &response);
    Transcript {
        round: index,
        commitments,
        challenge,
        response,
        accepted,
    }
}

/// Runs `rounds` rounds and accepts iff all of them accept. Stops at the
/// first rejection; the returned transcripts cover the rounds played.
pub fn identify<R: Rng>(
    statement: &Statement,
    prover: &mut dyn Prover,
    rounds: usize,
    rng: &mut R,
) -> (bool, Vec<Transcript>) {
    let mut log = Vec::with_capacity(rounds);
    for i in 0..rounds {
        let tr = round(statement, prover, i, rng);
        let ok = tr.accepted;
        log.push(tr);
        if !ok {
            return (false, log);
        }
    }
    (true, log)
}

/// Smallest `r` with `(2/3)^r <= 2^-bits`.
pub fn rounds_for_soundness(bits: u32) -> usize {
    (bits as f64 / (1.5f64).log2()).ceil() as usize
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SternSignature {
    pub commitments: Vec<Commitments>,
    pub responses: Vec<Response>,
}

fn fs_challenges(statement: &Statement, msg: &[u8], commitments: &[Commitments]) -> Vec<u8> {
    let mut h = TaggedHasher::new("stern/fs");
    h.update(&statement.context)
        .update_u64(msg.len() as u64)
        .update(msg)
        .update_u32(commitments.len() as u32);
    for c in commitments {
        h.update(&c.c1).update(&c.c2).update(&c.c3);
    }
    ternary_challenges(h.finalize(), commitments.len())
}

pub fn fs_sign<R: Rng>(
    statement: &Statement,
    secret: &BitVector,
    msg: &[u8],
    rounds: usize,
    rng: &mut R,
) -> Result<SternSignature> {
    if rounds == 0 {
        return Err(Error::param("at least one round is required"));
    }
    if !statement.is_witness(secret) {
        return Err(Error::param("secret does not satisfy the statement"));
    }
    let mut provers: Vec<HonestProver> = (0..rounds).map(|_| HonestProver::new(statement, secret)).collect();
    let commitments: Vec<Commitments> = provers.iter_mut().map(|p| p.commit(rng)).collect();
    let challenges = fs_challenges(statement, msg, &commitments);
    let responses = provers
        .iter_mut()
        .zip(&challenges)
        .map(|(p, &b)| p.respond(b))
        .collect();
    Ok(SternSignature { commitments, responses })
}

pub fn fs_verify(statement: &Statement, msg: &[u8], sig: &SternSignature) -> bool {
    if sig.commitments.is_empty() || sig.commitments.len() != sig.responses.len() {
        return false;
    }
    let challenges = fs_challenges(statement, msg, &sig.commitments);
    sig.commitments
        .iter()
        .zip(&sig.responses)
        .zip(challenges)
        .all(|((c, r), b)| statement.check(c, b, r))
}

impl Encode for Statement {
    fn encode(&self, w: &mut Writer) {
        w.matrix(&self.h).bits(&self.y).len(self.weight).bytes(&self.context);
    }
}

impl Decode for Statement {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        let h = r.matrix()?;
        let y = r.bits()?;
        let weight = r.len()?;
        let context = r.bytes()?;
        Statement::new(h, y, weight, context).map_err(|e| Error::malformed(e.to_string()))
    }
}

impl Encode for SternKeyPair {
    fn encode(&self, w: &mut Writer) {
        w.put(&self.public).bits(&self.secret);
    }
}

impl Decode for SternKeyPair {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        let public: Statement = r.get()?;
        let secret = r.bits()?;
        if !public.is_witness(&secret) {
            return Err(Error::malformed("secret does not match the public key"));
        }
        Ok(SternKeyPair { public, secret })
    }
}

impl Encode for Commitments {
    fn encode(&self, w: &mut Writer) {
        w.raw(&self.c1).raw(&self.c2).raw(&self.c3);
    }
}

impl Decode for Commitments {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        let mut take = || -> Result<Digest> { Ok(r.raw(32)?.try_into().unwrap()) };
        Ok(Commitments {
            c1: take()?,
            c2: take()?,
            c3: take()?,
        })
    }
}

impl Encode for Response {
    fn encode(&self, w: &mut Writer) {
        w.u8(self.challenge());
        match self {
            Response::Zero { u, sigma } => w.bits(u).perm(sigma),
            Response::One { u_plus_s, sigma } => w.bits(u_plus_s).perm(sigma),
            Response::Two { sigma_u, sigma_s } => w.bits(sigma_u).bits(sigma_s),
        };
    }
}

impl Decode for Response {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        Ok(match r.u8()? {
            0 => Response::Zero {
                u: r.bits()?,
                sigma: r.perm()?,
            },
            1 => Response::One {
                u_plus_s: r.bits()?,
                sigma: r.perm()?,
            },
            2 => Response::Two {
                sigma_u: r.bits()?,
                sigma_s: r.bits()?,
            },
            b => return Err(Error::malformed(format!("challenge tag {b}"))),
        })
    }
}

impl Encode for SternSignature {
    fn encode(&self, w: &mut Writer) {
        w.put(&self.commitments).put(&self.responses);
    }
}

impl Decode for SternSignature {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        Ok(SternSignature {
            commitments: r.get()?,
            responses: r.get()?,
        })
    }
}
