//! In-process prover/verifier driver with pluggable adversaries.
//!
//! Every trial plays `rounds` rounds to the end, so both the per-round and
//! the whole-protocol acceptance rate come out of one run. The instance is
//! drawn from stream 0 of the master seed and trial `i` uses stream `i + 1`,
//! which makes results independent of thread scheduling.

use std::io::Write;

use cbsig::algebra::{BitVector, Permutation};
use cbsig::goppa::NiederreiterKeyPair;
use cbsig::rng::{split, SeededRng};
use cbsig::stern::{self, Prover, Statement, SternKeyPair};
use cbsig::threshold::acg::{self, AcgResponse, Leader, MasterCommitments};
use cbsig::{ibs, Result};
use clap::ValueEnum;
use rand::{Rng, RngCore};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    Stern,
    Acg,
    Ibs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Adversary {
    Honest,
    /// Best strategy without the secret: prepares for two of three challenges.
    OptimalCheater,
    /// Replays recorded honest rounds, commitments and response alike.
    Replay,
    /// Honest prover whose responses get one bit flipped.
    BitFlipper,
}

impl Adversary {
    /// Per-round acceptance probability the adversary should achieve.
    pub fn expected_rate(self) -> f64 {
        match self {
            Adversary::Honest => 1.0,
            Adversary::OptimalCheater => 2.0 / 3.0,
            Adversary::Replay => 1.0 / 3.0,
            Adversary::BitFlipper => 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Instance {
    /// `(n, k, t)` for Stern and ACG member codes.
    pub code: (usize, usize, usize),
    /// `(m, t)` of the IBS key generation center.
    pub goppa: (u32, usize),
    /// `(N, l)` for ACG.
    pub ring: (usize, usize),
}

impl Default for Instance {
    fn default() -> Self {
        Instance {
            code: (64, 32, 7),
            goppa: (6, 2),
            ring: (3, 1),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Config {
    pub protocol: Protocol,
    pub adversary: Adversary,
    pub rounds: usize,
    pub trials: usize,
    pub seed: u64,
    pub instance: Instance,
}

/// Proportion with a 95% Wilson score interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Rate {
    pub successes: u64,
    pub total: u64,
    pub rate: f64,
    pub lo: f64,
    pub hi: f64,
}

pub fn wilson(successes: u64, total: u64, z: f64) -> (f64, f64) {
    if total == 0 {
        return (0.0, 1.0);
    }
    let n = total as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

impl Rate {
    pub fn new(successes: u64, total: u64) -> Self {
        let (lo, hi) = wilson(successes, total, 1.959_963_984_540_054);
        Rate {
            successes,
            total,
            rate: if total == 0 { 0.0 } else { successes as f64 / total as f64 },
            lo,
            hi,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Stats {
    pub protocol: Protocol,
    pub adversary: Adversary,
    pub rounds: usize,
    pub trials: usize,
    pub seed: u64,
    pub per_round: Rate,
    pub full_protocol: Rate,
    pub expected_per_round: f64,
    pub expected_full: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RoundRecord {
    pub trial: usize,
    pub round: usize,
    pub challenge: u8,
    pub accepted: bool,
}

struct Replay<C, R> {
    recorded: Vec<(C, R)>,
    next: usize,
}

impl<C: Clone, R: Clone> Replay<C, R> {
    fn take(&mut self) -> C {
        let c = self.recorded[self.next % self.recorded.len()].0.clone();
        c
    }

    fn give(&mut self) -> R {
        let r = self.recorded[self.next % self.recorded.len()].1.clone();
        self.next += 1;
        r
    }
}

impl Prover for Replay<stern::Commitments, stern::Response> {
    fn commit(&mut self, _: &mut dyn RngCore) -> stern::Commitments {
        self.take()
    }

    fn respond(&mut self, _: u8) -> stern::Response {
        self.give()
    }
}

impl Leader for Replay<MasterCommitments, AcgResponse> {
    fn commit(&mut self, _: &mut dyn RngCore) -> MasterCommitments {
        self.take()
    }

    fn respond(&mut self, _: u8) -> AcgResponse {
        self.give()
    }
}

struct Flip<P>(P);

fn flip(v: &mut BitVector) {
    if !v.is_empty() {
        v.flip(0);
    }
}

fn flip_perm(p: &mut Permutation) {
    if p.len() > 1 {
        let mut images = p.image().to_vec();
        images.swap(0, 1);
        *p = Permutation::from_image(images).unwrap();
    }
}

impl<P: Prover> Prover for Flip<P> {
    fn commit(&mut self, rng: &mut dyn RngCore) -> stern::Commitments {
        self.0.commit(rng)
    }

    fn respond(&mut self, b: u8) -> stern::Response {
        let mut r = self.0.respond(b);
        match &mut r {
            stern::Response::Zero { sigma, .. } => flip_perm(sigma),
            stern::Response::One { u_plus_s, .. } => flip(u_plus_s),
            stern::Response::Two { sigma_s, .. } => flip(sigma_s),
        }
        r
    }
}

impl<L: Leader> Leader for Flip<L> {
    fn commit(&mut self, rng: &mut dyn RngCore) -> MasterCommitments {
        self.0.commit(rng)
    }

    fn respond(&mut self, b: u8) -> AcgResponse {
        let mut r = self.0.respond(b);
        match &mut r {
            AcgResponse::Zero { z, .. } => flip(&mut z[0]),
            AcgResponse::One { x, .. } => flip(&mut x[0]),
            AcgResponse::Two { v, .. } => flip(&mut v[0]),
        }
        r
    }
}

/// Honest transcripts of `rounds` rounds, each answered for a random challenge.
fn record_stern(stmt: &Statement, secret: &BitVector, rounds: usize, rng: &mut SeededRng) -> Replay<stern::Commitments, stern::Response> {
    let mut honest = stern::HonestProver::new(stmt, secret);
    let recorded = (0..rounds)
        .map(|_| {
            let c = honest.commit(rng);
            (c, honest.respond(rng.gen_range(0..3)))
        })
        .collect();
    Replay { recorded, next: 0 }
}

enum Setup {
    Stern { stmt: Statement, secret: BitVector },
    Acg { ring: acg::AcgRing, l: usize, secrets: Vec<(usize, BitVector)> },
}

fn setup(cfg: &Config) -> Result<Setup> {
    let mut rng = split(cfg.seed, 0);
    let (n, k, t) = cfg.instance.code;
    Ok(match cfg.protocol {
        Protocol::Stern => {
            let kp = SternKeyPair::generate(n, k, t, &mut rng)?;
            Setup::Stern {
                stmt: kp.public,
                secret: kp.secret,
            }
        }
        Protocol::Ibs => {
            let (m, t) = cfg.instance.goppa;
            let kgc = NiederreiterKeyPair::generate(m, t, &mut rng)?;
            let (cred, _) = ibs::kgc_extract(&kgc.secret, b"harness-identity", cbsig::cfs::DEFAULT_ATTEMPT_BUDGET, &mut rng)?;
            // the cheater is measured against the same public statement
            Setup::Stern {
                stmt: cred.statement(&kgc.public)?,
                secret: cred.s,
            }
        }
        Protocol::Acg => {
            let (big_n, l) = cfg.instance.ring;
            let (ring, keys) = acg::keygen(n, k, t, big_n, &mut rng)?;
            Setup::Acg {
                ring,
                l,
                secrets: keys.into_iter().take(l).enumerate().map(|(i, key)| (i, key.s)).collect(),
            }
        }
    })
}

/// Plays `rounds` Stern rounds against `stmt`. Adversaries other than the
/// optimal cheater build on the honest prover and need `secret`.
pub fn play_stern(
    stmt: &Statement,
    secret: Option<&BitVector>,
    adversary: Adversary,
    rounds: usize,
    rng: &mut SeededRng,
) -> Result<Vec<(u8, bool)>> {
    let need = || cbsig::Error::ParameterInvalid(format!("{adversary:?} prover needs the secret"));
    let mut prover: Box<dyn Prover + '_> = match adversary {
        Adversary::OptimalCheater => Box::new(stern::Cheater::new(stmt)),
        Adversary::Honest => Box::new(stern::HonestProver::new(stmt, secret.ok_or_else(need)?)),
        Adversary::Replay => Box::new(record_stern(stmt, secret.ok_or_else(need)?, rounds, rng)),
        Adversary::BitFlipper => Box::new(Flip(stern::HonestProver::new(stmt, secret.ok_or_else(need)?))),
    };
    Ok((0..rounds)
        .map(|i| {
            let tr = stern::round(stmt, prover.as_mut(), i, rng);
            (tr.challenge, tr.accepted)
        })
        .collect())
}

fn acg_trial(
    cfg: &Config,
    ring: &acg::AcgRing,
    l: usize,
    secrets: &[(usize, BitVector)],
    rng: &mut SeededRng,
) -> Result<Vec<(u8, bool)>> {
    let signers: Vec<(usize, &BitVector)> = secrets.iter().map(|(i, s)| (*i, s)).collect();
    let mut leader: Box<dyn Leader + '_> = match cfg.adversary {
        Adversary::Honest => Box::new(acg::HonestLeader::new(ring, &signers)?),
        Adversary::OptimalCheater => Box::new(acg::Cheater::new(ring, l)),
        Adversary::Replay => {
            let mut honest = acg::HonestLeader::new(ring, &signers)?;
            let recorded = (0..cfg.rounds)
                .map(|_| {
                    let c = honest.commit(rng);
                    (c, honest.respond(rng.gen_range(0..3)))
                })
                .collect();
            Box::new(Replay { recorded, next: 0 })
        }
        Adversary::BitFlipper => Box::new(Flip(acg::HonestLeader::new(ring, &signers)?)),
    };
    Ok((0..cfg.rounds)
        .map(|i| {
            let tr = acg::round(ring, l, leader.as_mut(), i, rng);
            (tr.challenge, tr.accepted)
        })
        .collect())
}

/// Runs the configured experiment; `log` receives one JSON line per round.
pub fn run(cfg: &Config, log: Option<&mut dyn Write>) -> Result<Stats> {
    if cfg.rounds == 0 || cfg.trials == 0 {
        return Err(cbsig::Error::ParameterInvalid("rounds and trials must be positive".into()));
    }
    let setup = setup(cfg)?;
    let outcomes: Vec<Vec<(u8, bool)>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = split(cfg.seed, trial as u64 + 1);
            match &setup {
                Setup::Stern { stmt, secret } => play_stern(stmt, Some(secret), cfg.adversary, cfg.rounds, &mut rng),
                Setup::Acg { ring, l, secrets } => acg_trial(cfg, ring, *l, secrets, &mut rng),
            }
        })
        .collect::<Result<_>>()?;

    if let Some(out) = log {
        for (trial, rounds) in outcomes.iter().enumerate() {
            for (round, &(challenge, accepted)) in rounds.iter().enumerate() {
                let rec = RoundRecord {
                    trial,
                    round,
                    challenge,
                    accepted,
                };
                writeln!(out, "{}", serde_json::to_string(&rec).unwrap())
                    .map_err(|e| cbsig::Error::Failure(format!("writing log: {e}")))?;
            }
        }
    }

    let accepted_rounds = outcomes.iter().flatten().filter(|r| r.1).count() as u64;
    let full = outcomes.iter().filter(|t| t.iter().all(|r| r.1)).count() as u64;
    let p = cfg.adversary.expected_rate();
    Ok(Stats {
        protocol: cfg.protocol,
        adversary: cfg.adversary,
        rounds: cfg.rounds,
        trials: cfg.trials,
        seed: cfg.seed,
        per_round: Rate::new(accepted_rounds, (cfg.rounds * cfg.trials) as u64),
        full_protocol: Rate::new(full, cfg.trials as u64),
        expected_per_round: p,
        expected_full: p.powi(cfg.rounds as i32),
    })
}
