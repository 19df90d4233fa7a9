//! `--params` handling: named presets or `key=value` lists.

use std::collections::BTreeMap;

use cbsig::costmodel::{ParamTuple, TABLE1};
use cbsig::kks::{KksParams, PAPER_PARAMS};

use crate::envelope::SchemeId;
use crate::CliError;

const KEYS: &[&str] = &[
    "m", "t", "n", "k", "N", "l", "L", "p", "r1", "r2", "t1", "t2", "r", "nprime", "rounds",
];

/// Parsed `--params` value: an optional preset overlaid with explicit keys.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Params {
    pub preset: Option<String>,
    values: BTreeMap<String, u64>,
}

impl Params {
    /// `desk`, `paper`, `table1`, or `key=value,...`, optionally mixed as
    /// `paper,t=10`.
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let mut out = Params::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part.split_once('=') {
                None => {
                    if !matches!(part, "desk" | "paper" | "table1") {
                        return Err(CliError::Usage(format!("unknown preset '{part}'")));
                    }
                    if out.preset.replace(part.to_string()).is_some() {
                        return Err(CliError::Usage("more than one preset".into()));
                    }
                }
                Some((k, v)) => {
                    if !KEYS.contains(&k) {
                        return Err(CliError::Usage(format!("unknown parameter '{k}' (known: {})", KEYS.join(" "))));
                    }
                    let v: u64 = v
                        .parse()
                        .map_err(|_| CliError::Usage(format!("parameter {k}: '{v}' is not an integer")))?;
                    out.values.insert(k.to_string(), v);
                }
            }
        }
        Ok(out)
    }

    fn paper(&self) -> bool {
        matches!(self.preset.as_deref(), Some("paper" | "table1"))
    }

    fn get(&self, key: &str, desk: u64, paper: u64) -> u64 {
        self.values
            .get(key)
            .copied()
            .unwrap_or(if self.paper() { paper } else { desk })
    }

    fn usize(&self, key: &str, desk: usize, paper: usize) -> usize {
        self.get(key, desk as u64, paper as u64) as usize
    }

    /// `(m, t)` for Goppa-based schemes.
    pub fn goppa(&self, scheme: SchemeId) -> (u32, usize) {
        let desk_m = match scheme {
            SchemeId::Zlc | SchemeId::Dv | SchemeId::Blind => 5,
            _ => 6,
        };
        (self.get("m", desk_m, 15) as u32, self.usize("t", 2, 12))
    }

    /// `(n, k, t)` for Stern and ACG member codes.
    pub fn stern(&self, scheme: SchemeId) -> (usize, usize, usize) {
        let (n, k, t) = if scheme == SchemeId::Acg { (24, 12, 3) } else { (64, 32, 7) };
        (self.usize("n", n, 634), self.usize("k", k, 317), self.usize("t", t, 69))
    }

    pub fn kks(&self) -> KksParams {
        let desk = KksParams {
            n: 48,
            r: 24,
            n_prime: 24,
            k: 4,
            t1: 8,
            t2: 16,
        };
        let p = PAPER_PARAMS;
        KksParams {
            n: self.usize("n", desk.n, p.n),
            r: self.usize("r", desk.r, p.r),
            n_prime: self.usize("nprime", desk.n_prime, p.n_prime),
            k: self.usize("k", desk.k, p.k),
            t1: self.usize("t1", desk.t1, p.t1),
            t2: self.usize("t2", desk.t2, p.t2),
        }
    }

    /// `(p, L)`: rows of `R_0` and rank of the blinding.
    pub fn blinding(&self) -> (usize, usize) {
        (self.usize("p", 4, 40), self.usize("L", 2, 40))
    }

    /// Fiat-Shamir rounds; 137 gives `(2/3)^r <= 2^-80`.
    pub fn rounds(&self) -> usize {
        self.usize("rounds", 137, 137)
    }

    /// Threshold/ring sizes for the harness.
    pub fn ring(&self) -> (usize, usize) {
        (self.usize("N", 3, 100), self.usize("l", 1, 50))
    }

    pub fn tuple(&self) -> ParamTuple {
        let d = TABLE1;
        ParamTuple {
            m: self.get("m", d.m as u64, d.m as u64) as u32,
            t: self.get("t", d.t, d.t),
            ring: self.get("N", d.ring, d.ring),
            l: self.get("l", d.l, d.l),
            big_l: self.get("L", d.big_l, d.big_l),
            r1: self.get("r1", d.r1, d.r1),
            r2: self.get("r2", d.r2, d.r2),
            acg_n: self.get("n", d.acg_n, d.acg_n),
        }
    }
}
