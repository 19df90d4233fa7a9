//! Closed-form key sizes, signature sizes and signing costs.
//!
//! All formulas are evaluated exactly over big rationals; floating point only
//! appears when a value is converted for display or compared against a
//! published approximation. Size units are binary: 1 kB = 2^10 bytes.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::algebra::{ball_size, binomial, cw_index_bits};
use crate::kks::{KksParams, PAPER_PARAMS};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParamTuple {
    pub m: u32,
    pub t: u64,
    /// Ring size `N`.
    pub ring: u64,
    /// Signers `l`.
    pub l: u64,
    /// Blinding dimension `L`.
    pub big_l: u64,
    pub r1: u64,
    pub r2: u64,
    /// Stern code length used by the ACG row.
    pub acg_n: u64,
}

pub const TABLE1: ParamTuple = ParamTuple {
    m: 15,
    t: 12,
    ring: 100,
    l: 50,
    big_l: 40,
    r1: 58,
    r2: 80,
    acg_n: 634,
};

impl ParamTuple {
    pub fn validate(&self) -> Result<()> {
        let mt = self.m as u64 * self.t;
        if self.m == 0 || self.m > 63 || self.t == 0 || self.ring == 0 || self.l == 0 {
            return Err(Error::param("m, t, N and l must be positive (m < 64)"));
        }
        if self.l > self.ring {
            return Err(Error::param("l exceeds N"));
        }
        if self.big_l == 0 || self.big_l >= mt || self.r1 == 0 || self.r2 == 0 || self.acg_n == 0 {
            return Err(Error::param("need 0 < L < mt and positive r1, r2, n"));
        }
        Ok(())
    }
}

fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

fn uint(v: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

fn log2_uint(x: &BigUint) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    (x >> shift).to_f64().unwrap().log2() + shift as f64
}

/// `log2` of a positive rational.
pub fn log2(x: &BigRational) -> f64 {
    assert!(x > &BigRational::zero(), "log2 of non-positive value");
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    log2_uint(num) - log2_uint(den)
}

fn to_f64(x: &BigRational) -> f64 {
    2f64.powf(log2(x))
}

/// DV signature size in bits:
/// `N (floor(log2 sum_{i<=t} C(2^m, i)) + 2mt) + ceil(log2 N) - (l-1) mt`.
pub fn quantity_a(m: u32, t: u64, ring: u64, l: u64) -> BigInt {
    let mt = BigInt::from(m as u64 * t);
    let index = BigInt::from(ball_size(1u64 << m, t).bits() - 1);
    let ring_bits = BigInt::from(64 - (ring.max(1) - 1).leading_zeros() as u64);
    BigInt::from(ring) * (index + 2 * &mt) + ring_bits - BigInt::from(l - 1) * mt
}

/// DV signing cost in binary operations:
/// `(N-l) t^2 m^2 / 2 + 2N(N-l) + l t! (3/2 + 6/m)`.
pub fn quantity_b(m: u32, t: u64, ring: u64, l: u64) -> BigRational {
    let (m, t) = (m as u64, t);
    let others = ring - l;
    let decode = int(others * t * t * m * m) / int(2);
    let poly = int(2 * ring * others);
    let tries = uint(factorial(t) * l) * (BigRational::new(3.into(), 2.into()) + BigRational::new(6.into(), m.into()));
    decode + poly + tries
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SizeUnit {
    KB,
    MB,
    GB,
}

impl SizeUnit {
    pub fn binary_bits(self) -> f64 {
        8.0 * match self {
            SizeUnit::KB => 1024f64,
            SizeUnit::MB => 1024f64.powi(2),
            SizeUnit::GB => 1024f64.powi(3),
        }
    }

    pub fn decimal_bits(self) -> f64 {
        8.0 * match self {
            SizeUnit::KB => 1e3,
            SizeUnit::MB => 1e6,
            SizeUnit::GB => 1e9,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SizeUnit::KB => "kB",
            SizeUnit::MB => "MB",
            SizeUnit::GB => "GB",
        }
    }
}

/// Published approximation of a cell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Approx {
    Size(f64, SizeUnit),
    Pow2(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub formula: &'static str,
    pub value: BigRational,
    pub published: Approx,
}

impl Cell {
    fn new(formula: &'static str, value: BigRational, published: Approx) -> Self {
        Cell {
            formula,
            value,
            published,
        }
    }

    pub fn log2(&self) -> f64 {
        log2(&self.value)
    }

    /// Exact integer value, if the formula produced one.
    pub fn integer(&self) -> Option<BigInt> {
        self.value.is_integer().then(|| self.value.to_integer())
    }

    /// Value on the published scale: size in the published unit (binary) or
    /// the base-2 exponent.
    pub fn reproduced(&self) -> f64 {
        match self.published {
            Approx::Size(_, unit) => to_f64(&self.value) / unit.binary_bits(),
            Approx::Pow2(_) => self.log2(),
        }
    }

    pub fn reproduced_decimal(&self) -> Option<f64> {
        match self.published {
            Approx::Size(_, unit) => Some(to_f64(&self.value) / unit.decimal_bits()),
            Approx::Pow2(_) => None,
        }
    }

    pub fn published_value(&self) -> f64 {
        match self.published {
            Approx::Size(v, _) | Approx::Pow2(v) => v,
        }
    }

    pub fn relative_error(&self) -> f64 {
        (self.reproduced() - self.published_value()).abs() / self.published_value()
    }

    pub fn within(&self, tolerance: f64) -> bool {
        self.relative_error() <= tolerance
    }

    pub fn display_reproduced(&self) -> String {
        match self.published {
            Approx::Size(_, unit) => format!("{:.3} {}", self.reproduced(), unit.name()),
            Approx::Pow2(_) => format!("2^{:.2}", self.reproduced()),
        }
    }

    pub fn display_published(&self) -> String {
        match self.published {
            Approx::Size(v, unit) => format!("{v} {}", unit.name()),
            Approx::Pow2(v) => format!("2^{v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CostReport {
    pub scheme: &'static str,
    pub pk_bits: Cell,
    pub sig_bits: Cell,
    pub sign_cost: Cell,
}

impl CostReport {
    pub fn cells(&self) -> [(&'static str, &Cell); 3] {
        [("pk", &self.pk_bits), ("sig", &self.sig_bits), ("cost", &self.sign_cost)]
    }
}

/// Rows PGGG, ZLC, ACG, DV and Overbeck.
pub fn table1(p: &ParamTuple) -> Result<Vec<CostReport>> {
    use Approx::{Pow2, Size};
    use SizeUnit::{GB, KB, MB};
    p.validate()?;
    let (m, t) = (p.m as u64, p.t);
    let q = 1u64 << m;
    let goppa_pk = int(q * t * m);
    let t_fact = uint(factorial(t));
    let tm2 = int(t * t * m * m);
    let n = p.acg_n;

    let pggg = CostReport {
        scheme: "PGGG",
        pk_bits: Cell::new("2^m t m", goppa_pk.clone(), Size(0.7, MB)),
        sig_bits: Cell::new("2^m r1", int(q * p.r1), Size(1.1, MB)),
        sign_cost: Cell::new(
            "t! t^2 m^2 (1/2 + 2 + 6/m)",
            &t_fact * &tm2 * (BigRational::new(5.into(), 2.into()) + BigRational::new(6.into(), m.into())),
            Pow2(45.0),
        ),
    };
    let zlc = CostReport {
        scheme: "ZLC",
        pk_bits: Cell::new("2^m t m", goppa_pk.clone(), Size(0.7, MB)),
        sig_bits: Cell::new(
            "t m + ceil(log2 C(2^m, t)) l",
            int(t * m + cw_index_bits(q, t) * p.l),
            Size(0.95, KB),
        ),
        sign_cost: Cell::new("t! t^2 m^2", &t_fact * &tm2, Pow2(43.8)),
    };
    let acg = CostReport {
        scheme: "ACG",
        pk_bits: Cell::new("n^2 N / 2", int(n * n * p.ring) / int(2), Size(2.41, MB)),
        sig_bits: Cell::new("20000 N", int(20_000 * p.ring), Size(0.24, MB)),
        sign_cost: Cell::new("140 n^2 N", int(140 * n * n * p.ring), Pow2(32.3)),
    };
    let dv = CostReport {
        scheme: "DV",
        pk_bits: Cell::new("2^m t m N", goppa_pk.clone() * int(p.ring), Size(70.0, MB)),
        sig_bits: Cell::new("A(m,t,N,l)", int(quantity_a(p.m, t, p.ring, p.l)), Size(5.2, KB)),
        sign_cost: Cell::new("B(m,t,N,l)", quantity_b(p.m, t, p.ring, p.l), Pow2(35.4)),
    };
    let overbeck = CostReport {
        scheme: "Overbeck",
        pk_bits: Cell::new("2^m t m", goppa_pk, Size(0.7, MB)),
        sig_bits: Cell::new("(2^m - t m + L) 2^m r2", int((q - t * m + p.big_l) * q * p.r2), Size(9.95, GB)),
        sign_cost: Cell::new(
            "2^(mt) / C(2^m, t) (m^3 t^2 + m^3 t^3)",
            blind_attempts(p.m, t) * int(m * m * m * t * t * (1 + t)),
            Pow2(190.0),
        ),
    };
    Ok(vec![pggg, zlc, acg, dv, overbeck])
}

/// `2^(mt) / C(2^m, t)`, exact.
pub fn blind_attempts(m: u32, t: u64) -> BigRational {
    BigRational::new(BigInt::one() << (m as u64 * t), BigInt::from(binomial(1u64 << m, t)))
}

/// ACG signature size read as 20 kB per ring member instead of 20000 bits.
pub fn acg_signature_bits_kb_reading(ring: u64) -> u64 {
    20 * 8192 * ring
}

#[derive(Clone, Debug, PartialEq)]
pub struct DvExtras {
    /// `2(N+1)(N-l) + N t^2 m^2 / 2`.
    pub verify_cost: BigRational,
    /// Per decoding: syndrome `t^2 m^2 / 2`, locator `6 t^2 m`, roots `2 t^2 m^2`.
    pub syndrome: u64,
    pub locator: u64,
    pub roots: u64,
}

pub fn dv_extras(p: &ParamTuple) -> DvExtras {
    let (m, t, ring, l) = (p.m as u64, p.t, p.ring, p.l);
    DvExtras {
        verify_cost: int(2 * (ring + 1) * (ring - l)) + int(ring * t * t * m * m) / int(2),
        syndrome: t * t * m * m / 2,
        locator: 6 * t * t * m,
        roots: 2 * t * t * m * m,
    }
}

/// Fiat-Shamir Stern signature size in bits with seeded commitments:
/// each round carries one hash and, averaged over the three challenges, a
/// seed, a seed plus an `n`-bit word, or two `n`-bit words.
pub fn stern_signature_bits(n: u64, rounds: u64, hash_bits: u64, seed_bits: u64) -> BigRational {
    let response = int(seed_bits + (n + seed_bits) + 2 * n) / int(3);
    (int(hash_bits) + response) * int(rounds)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Advice {
    /// `(m, t)` choices for CFS at about 80 bits.
    Cfs(Vec<(u32, usize)>),
    Kks(KksParams),
    /// Double-circulant Stern code.
    SternDc { n: usize, t: usize, security_bits: u32 },
}

/// Published parameter sets; never extrapolates.
pub fn advise(scheme: &str) -> Result<Advice> {
    match scheme.to_ascii_lowercase().as_str() {
        "cfs" | "mcfs" => Ok(Advice::Cfs(crate::cfs::PAPER_PARAMETERS.to_vec())),
        "kks" => Ok(Advice::Kks(PAPER_PARAMS)),
        "stern-dc" | "stern" => Ok(Advice::SternDc {
            n: 347,
            t: 76,
            security_bits: 83,
        }),
        other => Err(Error::UnknownScheme(other.to_string())),
    }
}
