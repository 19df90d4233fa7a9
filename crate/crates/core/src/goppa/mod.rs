//! Binary Goppa codes and the Niederreiter trapdoor.
//!
//! The parity-check matrix uses the polynomial syndrome form: column `i` is
//! the coefficient vector of `1 / (x - L_i) mod g`, coefficient `j` occupying
//! bits `j*m .. j*m + m` (LSB first). With this layout a binary syndrome is
//! read directly as the syndrome polynomial `S(x) = sum e_i / (x - L_i)`.

mod niederreiter;
mod patterson;

pub use niederreiter::{NiederreiterKeyPair, NiederreiterPublicKey, NiederreiterSecretKey};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{BitMatrix, BitVector, Gf2mField, Poly};
use crate::codec::{Decode, Encode, Reader, Writer};
use crate::{Error, Result};

pub const MIN_M: u32 = 2;
pub const MAX_M: u32 = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoppaCode {
    field: Gf2mField,
    g: Poly,
    support: Vec<u64>,
    h: BitMatrix,
    sqrt_x: Poly,
}

/// Checks `(m, t)` and returns the code length.
///
/// The support is all of GF(2^m), except for `t = 1` where `g` has a root in
/// the field that must be left out (so `n = 2^m - 1`).
pub fn code_length(m: u32, t: usize) -> Result<usize> {
    if !(MIN_M..=MAX_M).contains(&m) {
        return Err(Error::param(format!("m = {m} outside {MIN_M}..={MAX_M}")));
    }
    if t == 0 {
        return Err(Error::param("t must be at least 1"));
    }
    let n = if t == 1 { (1usize << m) - 1 } else { 1usize << m };
    if m as usize * t >= n {
        return Err(Error::param(format!(
            "mt = {} leaves no room for a code of length {n}",
            m as usize * t
        )));
    }
    Ok(n)
}

impl GoppaCode {
    /// Random code: monic irreducible `g` of degree `t` and a shuffled
    /// full support. Re-samples `g` until the parity-check matrix has full
    /// rank `mt`.
    pub fn generate<R: Rng + ?Sized>(m: u32, t: usize, rng: &mut R) -> Result<Self> {
        code_length(m, t)?;
        let field = Gf2mField::new(m)?;
        loop {
            let g = random_irreducible(&field, t, rng);
            let mut support: Vec<u64> = (0..field.order()).filter(|&a| g.eval(&field, a) != 0).collect();
            support.shuffle(rng);
            let code = Self::from_parts(field.clone(), g, support)?;
            if code.h.rank() == m as usize * t {
                return Ok(code);
            }
        }
    }

    /// Rebuilds a code from its Goppa polynomial and support.
    pub fn from_parts(field: Gf2mField, g: Poly, support: Vec<u64>) -> Result<Self> {
        let t = g.degree().ok_or_else(|| Error::param("zero Goppa polynomial"))?;
        let m = field.degree();
        let n = code_length(m, t)?;
        if g.leading() != 1 {
            return Err(Error::param("Goppa polynomial must be monic"));
        }
        if !is_irreducible_over(&field, &g) {
            return Err(Error::param("Goppa polynomial is reducible"));
        }
        if support.len() != n {
            return Err(Error::param(format!("support has {} points, expected {n}", support.len())));
        }
        let mut seen = vec![false; field.order() as usize];
        for &a in &support {
            if !field.contains(a) || std::mem::replace(&mut seen[a as usize], true) {
                return Err(Error::param("support points must be distinct field elements"));
            }
        }

        let mt = m as usize * t;
        let columns: Vec<BitVector> = support
            .iter()
            .map(|&a| {
                let ga_inv = field.inv(g.eval(&field, a)).expect("support avoids roots of g");
                // (g(x) - g(a)) / (x - a) by synthetic division
                let mut q = vec![0u64; t];
                let mut carry = 0u64;
                for j in (1..=t).rev() {
                    carry = g.coeff(j) ^ field.mul(a, carry);
                    q[j - 1] = carry;
                }
                let mut col = BitVector::zeros(mt);
                for (j, &c) in q.iter().enumerate() {
                    let c = field.mul(c, ga_inv);
                    for b in 0..m as usize {
                        if (c >> b) & 1 == 1 {
                            col.set(j * m as usize + b, true);
                        }
                    }
                }
                col
            })
            .collect();
        let h = BitMatrix::from_columns(mt, &columns);

        // sqrt(x) = x^(2^(mt-1)) mod g
        let mut sqrt_x = Poly::x().rem(&field, &g);
        for _ in 0..mt - 1 {
            sqrt_x = sqrt_x.mulmod(&field, &sqrt_x, &g);
        }
        Ok(GoppaCode {
            field,
            g,
            support,
            h,
            sqrt_x,
        })
    }

    pub fn field(&self) -> &Gf2mField {
        &self.field
    }

    pub fn goppa_polynomial(&self) -> &Poly {
        &self.g
    }

    pub fn support(&self) -> &[u64] {
        &self.support
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.h
    }

    pub fn m(&self) -> u32 {
        self.field.degree()
    }

    pub fn t(&self) -> usize {
        self.g.degree().unwrap_or(0)
    }

    pub fn n(&self) -> usize {
        self.support.len()
    }

    pub fn k(&self) -> usize {
        self.n() - self.syndrome_len()
    }

    pub fn syndrome_len(&self) -> usize {
        self.m() as usize * self.t()
    }

    pub fn syndrome(&self, e: &BitVector) -> BitVector {
        self.h.mul_vec(e)
    }

    /// Generator matrix as a basis of the null space of the parity check.
    pub fn generator(&self) -> BitMatrix {
        self.h.null_space()
    }

    /// The unique `e` with `wt(e) <= t` and `H e^T = s`, if any.
    pub fn decode(&self, s: &BitVector) -> Result<BitVector> {
        if s.len() != self.syndrome_len() {
            return Err(Error::DimensionMismatch {
                expected: self.syndrome_len(),
                actual: s.len(),
            });
        }
        patterson::decode(self, s).ok_or(Error::Undecodable)
    }
}

impl Encode for GoppaCode {
    fn encode(&self, w: &mut Writer) {
        w.u32(self.m()).poly(&self.g).len(self.support.len());
        for &a in &self.support {
            w.u16(a as u16);
        }
    }
}

impl Decode for GoppaCode {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        let m = r.u32()?;
        if !(MIN_M..=MAX_M).contains(&m) {
            return Err(Error::malformed(format!("field degree {m}")));
        }
        let g = r.poly()?;
        let n = r.len()?;
        if n > 1 << m {
            return Err(Error::malformed("support longer than the field"));
        }
        let support = (0..n).map(|_| r.u16().map(u64::from)).collect::<Result<Vec<_>>>()?;
        GoppaCode::from_parts(Gf2mField::new(m)?, g, support).map_err(|e| Error::malformed(e.to_string()))
    }
}

/// Rabin-style test over GF(q): `g` of degree `t` is irreducible iff
/// `x^(q^t) = x mod g` and `gcd(x^(q^(t/p)) - x, g) = 1` for primes `p | t`.
pub fn is_irreducible_over(field: &Gf2mField, g: &Poly) -> bool {
    let Some(t) = g.degree() else { return false };
    if t == 0 {
        return false;
    }
    if t == 1 {
        return true;
    }
    let frobenius = |p: &Poly| {
        let mut r = p.clone();
        for _ in 0..field.degree() {
            r = r.mulmod(field, &r, g);
        }
        r
    };
    let x = Poly::x().rem(field, g);
    let mut powers = vec![x.clone()];
    for i in 0..t {
        let next = frobenius(&powers[i]);
        powers.push(next);
    }
    if powers[t] != x {
        return false;
    }
    let mut d = t;
    let mut primes = Vec::new();
    let mut p = 2;
    while p * p <= d {
        if d % p == 0 {
            primes.push(p);
            while d % p == 0 {
                d /= p;
            }
        }
        p += 1;
    }
    if d > 1 {
        primes.push(d);
    }
    primes.into_iter().all(|p| {
        let h = powers[t / p].add(&x);
        h.gcd(field, g).degree() == Some(0)
    })
}

fn random_irreducible<R: Rng + ?Sized>(field: &Gf2mField, t: usize, rng: &mut R) -> Poly {
    loop {
        let mut c: Vec<u64> = (0..t).map(|_| rng.gen_range(0..field.order())).collect();
        c.push(1);
        let g = Poly::from_coeffs(c);
        if is_irreducible_over(field, &g) {
            return g;
        }
    }
}
