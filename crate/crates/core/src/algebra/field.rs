use crate::{Error, Result};

/// Arithmetic on GF(2)[x] polynomials packed into machine words
/// (bit `i` is the coefficient of `x^i`).
pub mod gf2x {
    pub fn degree(p: u128) -> i32 {
        127 - p.leading_zeros() as i32
    }

    pub fn clmul(a: u64, b: u64) -> u128 {
        let mut acc = 0u128;
        let a = a as u128;
        let mut b = b;
        let mut shift = 0;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a << shift;
            }
            b >>= 1;
            shift += 1;
        }
        acc
    }

    pub fn rem(mut a: u128, m: u128) -> u128 {
        let dm = degree(m);
        assert!(dm >= 0, "division by zero polynomial");
        loop {
            let da = degree(a);
            if da < dm {
                return a;
            }
            a ^= m << (da - dm);
        }
    }

    pub fn gcd(mut a: u128, mut b: u128) -> u128 {
        while b != 0 {
            let r = rem(a, b);
            a = b;
            b = r;
        }
        a
    }

    pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
        rem(clmul(a, b), m as u128) as u64
    }

    /// `x^(2^k) mod m`.
    fn x_pow_2k(k: u32, m: u64) -> u64 {
        let mut r = rem(2, m as u128) as u64;
        for _ in 0..k {
            r = mulmod(r, r, m);
        }
        r
    }

    fn prime_factors(mut n: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                out.push(p);
                while n % p == 0 {
                    n /= p;
                }
            }
            p += 1;
        }
        if n > 1 {
            out.push(n);
        }
        out
    }

    /// Rabin's test: `f` of degree `d` is irreducible iff `x^(2^d) = x mod f`
    /// and `gcd(x^(2^(d/p)) - x, f) = 1` for every prime `p | d`.
    pub fn is_irreducible(f: u64) -> bool {
        let d = degree(f as u128);
        if d < 1 {
            return false;
        }
        let d = d as u32;
        if x_pow_2k(d, f) != rem(2, f as u128) as u64 {
            return false;
        }
        prime_factors(d as u64).into_iter().all(|p| {
            let h = x_pow_2k(d / p as u32, f) ^ 2;
            degree(gcd(f as u128, rem(h as u128, f as u128))) == 0
        })
    }

    /// Trial division by every polynomial of degree `1..=deg/2`.
    pub fn is_irreducible_exhaustive(f: u64) -> bool {
        let d = degree(f as u128);
        if d < 1 {
            return false;
        }
        for dd in 1..=(d / 2) {
            for q in (1u64 << dd)..(1u64 << (dd + 1)) {
                if rem(f as u128, q as u128) == 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Smallest (as an integer) irreducible polynomial of degree `m`.
    pub fn lowest_irreducible(m: u32) -> u64 {
        ((1u64 << m) + 1..)
            .step_by(2)
            .find(|&p| is_irreducible(p))
            .expect("irreducible polynomials exist in every degree")
    }

    pub(super) fn multiplicative_order_is_full(g: u64, m: u64, q_minus_1: u64) -> bool {
        prime_factors(q_minus_1)
            .into_iter()
            .all(|p| powmod(g, q_minus_1 / p, m) != 1)
    }

    pub fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a, m);
            }
            a = mulmod(a, a, m);
            e >>= 1;
        }
        r
    }
}

/// Largest degree for which log/antilog tables are built.
const TABLE_MAX_DEGREE: u32 = 20;

/// The field GF(2^m) = GF(2)[x] / (modulus). Elements are `u64` bitmasks
/// below `2^m`.
#[derive(Clone)]
pub struct Gf2mField {
    m: u32,
    modulus: u64,
    tables: Option<Tables>,
}

#[derive(Clone)]
struct Tables {
    // exp has 2(q-1) entries so log a + log b never needs reducing.
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl std::fmt::Debug for Gf2mField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF(2^{}) mod {:#x}", self.m, self.modulus)
    }
}

impl PartialEq for Gf2mField {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for Gf2mField {}

impl Gf2mField {
    /// GF(2^m) with the lowest irreducible modulus of degree `m`.
    pub fn new(m: u32) -> Result<Self> {
        if !(1..=63).contains(&m) {
            return Err(Error::param(format!("field degree {m} outside 1..=63")));
        }
        Self::with_modulus(m, gf2x::lowest_irreducible(m))
    }

    pub fn with_modulus(m: u32, modulus: u64) -> Result<Self> {
        if !(1..=63).contains(&m) || gf2x::degree(modulus as u128) != m as i32 {
            return Err(Error::param("modulus degree does not match m"));
        }
        let irreducible = if m <= TABLE_MAX_DEGREE {
            gf2x::is_irreducible_exhaustive(modulus)
        } else {
            gf2x::is_irreducible(modulus)
        };
        if !irreducible {
            return Err(Error::param(format!("modulus {modulus:#x} is reducible")));
        }
        let tables = (m <= TABLE_MAX_DEGREE).then(|| Self::build_tables(m, modulus));
        Ok(Gf2mField { m, modulus, tables })
    }

    fn build_tables(m: u32, modulus: u64) -> Tables {
        let q = 1u64 << m;
        let order = q - 1;
        let generator = if order == 1 {
            1
        } else {
            (2..q)
                .find(|&g| gf2x::multiplicative_order_is_full(g, modulus, order))
                .expect("multiplicative group is cyclic")
        };
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut a = 1u64;
        for i in 0..order as usize {
            exp[i] = a as u32;
            exp[i + order as usize] = a as u32;
            log[a as usize] = i as u32;
            a = gf2x::mulmod(a, generator, modulus);
        }
        Tables { exp, log }
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        1u64 << self.m
    }

    pub fn contains(&self, a: u64) -> bool {
        a < self.order()
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(self.contains(a) && self.contains(b));
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize] as u64,
            None => gf2x::mulmod(a, b, self.modulus),
        }
    }

    pub fn square(&self, a: u64) -> u64 {
        self.mul(a, a)
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        Some(match &self.tables {
            Some(t) => {
                let order = (self.order() - 1) as u32;
                t.exp[((order - t.log[a as usize]) % order) as usize] as u64
            }
            None => self.pow(a, self.order() - 2),
        })
    }

    pub fn div(&self, a: u64, b: u64) -> Option<u64> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// Square root; every element of a binary field has exactly one.
    pub fn sqrt(&self, a: u64) -> u64 {
        let mut r = a;
        for _ in 0..self.m - 1 {
            r = self.square(r);
        }
        r
    }
}
