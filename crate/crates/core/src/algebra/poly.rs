use super::Gf2mField;

/// Polynomial over GF(2^m), coefficients lowest degree first, no trailing
/// zeros. The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1] }
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly { coeffs: vec![0, 1] }
    }

    pub fn constant(c: u64) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.coeff(i) ^ other.coeff(i)).collect())
    }

    pub fn scale(&self, f: &Gf2mField, c: u64) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, f: &Gf2mField, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] ^= f.mul(a, b);
            }
        }
        Poly::from_coeffs(out)
    }

    /// Quotient and remainder of `self / divisor`.
    pub fn div_rem(&self, f: &Gf2mField, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead_inv = f.inv(divisor.leading()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let q = f.mul(c, lead_inv);
            quot[i - dd] = q;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] ^= f.mul(q, d);
            }
        }
        rem.truncate(dd);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    pub fn rem(&self, f: &Gf2mField, modulus: &Poly) -> Poly {
        self.div_rem(f, modulus).1
    }

    /// Horner evaluation.
    pub fn eval(&self, f: &Gf2mField, x: u64) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| f.mul(acc, x) ^ c)
    }

    pub fn monic(&self, f: &Gf2mField) -> Poly {
        match f.inv(self.leading()) {
            Some(inv) => self.scale(f, inv),
            None => Poly::zero(),
        }
    }

    pub fn gcd(&self, f: &Gf2mField, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn mulmod(&self, f: &Gf2mField, other: &Poly, modulus: &Poly) -> Poly {
        self.mul(f, other).rem(f, modulus)
    }

    /// Inverse modulo `modulus` by the extended Euclidean algorithm.
    pub fn inv_mod(&self, f: &Gf2mField, modulus: &Poly) -> Option<Poly> {
        let (mut r0, mut r1) = (modulus.clone(), self.rem(f, modulus));
        let (mut u0, mut u1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(f, &r1);
            let u2 = u0.add(&q.mul(f, &u1));
            r0 = r1;
            r1 = r;
            u0 = u1;
            u1 = u2;
        }
        // r0 is the gcd; invertible iff it is a nonzero constant.
        if r0.degree() != Some(0) {
            return None;
        }
        let c = f.inv(r0.leading())?;
        Some(u0.scale(f, c).rem(f, modulus))
    }

    /// Lagrange interpolation through `(x_j, y_j)` with distinct `x_j`.
    pub fn interpolate(f: &Gf2mField, points: &[(u64, u64)]) -> Poly {
        let mut acc = Poly::zero();
        for (j, &(xj, yj)) in points.iter().enumerate() {
            let mut basis = Poly::one();
            let mut denom = 1u64;
            for (k, &(xk, _)) in points.iter().enumerate() {
                if k == j {
                    continue;
                }
                basis = basis.mul(f, &Poly::from_coeffs(vec![xk, 1]));
                denom = f.mul(denom, xj ^ xk);
            }
            let scale = f.div(yj, denom).expect("interpolation nodes must be distinct");
            acc = acc.add(&basis.scale(f, scale));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::from_seed;
    use rand::Rng;

    fn random_poly(f: &Gf2mField, deg: usize, rng: &mut impl Rng) -> Poly {
        Poly::from_coeffs((0..=deg).map(|_| rng.gen_range(0..f.order())).collect())
    }

    #[test]
    fn division_identity() {
        let f = Gf2mField::new(5).unwrap();
        let mut rng = from_seed(1);
        for _ in 0..200 {
            let a = random_poly(&f, rng.gen_range(0..10), &mut rng);
            let mut b = random_poly(&f, rng.gen_range(0..6), &mut rng);
            if b.is_zero() {
                b = Poly::one();
            }
            let (q, r) = a.div_rem(&f, &b);
            assert_eq!(q.mul(&f, &b).add(&r), a);
            assert!(r.degree().map_or(true, |d| d < b.degree().unwrap()));
        }
    }

    #[test]
    fn inverse_mod_irreducible() {
        let f = Gf2mField::new(4).unwrap();
        // x^2 + x + w where w generates: find an irreducible quadratic by root search.
        let g = (1..16u64)
            .map(|c| Poly::from_coeffs(vec![c, 1, 1]))
            .find(|g| (0..16).all(|x| g.eval(&f, x) != 0))
            .unwrap();
        let mut rng = from_seed(2);
        for _ in 0..50 {
            let a = random_poly(&f, 1, &mut rng);
            if a.is_zero() {
                assert!(a.inv_mod(&f, &g).is_none());
                continue;
            }
            let ai = a.inv_mod(&f, &g).unwrap();
            assert_eq!(a.mulmod(&f, &ai, &g), Poly::one());
        }
    }

    #[test]
    fn interpolation_hits_every_node() {
        let f = Gf2mField::new(10).unwrap();
        let mut rng = from_seed(3);
        for npts in 1..8 {
            let pts: Vec<(u64, u64)> = (0..npts)
                .map(|i| (i as u64, rng.gen_range(0..f.order())))
                .collect();
            let p = Poly::interpolate(&f, &pts);
            assert!(p.degree().map_or(true, |d| d < npts));
            for &(x, y) in &pts {
                assert_eq!(p.eval(&f, x), y);
            }
        }
    }
}
