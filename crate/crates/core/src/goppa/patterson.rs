//! Patterson decoding of binary Goppa codes with an irreducible `g`.
//!
//! 1. `S(x)` from the syndrome bits, `T = S^-1 mod g`.
//! 2. `tau = sqrt(T + x) mod g`.
//! 3. Half extended Euclid on `(g, tau)` gives `a = b * tau mod g` with
//!    `deg a <= t/2`, `deg b <= (t-1)/2`.
//! 4. `sigma = a^2 + x b^2` is the error locator; its roots among the
//!    support are the error positions.

use super::GoppaCode;
use crate::algebra::{BitVector, Poly};

pub(super) fn decode(code: &GoppaCode, s: &BitVector) -> Option<BitVector> {
    let n = code.n();
    if s.is_zero() {
        return Some(BitVector::zeros(n));
    }
    let f = &code.field;
    let g = &code.g;
    let t = code.t();
    let m = f.degree() as usize;

    let syn = Poly::from_coeffs(
        (0..t)
            .map(|j| (0..m).filter(|&b| s.get(j * m + b)).fold(0u64, |acc, b| acc | 1 << b))
            .collect(),
    );
    let inv = syn.inv_mod(f, g)?;
    let tau = sqrt_mod(code, &inv.add(&Poly::x()).rem(f, g));

    let (mut r0, mut r1) = (g.clone(), tau);
    let (mut u0, mut u1) = (Poly::zero(), Poly::one());
    while r1.degree().is_some_and(|d| d > t / 2) {
        let (q, r) = r0.div_rem(f, &r1);
        let u2 = u0.add(&q.mul(f, &u1));
        r0 = r1;
        r1 = r;
        u0 = u1;
        u1 = u2;
    }
    let (a, b) = (r1, u1);
    let sigma = a.mul(f, &a).add(&Poly::x().mul(f, &b.mul(f, &b)));
    let deg = sigma.degree()?;
    if deg > t {
        return None;
    }

    let mut e = BitVector::zeros(n);
    let mut roots = 0;
    for (i, &l) in code.support.iter().enumerate() {
        if sigma.eval(f, l) == 0 {
            e.set(i, true);
            roots += 1;
        }
    }
    if roots != deg || code.syndrome(&e) != *s {
        return None;
    }
    Some(e)
}

/// Square root in GF(2^m)[x]/g via the even/odd split
/// `p = p_e(x)^2 + x p_o(x)^2`, so `sqrt(p) = p_e + sqrt(x) p_o`.
fn sqrt_mod(code: &GoppaCode, p: &Poly) -> Poly {
    let f = &code.field;
    let c = p.coeffs();
    let even = Poly::from_coeffs(c.iter().step_by(2).map(|&a| f.sqrt(a)).collect());
    let odd = Poly::from_coeffs(c.iter().skip(1).step_by(2).map(|&a| f.sqrt(a)).collect());
    even.add(&code.sqrt_x.mulmod(f, &odd, &code.g)).rem(f, &code.g)
}
