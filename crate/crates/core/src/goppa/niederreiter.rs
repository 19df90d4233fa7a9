//! Niederreiter trapdoor: `H = Q * H_goppa * P`.

use rand::Rng;

use super::GoppaCode;
use crate::algebra::{random_invertible, random_permutation, BitMatrix, BitVector, Permutation};
use crate::codec::{Decode, Encode, Reader, Writer};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiederreiterPublicKey {
    m: u32,
    t: usize,
    h: BitMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiederreiterSecretKey {
    code: GoppaCode,
    q: BitMatrix,
    q_inv: BitMatrix,
    perm: Permutation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiederreiterKeyPair {
    pub public: NiederreiterPublicKey,
    pub secret: NiederreiterSecretKey,
}

impl NiederreiterKeyPair {
    pub fn generate<R: Rng + ?Sized>(m: u32, t: usize, rng: &mut R) -> Result<Self> {
        let code = GoppaCode::generate(m, t, rng)?;
        let q = random_invertible(code.syndrome_len(), rng);
        let perm = random_permutation(code.n(), rng);
        let secret = NiederreiterSecretKey::from_parts(code, q, perm)?;
        let public = secret.public_key();
        Ok(NiederreiterKeyPair { public, secret })
    }
}

impl NiederreiterPublicKey {
    pub fn new(m: u32, t: usize, h: BitMatrix) -> Result<Self> {
        let n = super::code_length(m, t)?;
        if h.rows() != m as usize * t || h.cols() != n {
            return Err(Error::param(format!(
                "public matrix is {}x{}, expected {}x{n}",
                h.rows(),
                h.cols(),
                m as usize * t
            )));
        }
        Ok(NiederreiterPublicKey { m, t, h })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn n(&self) -> usize {
        self.h.cols()
    }

    pub fn k(&self) -> usize {
        self.h.cols() - self.h.rows()
    }

    pub fn syndrome_len(&self) -> usize {
        self.h.rows()
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.h
    }

    /// `H x^T`. Any input length mismatch is an error; the weight is not checked.
    pub fn syndrome(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                actual: x.len(),
            });
        }
        Ok(self.h.mul_vec(x))
    }

    /// Encrypts a plaintext of weight exactly `t`.
    pub fn encrypt(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() == self.n() && x.weight() != self.t {
            return Err(Error::WeightInvalid {
                expected: self.t,
                actual: x.weight(),
            });
        }
        self.syndrome(x)
    }
}

impl NiederreiterSecretKey {
    pub fn from_parts(code: GoppaCode, q: BitMatrix, perm: Permutation) -> Result<Self> {
        if q.rows() != code.syndrome_len() || q.cols() != code.syndrome_len() {
            return Err(Error::param("scrambler has wrong dimensions"));
        }
        if perm.len() != code.n() {
            return Err(Error::param("permutation has wrong length"));
        }
        let q_inv = q.inverse().ok_or_else(|| Error::param("scrambler is singular"))?;
        Ok(NiederreiterSecretKey { code, q, q_inv, perm })
    }

    pub fn code(&self) -> &GoppaCode {
        &self.code
    }

    pub fn scrambler(&self) -> &BitMatrix {
        &self.q
    }

    pub fn permutation(&self) -> &Permutation {
        &self.perm
    }

    pub fn public_key(&self) -> NiederreiterPublicKey {
        let h = self.q.mul(self.code.parity_check()).mul_permutation(&self.perm);
        NiederreiterPublicKey {
            m: self.code.m(),
            t: self.code.t(),
            h,
        }
    }

    /// Finds `x` with `wt(x) <= t` and `H x^T = y`, or `Undecodable`.
    pub fn invert(&self, y: &BitVector) -> Result<BitVector> {
        if y.len() != self.code.syndrome_len() {
            return Err(Error::DimensionMismatch {
                expected: self.code.syndrome_len(),
                actual: y.len(),
            });
        }
        let e = self.code.decode(&self.q_inv.mul_vec(y))?;
        Ok(self.perm.apply_inverse(&e))
    }

    pub fn decrypt(&self, y: &BitVector) -> Result<BitVector> {
        self.invert(y)
    }
}

impl Encode for NiederreiterPublicKey {
    fn encode(&self, w: &mut Writer) {
        w.u32(self.m).len(self.t).matrix(&self.h);
    }
}

impl Decode for NiederreiterPublicKey {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        let m = r.u32()?;
        let t = r.len()?;
        let h = r.matrix()?;
        Self::new(m, t, h).map_err(|e| Error::malformed(e.to_string()))
    }
}

impl Encode for NiederreiterSecretKey {
    fn encode(&self, w: &mut Writer) {
        w.put(&self.code).matrix(&self.q).perm(&self.perm);
    }
}

impl Decode for NiederreiterSecretKey {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        let code = r.get()?;
        let q = r.matrix()?;
        let perm = r.perm()?;
        Self::from_parts(code, q, perm).map_err(|e| Error::malformed(e.to_string()))
    }
}

/// Only the secret half is stored; the public matrix is recomputed.
impl Encode for NiederreiterKeyPair {
    fn encode(&self, w: &mut Writer) {
        self.secret.encode(w);
    }
}

impl Decode for NiederreiterKeyPair {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        let secret: NiederreiterSecretKey = r.get()?;
        Ok(NiederreiterKeyPair {
            public: secret.public_key(),
            secret,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::random_weight_word;
    use crate::rng::from_seed;

    #[test]
    fn round_trip() {
        let mut rng = from_seed(21);
        let kp = NiederreiterKeyPair::generate(8, 5, &mut rng).unwrap();
        assert_eq!(kp.public.matrix().rank(), 40);
        for _ in 0..50 {
            let x = random_weight_word(256, 5, &mut rng);
            let y = kp.public.encrypt(&x).unwrap();
            assert_eq!(kp.secret.decrypt(&y).unwrap(), x);
        }
    }

    #[test]
    fn keys_round_trip() {
        let mut rng = from_seed(24);
        let kp = NiederreiterKeyPair::generate(5, 2, &mut rng).unwrap();
        assert_eq!(NiederreiterKeyPair::decode_exact(&kp.encoded()).unwrap(), kp);
        assert_eq!(NiederreiterPublicKey::decode_exact(&kp.public.encoded()).unwrap(), kp.public);
    }

    #[test]
    fn decrypt_matches_bruteforce_inversion() {
        let mut rng = from_seed(25);
        let kp = NiederreiterKeyPair::generate(4, 1, &mut rng).unwrap();
        for i in 0..15 {
            let x = BitVector::unit(15, i);
            let y = kp.public.encrypt(&x).unwrap();
            let oracle = crate::algebra::sd_bruteforce(kp.public.matrix(), &y, 1).unwrap();
            assert_eq!(kp.secret.decrypt(&y).unwrap(), oracle);
        }
    }

    #[test]
    fn encrypt_rejects_bad_weight() {
        let mut rng = from_seed(22);
        let kp = NiederreiterKeyPair::generate(5, 2, &mut rng).unwrap();
        let x = random_weight_word(32, 3, &mut rng);
        assert!(matches!(kp.public.encrypt(&x), Err(Error::WeightInvalid { expected: 2, actual: 3 })));
        assert!(matches!(
            kp.public.encrypt(&BitVector::zeros(31)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn public_key_is_q_h_p() {
        let mut rng = from_seed(23);
        let kp = NiederreiterKeyPair::generate(5, 3, &mut rng).unwrap();
        let sk = &kp.secret;
        // Column i of H is column pi(i) of Q H_goppa.
        for i in 0..32 {
            let col = kp.public.matrix().column(i);
            let moved = sk.permutation().apply(&BitVector::unit(32, i));
            assert_eq!(col, sk.scrambler().mul_vec(&sk.code().syndrome(&moved)));
        }
    }
}
