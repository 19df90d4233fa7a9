//! DV threshold ring signatures over CFS keys.
//!
//! With `k = h(M)`, `v_0 = h(H_1, .., H_N)` and
//! `y_i = H_i x_i^T + h(M | r_i)`, a signature `(x_i, r_i, f)` is valid when
//! `deg f = N - l`, `f(0) = v_0` and `f(i) = E_{k,i}(y_i)` for every member.
//! Arithmetic on `f` is in GF(2^(mt)); member `i` (0-based) evaluates `f`
//! at the field element `i + 1`.
//!
//! Non-signers pick `(x_i, r_i)` at random, which fixes `N - l` points of
//! `f` besides the origin. Signers then need `H_i x_i^T = E_{k,i}^-1(f(i)) +
//! h(M | r_i)`, found by CFS decoding with fresh `r_i` until it succeeds.

use rand::Rng;

use crate::algebra::{random_ball_word, BitVector, Gf2mField, Poly};
use crate::codec::{Decode, Encode, Reader, Writer};
use crate::goppa::{code_length, NiederreiterPublicKey, NiederreiterSecretKey};
use crate::hash::{expand_bits, sha256, Digest, TaggedHasher};
use crate::threshold::feistel::Feistel;
use crate::{Error, Result};

/// Largest `mt` supported: field elements and counters live in a `u64`.
pub const MAX_MT: u32 = 62;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DvSignature {
    pub m: u32,
    pub t: usize,
    pub l: usize,
    pub xs: Vec<BitVector>,
    /// Each in `[1, 2^(mt)]`.
    pub rs: Vec<u64>,
    pub f: Poly,
}

/// Cap on decoding attempts: `l * t! * 20`.
pub fn default_budget(l: usize, t: usize) -> u64 {
    let fact: u64 = (1..=t as u64).product();
    (l as u64).saturating_mul(fact).saturating_mul(20)
}

struct Context {
    mt: u32,
    field: Gf2mField,
    key: Digest,
    v0: u64,
}

impl Context {
    fn new(members: &[NiederreiterPublicKey], msg: &[u8]) -> Result<Self> {
        let first = members.first().ok_or_else(|| Error::param("empty ring"))?;
        if members.iter().any(|pk| pk.m() != first.m() || pk.t() != first.t()) {
            return Err(Error::param("ring members must share (m, t)"));
        }
        let mt = first.m() * first.t() as u32;
        if mt > MAX_MT {
            return Err(Error::param(format!("mt = {mt} exceeds {MAX_MT}")));
        }
        if members.len() as u64 >= 1u64 << mt {
            return Err(Error::param("ring larger than the evaluation field"));
        }
        let mut h = TaggedHasher::new("dv/v0");
        h.update_u32(members.len() as u32);
        for pk in members {
            h.update(&pk.matrix().to_bytes());
        }
        let v0 = expand_bits(&h.finalize(), mt as usize).to_u64();
        Ok(Context {
            mt,
            field: Gf2mField::new(mt)?,
            key: sha256(msg),
            v0,
        })
    }

    fn e(&self, i: usize) -> Feistel {
        Feistel::new(self.key, i as u64 + 1, self.mt)
    }

    fn mask(&self, r: u64) -> BitVector {
        let mut h = TaggedHasher::new("dv/mask");
        h.update(&self.key).update_u64(r);
        expand_bits(&h.finalize(), self.mt as usize)
    }

    fn random_r<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(1..=1u64 << self.mt)
    }
}

/// `v_0 = h(H_1, .., H_N)` as a field element.
pub fn ring_origin(members: &[NiederreiterPublicKey]) -> Result<u64> {
    Ok(Context::new(members, b"")?.v0)
}

pub fn sign<R: Rng + ?Sized>(
    members: &[NiederreiterPublicKey],
    signers: &[(usize, &NiederreiterSecretKey)],
    msg: &[u8],
    budget: u64,
    rng: &mut R,
) -> Result<(DvSignature, u64)> {
    let ctx = Context::new(members, msg)?;
    let big_n = members.len();
    let l = signers.len();
    let (m, t, n) = (members[0].m(), members[0].t(), members[0].n());
    if l == 0 || l > big_n {
        return Err(Error::param(format!("need 1 <= l <= N, got l={l} N={big_n}")));
    }
    let mut is_signer = vec![false; big_n];
    for &(i, sk) in signers {
        if i >= big_n || std::mem::replace(&mut is_signer[i], true) {
            return Err(Error::param(format!("bad or repeated signer index {i}")));
        }
        if sk.code().m() != m || sk.code().t() != t {
            return Err(Error::param("signer key parameters differ from the ring"));
        }
    }

    let mut xs = vec![BitVector::zeros(n); big_n];
    let mut rs = vec![0u64; big_n];
    let f = loop {
        let mut points = vec![(0u64, ctx.v0)];
        for i in (0..big_n).filter(|&i| !is_signer[i]) {
            xs[i] = random_ball_word(n, t, rng);
            rs[i] = ctx.random_r(rng);
            let y = members[i].matrix().mul_vec(&xs[i]).xor(&ctx.mask(rs[i]));
            points.push((i as u64 + 1, ctx.e(i).encrypt(y.to_u64())));
        }
        let f = Poly::interpolate(&ctx.field, &points);
        if f.degree() == Some(big_n - l) {
            break f;
        }
        if l == big_n {
            return Err(Error::Failure("ring digest is zero; no degree-0 sharing exists".into()));
        }
    };

    let mut attempts = 0;
    for &(i, sk) in signers {
        let target = BitVector::from_u64(ctx.mt as usize, ctx.e(i).decrypt(f.eval(&ctx.field, i as u64 + 1)));
        loop {
            if attempts == budget {
                return Err(Error::AttemptBudgetExceeded(budget));
            }
            attempts += 1;
            let r = ctx.random_r(rng);
            match sk.invert(&target.xor(&ctx.mask(r))) {
                Ok(x) => {
                    xs[i] = x;
                    rs[i] = r;
                    break;
                }
                Err(Error::Undecodable) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    let sig = DvSignature { m, t, l, xs, rs, f };
    if !verify(members, msg, &sig) {
        return Err(Error::param("a signing key does not match its ring member"));
    }
    Ok((sig, attempts))
}

pub fn verify(members: &[NiederreiterPublicKey], msg: &[u8], sig: &DvSignature) -> bool {
    let Ok(ctx) = Context::new(members, msg) else { return false };
    let big_n = members.len();
    let pk0 = &members[0];
    if sig.m != pk0.m()
        || sig.t != pk0.t()
        || sig.l == 0
        || sig.l > big_n
        || sig.xs.len() != big_n
        || sig.rs.len() != big_n
        || sig.f.degree() != Some(big_n - sig.l)
        || sig.f.coeffs().iter().any(|&c| !ctx.field.contains(c))
        || sig.f.eval(&ctx.field, 0) != ctx.v0
    {
        return false;
    }
    (0..big_n).all(|i| {
        let (x, r) = (&sig.xs[i], sig.rs[i]);
        if x.len() != pk0.n() || x.weight() > pk0.t() || r == 0 || r > 1u64 << ctx.mt {
            return false;
        }
        let y = members[i].matrix().mul_vec(x).xor(&ctx.mask(r));
        sig.f.eval(&ctx.field, i as u64 + 1) == ctx.e(i).encrypt(y.to_u64())
    })
}

/// Header `(m, t, N, l)`, the `x_i` as constant-weight words, the `r_i`,
/// then the `N - l + 1` coefficients of `f` packed at `mt` bits each,
/// lowest degree first, LSB first.
impl Encode for DvSignature {
    fn encode(&self, w: &mut Writer) {
        let mt = self.m as usize * self.t;
        w.u32(self.m).len(self.t).len(self.xs.len()).len(self.l);
        for x in &self.xs {
            w.cw(x);
        }
        for &r in &self.rs {
            w.u64(r);
        }
        let count = self.xs.len() + 1 - self.l.min(self.xs.len());
        let mut packed = BitVector::zeros(0);
        for j in 0..count {
            packed = packed.concat(&BitVector::from_u64(mt, self.f.coeff(j)));
        }
        w.raw(&packed.to_bytes());
    }
}

impl Decode for DvSignature {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        let m = r.u32()?;
        let t = r.len()?;
        let n = code_length(m, t).map_err(|e| Error::malformed(e.to_string()))?;
        let mt = m as usize * t;
        if mt > MAX_MT as usize {
            return Err(Error::malformed("mt too large"));
        }
        let big_n = r.len()?;
        let l = r.len()?;
        if l == 0 || l > big_n || big_n > r.remaining() {
            return Err(Error::malformed("inconsistent N and l"));
        }
        let xs = (0..big_n).map(|_| r.cw(n, t)).collect::<Result<Vec<_>>>()?;
        let rs = (0..big_n).map(|_| r.u64()).collect::<Result<Vec<_>>>()?;
        let count = big_n - l + 1;
        let packed = BitVector::from_bytes(count * mt, r.raw((count * mt).div_ceil(8))?)?;
        let coeffs = (0..count).map(|j| packed.slice(j * mt, (j + 1) * mt).to_u64()).collect();
        Ok(DvSignature {
            m,
            t,
            l,
            xs,
            rs,
            f: Poly::from_coeffs(coeffs),
        })
    }
}
