//! Compact binary encoding for keys and signatures.
//!
//! Integers are big-endian. Bit vectors and matrices are LSB-first within
//! bytes, rows padded to a byte boundary. Variable-length fields carry a
//! `u32` length prefix. Decoding is strict: trailing bytes, nonzero padding
//! and out-of-range values are all rejected.

use num_bigint::BigUint;

use crate::algebra::{binomial, cw_index_bits, cw_rank, cw_unrank, BitMatrix, BitVector, Permutation, Poly};
use crate::{Error, Result};

/// Upper bound on any length prefix, guarding allocations on hostile input.
pub const MAX_FIELD_LEN: usize = 1 << 30;

#[derive(Default, Clone, Debug)]
pub struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf
    }

    pub fn u8(&mut self, v: u8) -> &mut Self {
        self.buf.push(v);
        self
    }

    pub fn u16(&mut self, v: u16) -> &mut Self {
        self.buf.extend_from_slice(&v.to_be_bytes());
        self
    }

    pub fn u32(&mut self, v: u32) -> &mut Self {
        self.buf.extend_from_slice(&v.to_be_bytes());
        self
    }

    pub fn u64(&mut self, v: u64) -> &mut Self {
        self.buf.extend_from_slice(&v.to_be_bytes());
        self
    }

    pub fn len(&mut self, n: usize) -> &mut Self {
        self.u32(u32::try_from(n).expect("field length fits in u32"))
    }

    pub fn raw(&mut self, bytes: &[u8]) -> &mut Self {
        self.buf.extend_from_slice(bytes);
        self
    }

    pub fn bytes(&mut self, bytes: &[u8]) -> &mut Self {
        self.len(bytes.len()).raw(bytes)
    }

    pub fn bits(&mut self, v: &BitVector) -> &mut Self {
        self.len(v.len()).raw(&v.to_bytes())
    }

    pub fn matrix(&mut self, m: &BitMatrix) -> &mut Self {
        self.len(m.rows()).len(m.cols()).raw(&m.to_bytes())
    }

    pub fn perm(&mut self, p: &Permutation) -> &mut Self {
        self.len(p.len()).raw(&p.to_bytes())
    }

    pub fn poly(&mut self, p: &Poly) -> &mut Self {
        self.len(p.coeffs().len());
        for &c in p.coeffs() {
            self.u64(c);
        }
        self
    }

    /// Fixed-width big-endian integer of `width` bytes.
    pub fn biguint(&mut self, v: &BigUint, width: usize) -> &mut Self {
        let be = v.to_bytes_be();
        let be: &[u8] = if v.bits() == 0 { &[] } else { &be };
        assert!(be.len() <= width, "integer wider than its field");
        self.buf.extend(std::iter::repeat(0).take(width - be.len()));
        self.raw(be)
    }

    /// Constant-weight word of known length: `u16` weight, then its rank in
    /// `ceil(cw_index_bits(n, w) / 8)` bytes.
    pub fn cw(&mut self, v: &BitVector) -> &mut Self {
        let w = v.weight();
        let rank = cw_rank(v, w).expect("weight matches");
        self.u16(u16::try_from(w).expect("weight fits in u16"));
        self.biguint(&rank, cw_width(v.len(), w))
    }

    pub fn put<T: Encode + ?Sized>(&mut self, v: &T) -> &mut Self {
        v.encode(self);
        self
    }
}

fn cw_width(n: usize, w: usize) -> usize {
    (cw_index_bits(n as u64, w as u64) as usize).div_ceil(8)
}

#[derive(Clone, Debug)]
pub struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Reader { buf, pos: 0 }
    }

    pub fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    pub fn finish(&self) -> Result<()> {
        if self.remaining() != 0 {
            return Err(Error::malformed(format!("{} trailing bytes", self.remaining())));
        }
        Ok(())
    }

    pub fn raw(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.remaining() < n {
            return Err(Error::malformed("unexpected end of input"));
        }
        let out = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    pub fn u8(&mut self) -> Result<u8> {
        Ok(self.raw(1)?[0])
    }

    pub fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_be_bytes(self.raw(2)?.try_into().unwrap()))
    }

    pub fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_be_bytes(self.raw(4)?.try_into().unwrap()))
    }

    pub fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_be_bytes(self.raw(8)?.try_into().unwrap()))
    }

    pub fn len(&mut self) -> Result<usize> {
        let n = self.u32()? as usize;
        if n > MAX_FIELD_LEN {
            return Err(Error::malformed("length prefix too large"));
        }
        Ok(n)
    }

    pub fn bytes(&mut self) -> Result<Vec<u8>> {
        let n = self.len()?;
        Ok(self.raw(n)?.to_vec())
    }

    pub fn bits(&mut self) -> Result<BitVector> {
        let n = self.len()?;
        BitVector::from_bytes(n, self.raw(n.div_ceil(8))?)
    }

    pub fn matrix(&mut self) -> Result<BitMatrix> {
        let rows = self.len()?;
        let cols = self.len()?;
        let size = rows
            .checked_mul(cols.div_ceil(8))
            .filter(|&s| s <= MAX_FIELD_LEN)
            .ok_or_else(|| Error::malformed("matrix too large"))?;
        BitMatrix::from_bytes(rows, cols, self.raw(size)?)
    }

    pub fn perm(&mut self) -> Result<Permutation> {
        let n = self.len()?;
        let size = n.checked_mul(2).ok_or_else(|| Error::malformed("permutation too large"))?;
        Permutation::from_bytes(self.raw(size)?)
    }

    pub fn poly(&mut self) -> Result<Poly> {
        let n = self.len()?;
        let coeffs = (0..n).map(|_| self.u64()).collect::<Result<Vec<_>>>()?;
        if coeffs.last() == Some(&0) {
            return Err(Error::malformed("polynomial has a zero leading coefficient"));
        }
        Ok(Poly::from_coeffs(coeffs))
    }

    pub fn biguint(&mut self, width: usize) -> Result<BigUint> {
        Ok(BigUint::from_bytes_be(self.raw(width)?))
    }

    /// Inverse of [`Writer::cw`] for length `n`, accepting weights `<= max_weight`.
    pub fn cw(&mut self, n: usize, max_weight: usize) -> Result<BitVector> {
        let w = self.u16()? as usize;
        if w > max_weight || w > n {
            return Err(Error::malformed(format!("weight {w} exceeds bound {max_weight}")));
        }
        let rank = self.biguint(cw_width(n, w))?;
        if rank >= binomial(n as u64, w as u64) {
            return Err(Error::malformed("constant-weight rank out of range"));
        }
        cw_unrank(n, w, &rank)
    }

    pub fn get<T: Decode>(&mut self) -> Result<T> {
        T::decode(self)
    }
}

pub trait Encode {
    fn encode(&self, w: &mut Writer);

    fn encoded(&self) -> Vec<u8> {
        let mut w = Writer::new();
        self.encode(&mut w);
        w.into_bytes()
    }
}

pub trait Decode: Sized {
    fn decode(r: &mut Reader<'_>) -> Result<Self>;

    /// Decodes a complete buffer; trailing bytes are an error.
    fn decode_exact(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        let v = Self::decode(&mut r)?;
        r.finish()?;
        Ok(v)
    }
}

impl Encode for BitVector {
    fn encode(&self, w: &mut Writer) {
        w.bits(self);
    }
}

impl Decode for BitVector {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        r.bits()
    }
}

impl Encode for BitMatrix {
    fn encode(&self, w: &mut Writer) {
        w.matrix(self);
    }
}

impl Decode for BitMatrix {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        r.matrix()
    }
}

impl Encode for Permutation {
    fn encode(&self, w: &mut Writer) {
        w.perm(self);
    }
}

impl Decode for Permutation {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        r.perm()
    }
}

impl Encode for Poly {
    fn encode(&self, w: &mut Writer) {
        w.poly(self);
    }
}

impl Decode for Poly {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        r.poly()
    }
}

impl<T: Encode> Encode for [T] {
    fn encode(&self, w: &mut Writer) {
        w.len(self.len());
        for x in self {
            x.encode(w);
        }
    }
}

impl<T: Encode> Encode for Vec<T> {
    fn encode(&self, w: &mut Writer) {
        self.as_slice().encode(w);
    }
}

impl<T: Decode> Decode for Vec<T> {
    fn decode(r: &mut Reader<'_>) -> Result<Self> {
        let n = r.len()?;
        // every element takes at least one byte
        if n > r.remaining() {
            return Err(Error::malformed("sequence longer than input"));
        }
        (0..n).map(|_| T::decode(r)).collect()
    }
}
