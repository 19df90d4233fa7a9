//! File container for keys, signatures and protocol state.
//!
//! Layout (integers big-endian):
//!
//! ```text
//! "CBSG" | version u8 | scheme u8 | kind u8 | m t n k N l (u32 each)
//!        | payload length u32 | payload | SHA-256 of everything before
//! ```
//!
//! The payload is the `cbsig` codec encoding of the object. Bit vectors and
//! matrices inside it are packed LSB first within bytes, matrix rows padded
//! to whole bytes.

use cbsig::codec::{Decode, Encode};
use cbsig::hash::sha256;
use thiserror::Error;

pub const MAGIC: &[u8; 4] = b"CBSG";
pub const VERSION: u8 = 1;
const HEADER_LEN: usize = 4 + 3 + 6 * 4 + 4;
const DIGEST_LEN: usize = 32;

macro_rules! byte_enum {
    ($name:ident { $($variant:ident = $v:expr => $label:expr),* $(,)? }) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
        pub enum $name { $($variant),* }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),*];

            pub fn byte(self) -> u8 {
                match self { $($name::$variant => $v),* }
            }

            pub fn from_byte(b: u8) -> Option<Self> {
                match b { $($v => Some($name::$variant),)* _ => None }
            }

            pub fn label(self) -> &'static str {
                match self { $($name::$variant => $label),* }
            }
        }

        impl std::fmt::Display for $name {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.write_str(self.label())
            }
        }
    };
}

byte_enum!(SchemeId {
    Nr = 0 => "nr",
    Cfs = 1 => "cfs",
    Stern = 2 => "stern",
    Kks = 3 => "kks",
    Zlc = 4 => "zlc",
    Acg = 5 => "acg",
    Dv = 6 => "dv",
    Blind = 7 => "blind",
    Ibs = 8 => "ibs",
});

byte_enum!(Kind {
    PublicKey = 1 => "public key",
    SecretKey = 2 => "secret key",
    Signature = 3 => "signature",
    Credential = 4 => "credential",
    BlindState = 5 => "blinding state",
    BlindRequest = 6 => "blind request",
    BlindResponse = 7 => "blind response",
});

impl SchemeId {
    /// Schemes whose keys are Niederreiter key pairs over binary Goppa codes.
    pub fn is_goppa(self) -> bool {
        matches!(
            self,
            SchemeId::Nr | SchemeId::Cfs | SchemeId::Zlc | SchemeId::Dv | SchemeId::Blind | SchemeId::Ibs
        )
    }
}

/// Parameter header; fields that do not apply are zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Header {
    pub m: u32,
    pub t: u32,
    pub n: u32,
    pub k: u32,
    pub ring: u32,
    pub l: u32,
}

impl Header {
    fn fields(&self) -> [u32; 6] {
        [self.m, self.t, self.n, self.k, self.ring, self.l]
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnvelopeError {
    #[error("not a CBSG file")]
    BadMagic,
    #[error("unsupported format version {0}")]
    UnknownVersion(u8),
    #[error("unknown scheme id {0}")]
    UnknownScheme(u8),
    #[error("unknown object kind {0}")]
    UnknownKind(u8),
    #[error("file is truncated")]
    Truncated,
    #[error("integrity digest mismatch")]
    DigestMismatch,
    #[error("expected a {expected}, found a {found}")]
    WrongKind { expected: Kind, found: Kind },
    #[error("payload: {0}")]
    Payload(#[from] cbsig::Error),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Envelope {
    pub scheme: SchemeId,
    pub kind: Kind,
    pub header: Header,
    pub payload: Vec<u8>,
}

impl Envelope {
    pub fn seal<T: Encode + ?Sized>(scheme: SchemeId, kind: Kind, header: Header, body: &T) -> Self {
        Envelope {
            scheme,
            kind,
            header,
            payload: body.encoded(),
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.payload.len() + DIGEST_LEN);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&[VERSION, self.scheme.byte(), self.kind.byte()]);
        for f in self.header.fields() {
            out.extend_from_slice(&f.to_be_bytes());
        }
        out.extend_from_slice(&(self.payload.len() as u32).to_be_bytes());
        out.extend_from_slice(&self.payload);
        let digest = sha256(&out);
        out.extend_from_slice(&digest);
        out
    }

    pub fn parse(bytes: &[u8]) -> Result<Self, EnvelopeError> {
        if bytes.len() < 4 || &bytes[..4] != MAGIC {
            return Err(EnvelopeError::BadMagic);
        }
        if bytes.len() < HEADER_LEN + DIGEST_LEN {
            return Err(EnvelopeError::Truncated);
        }
        let u32_at = |i: usize| u32::from_be_bytes(bytes[i..i + 4].try_into().unwrap());
        let payload_len = u32_at(HEADER_LEN - 4) as usize;
        if bytes.len() != HEADER_LEN + payload_len + DIGEST_LEN {
            return Err(EnvelopeError::Truncated);
        }
        let (body, digest) = bytes.split_at(HEADER_LEN + payload_len);
        if sha256(body)[..] != *digest {
            return Err(EnvelopeError::DigestMismatch);
        }
        if bytes[4] != VERSION {
            return Err(EnvelopeError::UnknownVersion(bytes[4]));
        }
        let scheme = SchemeId::from_byte(bytes[5]).ok_or(EnvelopeError::UnknownScheme(bytes[5]))?;
        let kind = Kind::from_byte(bytes[6]).ok_or(EnvelopeError::UnknownKind(bytes[6]))?;
        let f: Vec<u32> = (0..6).map(|i| u32_at(7 + 4 * i)).collect();
        Ok(Envelope {
            scheme,
            kind,
            header: Header {
                m: f[0],
                t: f[1],
                n: f[2],
                k: f[3],
                ring: f[4],
                l: f[5],
            },
            payload: body[HEADER_LEN..].to_vec(),
        })
    }

    pub fn expect(&self, kind: Kind) -> Result<&Self, EnvelopeError> {
        if self.kind != kind {
            return Err(EnvelopeError::WrongKind {
                expected: kind,
                found: self.kind,
            });
        }
        Ok(self)
    }

    pub fn open<T: Decode>(&self) -> Result<T, EnvelopeError> {
        Ok(T::decode_exact(&self.payload)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cbsig::algebra::BitVector;

    fn sample() -> Envelope {
        let v = BitVector::from_indices(40, [1, 5, 39]);
        let header = Header {
            m: 5,
            t: 2,
            n: 32,
            k: 22,
            ring: 0,
            l: 0,
        };
        Envelope::seal(SchemeId::Blind, Kind::BlindResponse, header, &v)
    }

    #[test]
    fn round_trip() {
        let env = sample();
        let back = Envelope::parse(&env.to_bytes()).unwrap();
        assert_eq!(back, env);
        assert_eq!(back.open::<BitVector>().unwrap().weight(), 3);
    }

    #[test]
    fn every_single_bit_flip_is_caught() {
        let bytes = sample().to_bytes();
        for bit in 0..bytes.len() * 8 {
            let mut bad = bytes.clone();
            bad[bit / 8] ^= 1 << (bit % 8);
            assert!(Envelope::parse(&bad).is_err(), "bit {bit}");
        }
    }

    #[test]
    fn version_and_ids() {
        let env = sample();
        let mut body = env.to_bytes();
        body.truncate(body.len() - DIGEST_LEN);
        body[4] = 9;
        let d = sha256(&body);
        body.extend_from_slice(&d);
        assert_eq!(Envelope::parse(&body), Err(EnvelopeError::UnknownVersion(9)));
        for s in SchemeId::ALL {
            assert_eq!(SchemeId::from_byte(s.byte()), Some(*s));
        }
        assert_eq!(SchemeId::from_byte(200), None);
        assert!(matches!(env.expect(Kind::Signature), Err(EnvelopeError::WrongKind { .. })));
    }

    #[test]
    fn truncation_and_extension() {
        let bytes = sample().to_bytes();
        assert_eq!(Envelope::parse(&bytes[..bytes.len() - 1]), Err(EnvelopeError::Truncated));
        let mut longer = bytes.clone();
        longer.push(0);
        assert_eq!(Envelope::parse(&longer), Err(EnvelopeError::Truncated));
        assert_eq!(Envelope::parse(b"XXXX"), Err(EnvelopeError::BadMagic));
    }
}
