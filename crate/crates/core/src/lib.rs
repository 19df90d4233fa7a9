//! Code-based signature schemes.
//!
//! The crate is organised bottom-up:
//!
//! * [`algebra`]: packed GF(2) vectors and matrices, binary extension fields,
//!   polynomials over them, permutations, constant-weight ranking and a
//!   brute-force syndrome-decoding oracle.
//! * [`goppa`]: binary Goppa codes with a Patterson decoder and the
//!   Niederreiter trapdoor built on top of them.
//! * Schemes: [`cfs`], [`stern`], [`kks`], [`ring_zlc`], [`threshold`],
//!   [`blind`] and [`ibs`].
//! * [`costmodel`]: closed-form key size, signature size and signing cost.
//!
//! All randomness is drawn from caller-provided generators; nothing in the
//! library touches ambient entropy.
//!
//! # Warning
//!
//! Research code. Nothing here is constant time and the parameter sets used
//! in tests are far too small to be secure.

pub mod algebra;
pub mod blind;
pub mod cfs;
pub mod codec;
pub mod costmodel;
pub mod error;
pub mod goppa;
pub mod hash;
pub mod ibs;
pub mod kks;
pub mod ring_zlc;
pub mod rng;
pub mod stern;
pub mod threshold;

pub use error::{Error, Result};
