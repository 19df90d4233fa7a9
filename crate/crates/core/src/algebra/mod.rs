//! Binary linear algebra and finite-field arithmetic.

mod bitvec;
mod cw;
mod field;
mod matrix;
mod perm;
mod poly;
mod sd;

pub use bitvec::BitVector;
pub use cw::{binomial, cw_index_bits, cw_rank, cw_unrank, random_ball_word, random_weight_word, ball_size};
pub use field::{gf2x, Gf2mField};
pub use matrix::{random_invertible, BitMatrix};
pub use perm::{random_permutation, Permutation};
pub use poly::Poly;
pub use sd::{sd_bruteforce, SD_ORACLE_MAX_CANDIDATES, SD_ORACLE_MAX_N};
