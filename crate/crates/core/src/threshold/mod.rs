//! Threshold ring schemes: ACG identification (and its Fiat-Shamir
//! signature) over random codes, and DV signatures over CFS keys.

pub mod acg;
pub mod dv;
pub mod feistel;
