//! Exact construction, counting and verification of point packings with
//! pairwise distance at least 1 in the unit cube of dimension `2^k`.
//!
//! Points come from binary codes: every codeword `v` of an extended Hamming
//! or Reed–Muller code contributes points whose coordinates are a fixed odd
//! dyadic fraction on the support of `v` and arbitrary 0/1 values elsewhere.
//! All arithmetic is exact (big integers, dyadic rationals).

pub mod codes;
pub mod packing;
pub mod error;
pub mod weights;
pub mod verify;
pub mod bounds;
pub mod cli;

pub use error::{Error, Result};
