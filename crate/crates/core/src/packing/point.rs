use std::fmt;

use crate::codes::BitWord;
use crate::error::{invalid, Result};

/// Largest denominator exponent a point may carry; numerators up to `2^31`
/// fit a `u32`.
pub const MAX_DENOM_EXP: u32 = 31;

/// A cube point with coordinates `numerators[i] / 2^denom_exp`.
///
/// Constructed points are always normalized: `denom_exp == 0` or at least one
/// numerator is odd, which makes the representation unique.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicPoint {
    denom_exp: u32,
    numerators: Vec<u32>,
}

impl DyadicPoint {
    /// Builds and normalizes a point. Every numerator must lie in
    /// `[0, 2^denom_exp]`.
    pub fn new(denom_exp: u32, numerators: Vec<u32>) -> Result<Self> {
        let p = Self::new_raw(denom_exp, numerators)?;
        Ok(p.normalized())
    }

    /// Builds a point without normalizing it.
    pub fn new_raw(denom_exp: u32, numerators: Vec<u32>) -> Result<Self> {
        if denom_exp > MAX_DENOM_EXP {
            return Err(invalid(format!("denominator exponent {denom_exp} too large")));
        }
        if numerators.is_empty() {
            return Err(invalid("point must have at least one coordinate"));
        }
        let top = 1u64 << denom_exp;
        if let Some(&bad) = numerators.iter().find(|&&x| x as u64 > top) {
            return Err(invalid(format!(
                "numerator {bad} outside [0, 2^{denom_exp}]"
            )));
        }
        Ok(DyadicPoint {
            denom_exp,
            numerators,
        })
    }

    pub(crate) fn from_parts_unchecked(denom_exp: u32, numerators: Vec<u32>) -> Self {
        DyadicPoint {
            denom_exp,
            numerators,
        }
    }

    /// A vertex of the cube.
    pub fn vertex(bits: &BitWord) -> Self {
        DyadicPoint {
            denom_exp: 0,
            numerators: bits.to_bits().into_iter().map(u32::from).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.numerators.len()
    }

    pub fn denom_exp(&self) -> u32 {
        self.denom_exp
    }

    pub fn numerators(&self) -> &[u32] {
        &self.numerators
    }

    pub fn is_normalized(&self) -> bool {
        self.denom_exp == 0 || self.numerators.iter().any(|&x| x % 2 == 1)
    }

    /// Divides out common factors of two.
    pub fn normalized(mut self) -> Self {
        if self.denom_exp == 0 {
            return self;
        }
        let or = self.numerators.iter().fold(0u32, |a, &x| a | x);
        let shift = if or == 0 {
            self.denom_exp
        } else {
            or.trailing_zeros().min(self.denom_exp)
        };
        if shift > 0 {
            for x in self.numerators.iter_mut() {
                *x >>= shift;
            }
            self.denom_exp -= shift;
        }
        self
    }

    /// Positions whose coordinate is not an integer.
    pub fn fractional_support(&self) -> BitWord {
        let mut w = BitWord::zeros(self.dim());
        let one = 1u32.checked_shl(self.denom_exp).unwrap_or(0);
        for (i, &x) in self.numerators.iter().enumerate() {
            if x != 0 && x != one {
                w.set(i, true);
            }
        }
        w
    }

    /// Numerators rescaled to exponent `e >= denom_exp`.
    pub fn scaled_to(&self, e: u32) -> impl Iterator<Item = u64> + '_ {
        debug_assert!(e >= self.denom_exp);
        let s = e - self.denom_exp;
        self.numerators.iter().map(move |&x| (x as u64) << s)
    }
}

impl fmt::Debug for DyadicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DyadicPoint(/2^{}: {:?})", self.denom_exp, self.numerators)
    }
}

/// Injective byte encoding of a normalized point.
///
/// Layout: the exponent byte, then each numerator big-endian in
/// `ceil((e + 1) / 8)` bytes. The width is fixed for a given exponent, so
/// equal keys imply equal exponent, dimension and numerators.
pub fn canonical_key(p: &DyadicPoint) -> Result<Vec<u8>> {
    if !p.is_normalized() {
        return Err(invalid("canonical key requires a normalized point"));
    }
    let e = p.denom_exp;
    let width = (e as usize + 1).div_ceil(8);
    let mut out = Vec::with_capacity(1 + width * p.dim());
    out.push(e as u8);
    for &x in &p.numerators {
        out.extend_from_slice(&x.to_be_bytes()[4 - width..]);
    }
    Ok(out)
}
