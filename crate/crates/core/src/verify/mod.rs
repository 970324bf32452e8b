//! Exact distance verification of point sets.
//!
//! Distances are compared squared and scaled: with every coordinate written
//! over `2^E`, a pair is at distance at least 1 iff the integer
//! `Σ (a_i - b_i)^2` is at least `2^{2E}`.

mod structural;

pub use structural::{
    verify_min_distance, verify_structural, verify_structural_layers, CertificateCase,
    CertificateReport, MinDistanceCheck, StructuralInput,
};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::packing::{DyadicPoint, PointSet};

/// Default largest set accepted by [`verify_exhaustive`].
pub const EXHAUSTIVE_GUARD: usize = 50_000;

/// Outcome of a pairwise distance check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceReport {
    pub mode: String,
    pub pairs_checked: u64,
    pub scale_exp: u32,
    #[serde(serialize_with = "as_decimal")]
    pub min_scaled_sq: BigUint,
    pub argmin: (usize, usize),
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn as_decimal<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl DistanceReport {
    fn new(mode: &str, pairs: u64, scale_exp: u32, best: Best, seed: Option<u64>) -> Self {
        let threshold = 1u64 << (2 * scale_exp);
        DistanceReport {
            mode: mode.to_string(),
            pairs_checked: pairs,
            scale_exp,
            min_scaled_sq: BigUint::from(best.value),
            argmin: (best.i, best.j),
            passed: best.value >= threshold,
            seed,
        }
    }

    /// `min_scaled_sq / 2^{2E}` as a float, for display only.
    pub fn min_distance_squared_f64(&self) -> f64 {
        let v: f64 = self.min_scaled_sq.to_string().parse().unwrap_or(f64::NAN);
        v / (1u64 << (2 * self.scale_exp)) as f64
    }
}

/// Exact squared distance at scale `E = max(e_p, e_q)`.
pub fn scaled_sqdist(p: &DyadicPoint, q: &DyadicPoint) -> Result<(BigUint, u32)> {
    if p.dim() != q.dim() {
        return Err(invalid(format!(
            "dimension mismatch: {} vs {}",
            p.dim(),
            q.dim()
        )));
    }
    let e = p.denom_exp().max(q.denom_exp());
    let mut acc = BigUint::default();
    for (a, b) in p.scaled_to(e).zip(q.scaled_to(e)) {
        let d = BigUint::from(a.abs_diff(b));
        acc += &d * &d;
    }
    Ok((acc, e))
}

/// Running minimum with a deterministic tie-break on the pair indices.
#[derive(Clone, Copy, Debug)]
struct Best {
    value: u64,
    i: usize,
    j: usize,
    order: u64,
}

impl Best {
    const NONE: Best = Best {
        value: u64::MAX,
        i: 0,
        j: 0,
        order: u64::MAX,
    };

    #[inline]
    fn pick(a: Best, b: Best) -> Best {
        if (b.value, b.order) < (a.value, a.order) {
            b
        } else {
            a
        }
    }
}

/// Squared distance between point `i` of `a` and point `j` of `b` at scale `e`.
#[inline]
fn sq_at(a: &PointSet, i: usize, b: &PointSet, j: usize, e: u32) -> u64 {
    let sa = e - a.exp(i);
    let sb = e - b.exp(j);
    a.numerators(i)
        .iter()
        .zip(b.numerators(j))
        .map(|(&x, &y)| {
            let d = ((x as i64) << sa) - ((y as i64) << sb);
            (d * d) as u64
        })
        .sum()
}

fn check_dims(a: &PointSet, b: &PointSet) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(invalid("point sets have different dimensions"));
    }
    Ok(())
}

/// Checks every unordered pair. Refuses sets above `guard` points.
pub fn verify_exhaustive(points: &PointSet, guard: usize) -> Result<DistanceReport> {
    let n = points.len();
    if n > guard {
        return Err(Error::VerificationRefused { points: n, guard });
    }
    if n < 2 {
        return Err(invalid("need at least two points"));
    }
    let e = points.max_exp();
    let best = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut b = Best::NONE;
            for j in i + 1..n {
                let v = sq_at(points, i, points, j, e);
                if v < b.value {
                    b = Best {
                        value: v,
                        i,
                        j,
                        order: (i as u64) << 32 | j as u64,
                    };
                }
            }
            b
        })
        .reduce(|| Best::NONE, Best::pick);
    let pairs = (n as u64) * (n as u64 - 1) / 2;
    Ok(DistanceReport::new("exhaustive", pairs, e, best, None))
}

/// Draws `num_pairs` index pairs `(i, j)`, `i != j`, uniformly with a
/// ChaCha8 generator seeded by `seed`. Pairs are drawn with replacement.
pub fn sample_pairs(n: usize, num_pairs: u64, seed: u64) -> Vec<(u32, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..num_pairs)
        .map(|_| {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            (i.min(j) as u32, i.max(j) as u32)
        })
        .collect()
}

fn min_over_pairs(
    a: &PointSet,
    b: &PointSet,
    pairs: &[(u32, u32)],
    e: u32,
) -> Best {
    pairs
        .par_iter()
        .enumerate()
        .map(|(s, &(i, j))| Best {
            value: sq_at(a, i as usize, b, j as usize, e),
            i: i as usize,
            j: j as usize,
            order: s as u64,
        })
        .reduce(|| Best::NONE, Best::pick)
}

/// Checks `num_pairs` random distinct pairs within one set.
pub fn verify_sampled(points: &PointSet, num_pairs: u64, seed: u64) -> Result<DistanceReport> {
    if num_pairs == 0 {
        return Err(invalid("num_pairs must be at least 1"));
    }
    if points.len() < 2 {
        return Err(invalid("need at least two points"));
    }
    let pairs = sample_pairs(points.len(), num_pairs, seed);
    let e = points.max_exp();
    let best = min_over_pairs(points, points, &pairs, e);
    Ok(DistanceReport::new("sampled", num_pairs, e, best, Some(seed)))
}

/// Checks `num_pairs` random pairs with one point from each set. The argmin
/// holds an index into `a` and an index into `b`.
pub fn verify_cross_sampled(
    a: &PointSet,
    b: &PointSet,
    num_pairs: u64,
    seed: u64,
) -> Result<DistanceReport> {
    check_dims(a, b)?;
    if num_pairs == 0 || a.is_empty() || b.is_empty() {
        return Err(invalid("need nonempty sets and at least one pair"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(u32, u32)> = (0..num_pairs)
        .map(|_| {
            (
                rng.gen_range(0..a.len()) as u32,
                rng.gen_range(0..b.len()) as u32,
            )
        })
        .collect();
    let e = a.max_exp().max(b.max_exp());
    let best = min_over_pairs(a, b, &pairs, e);
    Ok(DistanceReport::new("cross-sampled", num_pairs, e, best, Some(seed)))
}

/// Checks every pair with one point from each set. Intended for a small `a`
/// against a large `b` (the dimension-16 augmentation against the base set).
pub fn verify_cross_exhaustive(a: &PointSet, b: &PointSet) -> Result<DistanceReport> {
    check_dims(a, b)?;
    if a.is_empty() || b.is_empty() {
        return Err(invalid("need nonempty sets"));
    }
    let e = a.max_exp().max(b.max_exp());
    let dim = a.dim();
    // Both sides rescaled to the common exponent once; i16 holds 2^7.
    let scale = |s: &PointSet| -> Vec<i16> {
        let mut out = Vec::with_capacity(s.len() * dim);
        for i in 0..s.len() {
            let sh = e - s.exp(i);
            out.extend(s.numerators(i).iter().map(|&x| (x as i16) << sh));
        }
        out
    };
    let sa = scale(a);
    let sb = scale(b);
    let best = (0..a.len())
        .into_par_iter()
        .map(|i| {
            let pa = &sa[i * dim..(i + 1) * dim];
            let mut best = Best::NONE;
            for (j, pb) in sb.chunks_exact(dim).enumerate() {
                let v: i32 = pa
                    .iter()
                    .zip(pb)
                    .map(|(&x, &y)| {
                        let d = (x - y) as i32;
                        d * d
                    })
                    .sum();
                if (v as u64) < best.value {
                    best = Best {
                        value: v as u64,
                        i,
                        j,
                        order: (i as u64) << 32 | j as u64,
                    };
                }
            }
            best
        })
        .reduce(|| Best::NONE, Best::pick);
    let pairs = a.len() as u64 * b.len() as u64;
    Ok(DistanceReport::new("cross-exhaustive", pairs, e, best, None))
}

/// Number of repeated canonical keys in a materialized set.
pub fn check_no_duplicates(points: &PointSet) -> usize {
    points.duplicate_count()
}
