//! Binary linear codes: Hamming, extended Hamming and Reed–Muller families.
//!
//! Conventions are fixed so that outputs are reproducible:
//! - Hamming parity-check column `j` (1-indexed) is the binary expansion of
//!   `j`, most significant bit in row 0.
//! - Extension appends the overall parity bit as the last coordinate.
//! - Reed–Muller coordinates are the points of `{0,1}^k` in binary-counter
//!   order; variable `x_i` is bit `k-1-i` of the counter.

mod enumerate;
mod matrix;
mod word;

pub use enumerate::Codewords;
pub(crate) use enumerate::par_fold_ranges;
pub use matrix::{BinMatrix, Echelon};
pub use word::BitWord;

use crate::error::{invalid, Error, Result};

/// Default largest code dimension that may be enumerated word by word.
pub const DEFAULT_ENUM_CAP: usize = 26;

/// Largest `k` accepted by the code constructors. Lengths up to `2^16` keep
/// generator matrices in memory comfortably.
pub const MAX_K: u32 = 16;

/// A binary linear code given by a full-rank generator matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    generator: BinMatrix,
    claimed_min_distance: usize,
}

impl LinearCode {
    /// Rejects generators with dependent rows and a zero distance claim.
    pub fn new(generator: BinMatrix, claimed_min_distance: usize) -> Result<Self> {
        if generator.n_cols() == 0 {
            return Err(invalid("code length must be positive"));
        }
        if claimed_min_distance == 0 {
            return Err(invalid("claimed minimum distance must be positive"));
        }
        if generator.rank() != generator.n_rows() {
            return Err(invalid("generator rows are linearly dependent"));
        }
        Ok(LinearCode {
            generator,
            claimed_min_distance,
        })
    }

    pub fn length(&self) -> usize {
        self.generator.n_cols()
    }

    pub fn dimension(&self) -> usize {
        self.generator.n_rows()
    }

    pub fn claimed_min_distance(&self) -> usize {
        self.claimed_min_distance
    }

    pub fn generator(&self) -> &BinMatrix {
        &self.generator
    }

    /// Same code with a different distance claim. Used to probe the
    /// structural certificate with deliberately wrong parameters.
    pub fn with_claimed_min_distance(mut self, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(invalid("claimed minimum distance must be positive"));
        }
        self.claimed_min_distance = d;
        Ok(self)
    }

    /// `[n, k, d]` in the usual notation.
    pub fn params_string(&self) -> String {
        format!(
            "[{},{},{}]",
            self.length(),
            self.dimension(),
            self.claimed_min_distance
        )
    }

    /// Codeword for a message, bit `i` of `message` selecting generator row `i`.
    pub fn encode(&self, message: u64) -> BitWord {
        self.generator.combine(message)
    }

    pub fn contains(&self, word: &BitWord) -> bool {
        word.len() == self.length() && self.generator.echelon().contains(word)
    }

    /// The dual code's generator (a parity-check matrix for this code).
    pub fn parity_check(&self) -> BinMatrix {
        self.generator.null_space()
    }
}

fn check_k(k: u32, min: u32) -> Result<()> {
    if k < min || k > MAX_K {
        return Err(invalid(format!("k must lie in [{min}, {MAX_K}], got {k}")));
    }
    Ok(())
}

/// The `k × (2^k - 1)` Hamming parity-check matrix in canonical column order.
pub fn hamming_parity_check(k: u32) -> Result<BinMatrix> {
    check_k(k, 2)?;
    let n = (1usize << k) - 1;
    let rows = (0..k as usize)
        .map(|r| {
            let shift = k as usize - 1 - r;
            let mut w = BitWord::zeros(n);
            for j in 1..=n {
                if (j >> shift) & 1 == 1 {
                    w.set(j - 1, true);
                }
            }
            w
        })
        .collect();
    BinMatrix::new(n, rows)
}

/// The `[2^k - 1, 2^k - 1 - k, 3]` Hamming code, as the null space of
/// [`hamming_parity_check`].
pub fn hamming_code(k: u32) -> Result<LinearCode> {
    let h = hamming_parity_check(k)?;
    LinearCode::new(h.null_space(), 3)
}

/// Appends an overall parity bit so every codeword has even weight.
///
/// Parity is linear, so extending each generator row extends the code. An odd
/// distance claim grows by one; an even one is kept.
pub fn extend_code(c: &LinearCode) -> Result<LinearCode> {
    let rows: Vec<BitWord> = c
        .generator
        .rows()
        .iter()
        .map(|r| r.push(r.weight() % 2 == 1))
        .collect();
    let d = c.claimed_min_distance;
    let d = if d % 2 == 1 { d + 1 } else { d };
    LinearCode::new(BinMatrix::new(c.length() + 1, rows)?, d)
}

/// Extended Hamming code of length `2^k`.
pub fn extended_hamming(k: u32) -> Result<LinearCode> {
    extend_code(&hamming_code(k)?)
}

/// Evaluation vector of the monomial `Π_{i ∈ vars} x_i` over `{0,1}^k`.
fn monomial_row(k: u32, vars: &[u32]) -> BitWord {
    let len = 1usize << k;
    let mask: usize = vars.iter().map(|&i| 1usize << (k - 1 - i)).sum();
    let mut w = BitWord::zeros(len);
    for p in 0..len {
        if p & mask == mask {
            w.set(p, true);
        }
    }
    w
}

/// Subsets of `0..k` of size `size`, lexicographic.
fn subsets(k: u32, size: u32) -> Vec<Vec<u32>> {
    fn rec(start: u32, k: u32, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..=(k - left) {
            cur.push(i);
            rec(i + 1, k, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, k, size, &mut Vec::new(), &mut out);
    out
}

/// Reed–Muller code `RM(r, k)`: length `2^k`, dimension `Σ_{i≤r} C(k,i)`,
/// distance `2^{k-r}`. Rows are monomials ordered by degree, then
/// lexicographically by variable set.
pub fn reed_muller(r: u32, k: u32) -> Result<LinearCode> {
    check_k(k, 1)?;
    if r > k {
        return Err(invalid(format!("Reed-Muller order r={r} exceeds k={k}")));
    }
    let rows: Vec<BitWord> = (0..=r)
        .flat_map(|deg| subsets(k, deg))
        .map(|vars| monomial_row(k, &vars))
        .collect();
    LinearCode::new(BinMatrix::new(1usize << k, rows)?, 1usize << (k - r))
}

/// Streams every codeword exactly once in Gray-code order.
pub fn enumerate_codewords(c: &LinearCode, cap: usize) -> Result<Codewords<'_>> {
    check_enumerable(c, cap)?;
    Ok(Codewords::new(c, 0, 1u64 << c.dimension()))
}

pub(crate) fn check_enumerable(c: &LinearCode, cap: usize) -> Result<()> {
    if c.dimension() > cap || c.dimension() >= 64 {
        return Err(Error::EnumerationRefused {
            dimension: c.dimension(),
            cap,
        });
    }
    Ok(())
}

/// Minimum weight over nonzero codewords, by exhaustive enumeration.
pub fn min_weight(c: &LinearCode, cap: usize) -> Result<usize> {
    check_enumerable(c, cap)?;
    if c.dimension() == 0 {
        return Err(Error::UndefinedMinWeight);
    }
    let total = 1u64 << c.dimension();
    let best = par_fold_ranges(
        c,
        total,
        || usize::MAX,
        |acc, w| {
            let wt = w.weight();
            if wt > 0 && wt < *acc {
                *acc = wt;
            }
        },
        |a, b| a.min(b),
    );
    Ok(best)
}

/// True iff every generator row of `a` lies in the row space of `b`.
pub fn subcode_of(a: &LinearCode, b: &LinearCode) -> Result<bool> {
    if a.length() != b.length() {
        return Err(invalid(format!(
            "length mismatch: {} vs {}",
            a.length(),
            b.length()
        )));
    }
    let ech = b.generator.echelon();
    Ok(a.generator.rows().iter().all(|r| ech.contains(r)))
}

/// True iff permuting the coordinates of `a` by `perm` (output position `i`
/// takes input position `perm[i]`) yields exactly the code `b`.
pub fn is_permuted_copy(a: &LinearCode, b: &LinearCode, perm: &[usize]) -> Result<bool> {
    if a.length() != b.length() || perm.len() != a.length() {
        return Err(invalid("length mismatch in permutation check"));
    }
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
            return Err(invalid("not a permutation"));
        }
    }
    if a.dimension() != b.dimension() {
        return Ok(false);
    }
    let ech = b.generator.echelon();
    Ok(a.generator
        .rows()
        .iter()
        .all(|r| ech.contains(&r.permute(perm))))
}

/// Coordinate map taking the extended Hamming code of length `2^k` onto
/// `RM(k-2, k)`: RM point `p > 0` reads Hamming position `p - 1`, RM point 0
/// reads the parity position.
pub fn extended_hamming_to_rm_permutation(k: u32) -> Vec<usize> {
    let n = 1usize << k;
    (0..n).map(|p| if p == 0 { n - 1 } else { p - 1 }).collect()
}
