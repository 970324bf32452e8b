//! Exact weight distributions of the Hamming family and the counting
//! formulas built on them.
//!
//! Two lengths appear side by side: `code_len = 2^k - 1` for the Hamming
//! code and `dim = 2^k` for its extension (and the cube dimension).

mod poly;

pub use poly::IntPolynomial;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::codes::{self, LinearCode, MAX_K};
use crate::error::{invalid, Error, Result};

/// Number of codewords of each Hamming weight `0..=length`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDistribution {
    counts: Vec<BigUint>,
}

impl WeightDistribution {
    /// `counts[j]` is the number of words of weight `j`; the vector has
    /// `length + 1` entries.
    pub fn new(counts: Vec<BigUint>) -> Result<Self> {
        if counts.len() < 2 {
            return Err(invalid("weight distribution needs length >= 1"));
        }
        Ok(WeightDistribution { counts })
    }

    fn from_ints(counts: Vec<BigInt>, what: &str) -> Result<Self> {
        let counts = counts
            .into_iter()
            .map(|c| {
                c.to_biguint().ok_or_else(|| {
                    Error::InternalConsistency(format!("{what}: negative weight count {c}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(counts)
    }

    /// Coefficients `0..=length` of a generating polynomial.
    pub fn from_poly(p: &IntPolynomial, length: usize, what: &str) -> Result<Self> {
        if p.degree().is_some_and(|d| d > length) {
            return Err(Error::InternalConsistency(format!(
                "{what}: degree exceeds length {length}"
            )));
        }
        Self::from_ints((0..=length).map(|j| p.coeff(j)).collect(), what)
    }

    pub fn length(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn count(&self, j: usize) -> BigUint {
        self.counts.get(j).cloned().unwrap_or_default()
    }

    /// Total number of words.
    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// Smallest positive weight that occurs.
    pub fn min_nonzero_weight(&self) -> Option<usize> {
        (1..self.counts.len()).find(|&j| !self.counts[j].is_zero())
    }

    /// Weights with nonzero count, paired with the count.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, &BigUint)> {
        self.counts.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn to_polynomial(&self) -> IntPolynomial {
        IntPolynomial::new(self.counts.iter().map(|c| BigInt::from(c.clone())).collect())
    }
}

fn check_k(k: u32) -> Result<()> {
    if !(2..=MAX_K).contains(&k) {
        return Err(invalid(format!("k must lie in [2, {MAX_K}], got {k}")));
    }
    Ok(())
}

fn binomials(n: usize) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = BigInt::one();
    for j in 0..=n {
        row.push(c.clone());
        c = c * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    row
}

/// Hamming weights `W(j)` from the recurrence
/// `j W(j) = C(n, j-1) - W(j-1) - (n - j + 2) W(j-2)` with `n = 2^k - 1`.
///
/// The recurrence is run from `j = 1` with `W(-1) = 0`; the initial values
/// `W(1) = W(2) = 0` fall out and are checked.
pub fn hamming_weights_recurrence(k: u32) -> Result<WeightDistribution> {
    check_k(k)?;
    let code_len = (1usize << k) - 1;
    let binom = binomials(code_len);
    let mut w: Vec<BigInt> = vec![BigInt::one()];
    for j in 1..=code_len {
        let prev = &w[j - 1];
        let prev2 = if j >= 2 { w[j - 2].clone() } else { BigInt::zero() };
        let rhs = &binom[j - 1] - prev - BigInt::from(code_len + 2 - j) * prev2;
        let (q, r) = rhs.div_rem(&BigInt::from(j));
        if !r.is_zero() {
            return Err(Error::InternalConsistency(format!(
                "recurrence division by {j} not exact"
            )));
        }
        w.push(q);
    }
    if !w[1].is_zero() || !w[2].is_zero() {
        return Err(Error::InternalConsistency(
            "recurrence produced nonzero W(1) or W(2)".into(),
        ));
    }
    WeightDistribution::from_ints(w, "recurrence")
}

/// `f(x) = [(1+x)^n + n (1+x)^{(n-1)/2} (1-x)^{(n+1)/2}] / (n+1)`, `n = 2^k - 1`.
pub fn hamming_generating_function(k: u32) -> Result<IntPolynomial> {
    check_k(k)?;
    let code_len = (1usize << k) - 1;
    let a = IntPolynomial::binomial_power(1, 1, code_len);
    let b = &IntPolynomial::binomial_power(1, 1, (code_len - 1) / 2)
        * &IntPolynomial::binomial_power(1, -1, (code_len + 1) / 2);
    let num = &a + &b.scale(&BigInt::from(code_len));
    num.div_exact(&BigInt::from(code_len + 1)).ok_or_else(|| {
        Error::InternalConsistency("f(x) numerator not divisible by n+1".into())
    })
}

/// Hamming weights from the expanded closed form of `f(x)`.
pub fn hamming_weights_closed(k: u32) -> Result<WeightDistribution> {
    let f = hamming_generating_function(k)?;
    WeightDistribution::from_poly(&f, (1usize << k) - 1, "closed form f(x)")
}

/// `g(x) = [(1+x)^{2^k} + (1-x)^{2^k} + 2(2^k - 1)(1-x^2)^{2^{k-1}}] / 2^{k+1}`.
pub fn extended_generating_function(k: u32) -> Result<IntPolynomial> {
    check_k(k)?;
    let dim = 1usize << k;
    let half = dim / 2;
    // (1 - x^2)^half, spread onto even powers
    let sq = IntPolynomial::binomial_power(1, -1, half);
    let mut spread = vec![BigInt::zero(); dim + 1];
    for (j, c) in sq.coeffs().iter().enumerate() {
        spread[2 * j] = c.clone();
    }
    let spread = IntPolynomial::new(spread);
    let num = &(&IntPolynomial::binomial_power(1, 1, dim) + &IntPolynomial::binomial_power(1, -1, dim))
        + &spread.scale(&BigInt::from(2 * (dim - 1)));
    num.div_exact(&(BigInt::one() << (k + 1))).ok_or_else(|| {
        Error::InternalConsistency("g(x) numerator not divisible by 2^(k+1)".into())
    })
}

/// `g(x) = [f(x) + f(-x)]/2 + x [f(x) - f(-x)]/2`: parity split of `f`.
pub fn extend_generating_function(f: &IntPolynomial) -> Result<IntPolynomial> {
    let two = BigInt::from(2);
    let fr = f.reflect();
    let even = (f + &fr)
        .div_exact(&two)
        .ok_or_else(|| Error::InternalConsistency("even part not integral".into()))?;
    let odd = (f - &fr)
        .div_exact(&two)
        .ok_or_else(|| Error::InternalConsistency("odd part not integral".into()))?;
    Ok(&even + &(&IntPolynomial::x() * &odd))
}

/// Weights after appending a parity bit: `W(j) + W(j-1)` for even `j`, zero
/// for odd `j`.
pub fn extend_distribution(w: &WeightDistribution) -> WeightDistribution {
    let dim = w.length() + 1;
    let counts = (0..=dim)
        .map(|j| {
            if j % 2 == 1 {
                BigUint::zero()
            } else {
                let prev = if j > 0 { w.count(j - 1) } else { BigUint::zero() };
                w.count(j) + prev
            }
        })
        .collect();
    WeightDistribution { counts }
}

/// Extended Hamming weights `V(j)`: `W(j) + W(j-1)` for even `j`, zero for odd.
///
/// The result is checked against both the parity split of `f(x)` and the
/// closed form of `g(x)`.
pub fn extended_weights(k: u32) -> Result<WeightDistribution> {
    let v = extend_distribution(&hamming_weights_recurrence(k)?);
    let g_closed = extended_generating_function(k)?;
    let g_split = extend_generating_function(&hamming_generating_function(k)?)?;
    let vp = v.to_polynomial();
    if vp != g_closed || vp != g_split {
        return Err(Error::InternalConsistency(
            "V(j) disagrees with the g(x) expansions".into(),
        ));
    }
    Ok(v)
}

/// `H(j) = 2^{2^k - j} V(j)`: points contributed by weight-`j` codewords.
pub fn points_per_weight(k: u32) -> Result<Vec<BigUint>> {
    let v = extended_weights(k)?;
    let dim = 1usize << k;
    Ok((0..=dim).map(|j| v.count(j) << (dim - j)).collect())
}

/// `(3^n + 2(n-1) 3^{n/2} + 1) / (2n)` with `n = 2^k`: size of the base packing.
pub fn base_count(k: u32) -> Result<BigUint> {
    check_k(k)?;
    let dim = 1u32 << k;
    let three = BigUint::from(3u32);
    let num = three.pow(dim) + BigUint::from(2 * (dim - 1)) * three.pow(dim / 2) + BigUint::one();
    let den = BigUint::from(2 * dim);
    let (q, r) = num.div_rem(&den);
    if !r.is_zero() {
        return Err(Error::InternalConsistency("base count not integral".into()));
    }
    Ok(q)
}

/// Number of minimum-weight words in `RM(r, k)`:
/// `2^r Π_{i=0}^{k-r-1} (2^{k-i} - 1) / (2^{k-r-i} - 1)`, evaluated as one
/// fraction.
pub fn rm_min_weight_count(r: u32, k: u32) -> Result<BigUint> {
    if !(2..=MAX_K).contains(&k) || r + 2 > k {
        return Err(invalid(format!("need 0 <= r <= k-2 and k <= {MAX_K}, got r={r}, k={k}")));
    }
    let one = BigUint::one();
    let mut num = &one << r;
    let mut den = one.clone();
    for i in 0..(k - r) {
        num *= (&one << (k - i)) - &one;
        den *= (&one << (k - r - i)) - &one;
    }
    let (q, rem) = num.div_rem(&den);
    if !rem.is_zero() {
        return Err(Error::InvalidParameterCombination(format!(
            "A(r={r}, k={k}) product not integral"
        )));
    }
    Ok(q)
}

/// Histogram of codeword weights by exhaustive (parallel) enumeration.
pub fn weights_bruteforce(c: &LinearCode, cap: usize) -> Result<WeightDistribution> {
    codes::check_enumerable(c, cap)?;
    let len = c.length();
    let total = 1u64 << c.dimension();
    let hist = codes::par_fold_ranges(
        c,
        total,
        || vec![0u64; len + 1],
        |h, w| h[w.weight()] += 1,
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        },
    );
    WeightDistribution::new(hist.into_iter().map(BigUint::from).collect())
}

/// `g(1) = 2^{2^k - k - 1}`, the number of extended Hamming codewords.
pub fn extended_codeword_count(k: u32) -> Result<BigUint> {
    let g = extended_generating_function(k)?;
    g.eval(&BigInt::one())
        .to_biguint()
        .ok_or_else(|| Error::InternalConsistency("g(1) negative".into()))
}
