//! Lower bounds on the size of the layered packing from minimum-weight
//! codewords alone, and the closed forms they approximate.
//!
//! With `r' = k - r`, the minimum-weight words of `RM(r, k)` contribute
//! `2^{2^k - 2^{r'} + r'/2 - 1} · (2^k / 2^{r'}) · [k choose r']_2` points,
//! where `[k choose r']_2 = Π_{i<r'} (2^k - 2^i) / (2^{r'} - 2^i)` is a
//! Gaussian binomial coefficient.
//!
//! `leech_l` below is the constant 4.768462 of the asymptotic estimate. It
//! is used exactly as printed; [`leech_ratio`] gives the finite partial sums
//! that approach it.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::codes::MAX_K;
use crate::error::{invalid, Error, Result};
use crate::packing::rm_layer_lower;
use crate::packing::LayerSpec;
use crate::weights;

/// `4.768462` as an exact fraction.
pub fn leech_l() -> BigRational {
    BigRational::new(BigInt::from(4_768_462u32), BigInt::from(1_000_000u32))
}

fn check_k(k: u32, lo: u32) -> Result<()> {
    if !(lo..=MAX_K).contains(&k) {
        return Err(invalid(format!("bounds need {lo} <= k <= {MAX_K}, got {k}")));
    }
    Ok(())
}

fn pow2(e: u64) -> BigUint {
    BigUint::one() << e
}

/// `(2^k / 2^{r'}) · Π_{i<r'} (2^k - 2^i) / (2^{r'} - 2^i)`, evaluated as one
/// fraction and required to divide exactly.
fn flag_product(k: u32, rp: u32) -> Result<BigUint> {
    let mut num = pow2(k as u64);
    let mut den = pow2(rp as u64);
    for i in 0..rp {
        num *= pow2(k as u64) - pow2(i as u64);
        den *= pow2(rp as u64) - pow2(i as u64);
    }
    let (q, rem) = num.div_rem(&den);
    if !rem.is_zero() {
        return Err(Error::InternalConsistency(format!(
            "product for k={k}, r'={rp} is not integral"
        )));
    }
    Ok(q)
}

fn term_exponent(k: u32, rp: u32) -> i64 {
    (1i64 << k) - (1i64 << rp) + rp as i64 / 2 - 1
}

fn leech_exponent(rp: u32) -> u64 {
    let rp = rp as u64;
    rp * rp / 2 + rp / 2 + 1
}

/// `(r', term)` for even `r'` from 4 to `2⌊k/2⌋`.
pub fn lower_bound_terms(k: u32) -> Result<Vec<(u32, BigUint)>> {
    check_k(k, 4)?;
    let mut out = Vec::new();
    for rp in (4..=2 * (k / 2)).step_by(2) {
        let e = term_exponent(k, rp);
        debug_assert!(e >= 0);
        out.push((rp, pow2(e as u64) * flag_product(k, rp)?));
    }
    Ok(out)
}

/// `base_count(k)` plus every minimum-weight term, cross-checked term by term
/// against the layer-wise minimum-weight counts.
pub fn lower_bound_exact(k: u32) -> Result<BigUint> {
    let mut total = weights::base_count(k)?;
    for (rp, term) in lower_bound_terms(k)? {
        let layer = rm_layer_lower(&LayerSpec::new(k - rp, k)?)?;
        if layer != term {
            return Err(Error::InternalConsistency(format!(
                "term r'={rp} disagrees with layer count for k={k}"
            )));
        }
        total += term;
    }
    Ok(total)
}

fn int(x: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// `(2/3) n [(n-1)(n-2) - 3]`, the quantity the closed forms subtract.
pub fn printed_subtraction(k: u32) -> BigRational {
    let n = BigInt::from(1u64 << k);
    let inner = (&n - 1) * (&n - 2) - 3;
    BigRational::new(2 * n * inner, BigInt::from(3))
}

/// The closed-form estimate with `leech_l` substituted:
/// odd `k`: `base + l · 2^{k(k+1)/2} - (2/3) n [(n-1)(n-2) - 3]`,
/// even `k`: `base + (l - 2) · 2^{k(k+1)/2} - (2/3) n [(n-1)(n-2) - 3] + √n / 2`.
pub fn closed_form_value(k: u32) -> Result<BigRational> {
    check_k(k, 4)?;
    let base = int(weights::base_count(k)?);
    let big = int(pow2((k * (k + 1) / 2) as u64));
    let l = leech_l();
    let value = if k % 2 == 1 {
        base + l * big - printed_subtraction(k)
    } else {
        let half_sqrt = BigRational::new(BigInt::from(1u64 << (k / 2)), BigInt::from(2));
        base + (l - BigRational::from_integer(BigInt::from(2))) * big - printed_subtraction(k)
            + half_sqrt
    };
    Ok(value)
}

/// One side-by-side comparison of the two exponents of a term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentCheck {
    pub r_prime: u32,
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

/// `2^k - 2^{r'} + r'/2 - 1 >= r'^2/2 + r'/2 + 1` for every even `r'` in
/// `[4, 2⌊k/2⌋]`. For odd `k` all must hold; for even `k` the top term
/// `r' = k` fails, which the even-`k` closed form corrects for.
pub fn exponent_inequality_check(k: u32) -> Result<Vec<ExponentCheck>> {
    check_k(k, 4)?;
    Ok((4..=2 * (k / 2))
        .step_by(2)
        .map(|rp| {
            let lhs = term_exponent(k, rp);
            let rhs = leech_exponent(rp) as i64;
            ExponentCheck {
                r_prime: rp,
                lhs,
                rhs,
                holds: lhs >= rhs,
            }
        })
        .collect())
}

/// `Σ_{even r' < k} 2^{r'^2/2 + r'/2 + 1} · flag_product(k, r') / 2^{k(k+1)/2}`
/// for odd `k >= 5`.
pub fn leech_ratio(k: u32) -> Result<BigRational> {
    check_k(k, 5)?;
    if k % 2 == 0 {
        return Err(invalid(format!("leech ratio needs odd k, got {k}")));
    }
    let mut sum = BigUint::zero();
    for rp in (0..k).step_by(2) {
        sum += pow2(leech_exponent(rp)) * flag_product(k, rp)?;
    }
    Ok(BigRational::new(
        BigInt::from(sum),
        BigInt::from(pow2((k * (k + 1) / 2) as u64)),
    ))
}

/// The `r' ∈ {0, 2}` terms of the extended sum against the printed
/// subtraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionTerms {
    pub r0: BigUint,
    pub r2: BigUint,
    /// `(r0 + r2) - (2/3) n [(n-1)(n-2) - 3]`.
    pub gap: BigRational,
}

pub fn extension_terms(k: u32) -> Result<ExtensionTerms> {
    check_k(k, 2)?;
    let r0 = pow2(leech_exponent(0)) * flag_product(k, 0)?;
    let r2 = pow2(leech_exponent(2)) * flag_product(k, 2)?;
    let gap = int(&r0 + &r2) - printed_subtraction(k);
    Ok(ExtensionTerms { r0, r2, gap })
}

/// Decimal rendering with `digits` significant digits, rounded half up;
/// scientific notation outside `[1e-4, 1e12)`.
pub fn to_significant(x: &BigRational, digits: u32) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let sign = if x.is_negative() { "-" } else { "" };
    let x = x.abs();
    let ten = BigInt::from(10);
    let (num, den) = (x.numer().clone(), x.denom().clone());
    // e = floor(log10 x)
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    let scaled_ge = |e: i64| -> bool {
        if e >= 0 {
            num >= &den * ten.pow(e as u32)
        } else {
            &num * ten.pow((-e) as u32) >= den
        }
    };
    if !scaled_ge(e) {
        e -= 1;
    }
    let shift = digits as i64 - 1 - e;
    let (n2, d2) = if shift >= 0 {
        (&num * ten.pow(shift as u32), den.clone())
    } else {
        (num.clone(), &den * ten.pow((-shift) as u32))
    };
    let (q, r) = n2.div_rem(&d2);
    let mut m = if &r * 2 >= d2 { q + 1 } else { q };
    if m == ten.pow(digits) {
        m /= 10;
        e += 1;
    }
    let ds = m.to_string();
    if (-4..12).contains(&e) {
        let s = if e >= 0 {
            let int_len = e as usize + 1;
            if int_len >= ds.len() {
                format!("{ds}{}", "0".repeat(int_len - ds.len()))
            } else {
                format!("{}.{}", &ds[..int_len], &ds[int_len..])
            }
        } else {
            format!("0.{}{ds}", "0".repeat((-e - 1) as usize))
        };
        let s = if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        };
        format!("{sign}{s}")
    } else {
        let mant = format!("{}.{}", &ds[..1], &ds[1..]);
        let mant = mant.trim_end_matches('0').trim_end_matches('.');
        format!("{sign}{mant}e{e}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermEntry {
    pub r_prime: u32,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionEntry {
    pub r0: String,
    pub r2: String,
    pub printed_subtraction: String,
    pub gap: String,
}

/// Exact values are decimal integers or `p/q` strings; `*_decimal` fields
/// carry 10 significant digits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub k: u32,
    pub n: u64,
    pub base: String,
    pub terms: Vec<TermEntry>,
    pub sum_exact: String,
    pub lower_bound_exact: String,
    pub lower_bound_exact_decimal: String,
    pub closed_form_value: String,
    pub closed_form_value_decimal: String,
    pub leech_l: String,
    /// Only defined for odd `k >= 5`.
    pub leech_ratio: Option<String>,
    pub leech_ratio_decimal: Option<String>,
    pub exponent_checks: Vec<ExponentCheck>,
    pub extension: ExtensionEntry,
    pub discrepancy_4n_flag: bool,
}

pub fn bound_report(k: u32) -> Result<BoundReport> {
    check_k(k, 4)?;
    let base = weights::base_count(k)?;
    let terms = lower_bound_terms(k)?;
    let sum: BigUint = terms.iter().map(|(_, t)| t).sum();
    let lower = lower_bound_exact(k)?;
    if lower != &base + &sum {
        return Err(Error::InternalConsistency("lower bound does not add up".into()));
    }
    let closed = closed_form_value(k)?;
    let leech = if k % 2 == 1 { Some(leech_ratio(k)?) } else { None };
    let ext = extension_terms(k)?;
    let n = 1u64 << k;
    Ok(BoundReport {
        k,
        n,
        base: base.to_string(),
        terms: terms
            .iter()
            .map(|(rp, t)| TermEntry {
                r_prime: *rp,
                value: t.to_string(),
            })
            .collect(),
        sum_exact: sum.to_string(),
        lower_bound_exact_decimal: to_significant(&int(lower.clone()), 10),
        lower_bound_exact: lower.to_string(),
        closed_form_value_decimal: to_significant(&closed, 10),
        closed_form_value: closed.to_string(),
        leech_l: "4.768462".into(),
        leech_ratio_decimal: leech.as_ref().map(|r| to_significant(r, 10)),
        leech_ratio: leech.map(|r| r.to_string()),
        exponent_checks: exponent_inequality_check(k)?,
        discrepancy_4n_flag: ext.gap == BigRational::from_integer(BigInt::from(4 * n)),
        extension: ExtensionEntry {
            r0: ext.r0.to_string(),
            r2: ext.r2.to_string(),
            printed_subtraction: printed_subtraction(k).to_string(),
            gap: ext.gap.to_string(),
        },
    })
}
