//! Structural certificate: the distance-at-least-1 argument for a layered
//! construction, checked as a list of exact inequalities.
//!
//! Every point of a layer with exponent `m` has the odd value `l / 2^m` on
//! the support of its codeword and integers elsewhere. Two points `p ≠ q`
//! then fall into one of these cases, each giving `|p - q|^2 >= c · g^2`
//! for a coordinate count `c` and per-coordinate gap `g`:
//!
//! - (a) same codeword, same multiplier: some off-support coordinate differs
//!   by 1.
//! - (b) exponents `m1 > m2`: on all `w(v1) >= d1` support coordinates of the
//!   finer point the other point's coordinate has a coarser denominator, so
//!   the gap is at least `2^{-m1}`. The same codeword with two multipliers
//!   gives gap `2^{1-m}` on `w(v) >= d` coordinates.
//! - (c) same layer, different codewords: on the `>= d` coordinates of
//!   `supp(v1 ⊕ v2)` one value is an odd multiple of `2^{-m}` and the other an
//!   integer.
//! - (d) dimension-16 augmentation: quarter points differ from each other in
//!   `>= d` coordinates by 1/2, and from points with denominator at most 2
//!   in every coordinate by at least 1/4.
//!
//! Each distance parameter `d` is the code's claimed minimum distance, and
//! the claim itself is checked separately.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::codes::{self, BitWord, LinearCode};
use crate::error::{invalid, Error, Result};
use crate::packing::{construction_layers, Construction, Layer};

/// How a claimed minimum distance was checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinDistanceCheck {
    pub method: String,
    pub claimed: usize,
    /// Exact minimum weight when the code was enumerated.
    pub observed: Option<usize>,
    /// True iff the true minimum distance is at least the claim.
    pub verified: bool,
}

/// Verifies that every nonzero codeword has weight at least the claim.
///
/// Small codes are enumerated. Larger codes with a claim of at most 4 are
/// checked on the parity-check matrix: distance `>= d` iff no `d - 1` of its
/// columns sum to zero.
pub fn verify_min_distance(code: &LinearCode, cap: usize) -> MinDistanceCheck {
    let claimed = code.claimed_min_distance();
    if code.dimension() == 0 {
        return MinDistanceCheck {
            method: "vacuous".into(),
            claimed,
            observed: None,
            verified: true,
        };
    }
    match codes::min_weight(code, cap) {
        Ok(w) => {
            return MinDistanceCheck {
                method: "enumeration".into(),
                claimed,
                observed: Some(w),
                verified: w >= claimed,
            }
        }
        Err(Error::EnumerationRefused { .. }) => {}
        Err(_) => {
            return MinDistanceCheck {
                method: "unverifiable".into(),
                claimed,
                observed: None,
                verified: false,
            }
        }
    }
    if claimed <= 4 {
        let h = code.parity_check();
        let cols: Vec<BitWord> = (0..h.n_cols()).map(|c| h.column(c)).collect();
        return MinDistanceCheck {
            method: "parity-check columns".into(),
            claimed,
            observed: None,
            verified: no_small_dependency(&cols, claimed - 1),
        };
    }
    MinDistanceCheck {
        method: "unverifiable".into(),
        claimed,
        observed: None,
        verified: false,
    }
}

/// True iff no nonempty set of at most `size` (≤ 3) columns sums to zero.
fn no_small_dependency(cols: &[BitWord], size: usize) -> bool {
    debug_assert!(size <= 3);
    if size >= 1 && cols.iter().any(BitWord::is_zero) {
        return false;
    }
    let mut index: HashMap<&BitWord, usize> = HashMap::new();
    for (i, c) in cols.iter().enumerate() {
        if size >= 2 && index.insert(c, i).is_some() {
            return false;
        }
    }
    if size >= 3 {
        for i in 0..cols.len() {
            for j in i + 1..cols.len() {
                let x = cols[i].xor(&cols[j]);
                if index.get(&x).is_some_and(|&t| t != i && t != j) {
                    return false;
                }
            }
        }
    }
    true
}

/// One checked statement of the certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateCase {
    pub name: String,
    pub verified: bool,
    pub witness: BTreeMap<String, String>,
    /// Human-readable inequality, empty for non-numeric checks.
    pub inequality: String,
    /// `lhs - 1` as an exact rational, empty for non-numeric checks.
    pub margin: String,
}

/// The full certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub cases: Vec<CertificateCase>,
    /// False when some minimum distance could not be checked.
    pub complete: bool,
    pub overall: bool,
}

impl CertificateReport {
    pub fn case(&self, prefix: &str) -> impl Iterator<Item = &CertificateCase> {
        let prefix = prefix.to_string();
        self.cases.iter().filter(move |c| c.name.starts_with(&prefix))
    }
}

/// Layers of a construction plus the optional dimension-16 augmentation code.
#[derive(Clone, Debug)]
pub struct StructuralInput {
    pub layers: Vec<Layer>,
    pub augmentation: Option<LinearCode>,
}

/// Certificate for a named construction.
pub fn verify_structural(
    construction: Construction,
    k: u32,
    cap: usize,
) -> Result<CertificateReport> {
    let layers = construction_layers(construction, k)?;
    let augmentation = match construction {
        Construction::Augmented16 => Some(codes::extended_hamming(4)?),
        _ => None,
    };
    verify_structural_layers(
        &StructuralInput {
            layers,
            augmentation,
        },
        cap,
    )
}

/// A slice of a layer sharing one denominator exponent. The zero codeword of
/// a layer that keeps it forms its own exponent-0 slice (the cube vertices).
struct Slice<'a> {
    name: String,
    exp: u32,
    /// Minimum weight of the codewords in the slice; `None` for vertices.
    min_weight: Option<usize>,
    layer: &'a Layer,
}

fn rat(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn pow4(e: u32) -> BigInt {
    BigInt::one() << (2 * e)
}

fn witness(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

/// `count · gap^2 >= 1` with `gap = gap_num / 2^gap_exp`.
fn inequality_case(
    name: String,
    count: usize,
    gap_num: u32,
    gap_exp: u32,
    w: BTreeMap<String, String>,
) -> CertificateCase {
    let lhs = rat(BigInt::from(count) * BigInt::from(gap_num) * BigInt::from(gap_num), pow4(gap_exp));
    let margin = &lhs - BigRational::one();
    CertificateCase {
        name,
        verified: !margin.is_negative(),
        witness: w,
        inequality: format!("{count} * ({gap_num}/2^{gap_exp})^2 >= 1"),
        margin: margin.to_string(),
    }
}

fn plain_case(name: String, verified: bool, w: BTreeMap<String, String>) -> CertificateCase {
    CertificateCase {
        name,
        verified,
        witness: w,
        inequality: String::new(),
        margin: String::new(),
    }
}

/// Checks the case analysis for an explicit layer list.
pub fn verify_structural_layers(input: &StructuralInput, cap: usize) -> Result<CertificateReport> {
    let layers = &input.layers;
    let Some(first) = layers.first() else {
        return Err(invalid("no layers to certify"));
    };
    let dim = first.dim();
    if layers.iter().any(|l| l.dim() != dim) {
        return Err(invalid("layers have different dimensions"));
    }
    let mut cases = Vec::new();
    let mut complete = true;

    let mut slices = Vec::new();
    for layer in layers {
        let check = verify_min_distance(layer.code(), cap);
        complete &= check.method != "unverifiable";
        cases.push(plain_case(
            format!("min-distance [{}]", layer.name()),
            check.verified,
            witness(&[
                ("code", layer.code().params_string()),
                ("method", check.method.clone()),
                ("claimed", check.claimed.to_string()),
                (
                    "observed",
                    check.observed.map_or("-".into(), |w| w.to_string()),
                ),
            ]),
        ));

        let m = layer.denom_exp();
        let odd_ok = m >= 1
            && layer
                .multipliers()
                .iter()
                .all(|&l| l % 2 == 1 && (l as u64) < (1u64 << m));
        cases.push(plain_case(
            format!("multipliers [{}]", layer.name()),
            odd_ok,
            witness(&[
                ("m", m.to_string()),
                ("l", format!("{:?}", layer.multipliers())),
            ]),
        ));

        if layer.includes_zero_codeword() {
            slices.push(Slice {
                name: format!("{}:vertices", layer.name()),
                exp: 0,
                min_weight: None,
                layer,
            });
        }
        if layer.code().dimension() > 0 {
            slices.push(Slice {
                name: layer.name().to_string(),
                exp: m,
                min_weight: Some(layer.code().claimed_min_distance()),
                layer,
            });
        }
    }

    let exps: HashSet<u32> = slices.iter().map(|s| s.exp).collect();
    cases.push(plain_case(
        "distinct exponents".into(),
        exps.len() == slices.len(),
        witness(&[(
            "exponents",
            format!("{:?}", slices.iter().map(|s| s.exp).collect::<Vec<_>>()),
        )]),
    ));

    for s in &slices {
        // (a) off-support integer coordinate differs by exactly 1
        cases.push(inequality_case(
            format!("a: same codeword, same multiplier [{}]", s.name),
            1,
            1,
            0,
            witness(&[("slice", s.name.clone())]),
        ));
    }

    for s in &slices {
        let Some(d) = s.min_weight else { continue };
        if s.layer.multipliers().len() > 1 {
            cases.push(inequality_case(
                format!("b: same codeword, different multipliers [{}]", s.name),
                d,
                2,
                s.exp,
                witness(&[("d", d.to_string()), ("m", s.exp.to_string())]),
            ));
        }
        cases.push(inequality_case(
            format!("c: different codewords [{}]", s.name),
            d,
            1,
            s.exp,
            witness(&[("d", d.to_string()), ("m", s.exp.to_string())]),
        ));
    }

    for fine in &slices {
        let Some(d) = fine.min_weight else { continue };
        for coarse in slices.iter().filter(|c| c.exp < fine.exp) {
            cases.push(inequality_case(
                format!("b: exponents {} > {} [{} vs {}]", fine.exp, coarse.exp, fine.name, coarse.name),
                d,
                1,
                fine.exp,
                witness(&[
                    ("d1", d.to_string()),
                    ("m1", fine.exp.to_string()),
                    ("m2", coarse.exp.to_string()),
                ]),
            ));
        }
    }

    if let Some(aug) = &input.augmentation {
        if aug.length() != dim {
            return Err(invalid("augmentation code length differs from layer dimension"));
        }
        let check = verify_min_distance(aug, cap);
        complete &= check.method != "unverifiable";
        cases.push(plain_case(
            "min-distance [augmentation]".into(),
            check.verified,
            witness(&[
                ("code", aug.params_string()),
                ("method", check.method.clone()),
                ("claimed", check.claimed.to_string()),
                (
                    "observed",
                    check.observed.map_or("-".into(), |w| w.to_string()),
                ),
            ]),
        ));
        let d = aug.claimed_min_distance();
        cases.push(inequality_case(
            "d: augmentation points pairwise".into(),
            d,
            1,
            1,
            witness(&[("d", d.to_string())]),
        ));
        for s in &slices {
            let name = format!("d: augmentation vs [{}]", s.name);
            let w = witness(&[("m", s.exp.to_string()), ("dim", dim.to_string())]);
            let case = match (s.exp, s.min_weight) {
                // odd quarters against multiples of 1/2: every coordinate
                (0 | 1, _) => inequality_case(name, dim, 1, 2, w),
                (2, _) => inequality_case(name, 0, 1, 2, w),
                (m, Some(dl)) => inequality_case(name, dl, 1, m, w),
                (_, None) => inequality_case(name, dim, 1, 2, w),
            };
            cases.push(case);
        }
    }

    let overall = complete && cases.iter().all(|c| c.verified);
    Ok(CertificateReport {
        cases,
        complete,
        overall,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::DEFAULT_ENUM_CAP;
    use crate::packing::LayerSpec;

    fn margin_of<'a>(r: &'a CertificateReport, prefix: &str) -> &'a str {
        &r.case(prefix).next().unwrap_or_else(|| panic!("no case {prefix}")).margin
    }

    #[test]
    fn base_k3_all_cases_hold() {
        let r = verify_structural(Construction::Base, 3, DEFAULT_ENUM_CAP).unwrap();
        assert!(r.overall && r.complete, "{r:#?}");
        assert_eq!(margin_of(&r, "c: different codewords [base]"), "0");
        assert_eq!(margin_of(&r, "b: exponents 1 > 0"), "0");
    }

    #[test]
    fn base_all_k() {
        for k in 2..=6 {
            let r = verify_structural(Construction::Base, k, DEFAULT_ENUM_CAP).unwrap();
            assert!(r.overall, "k={k}: {r:#?}");
        }
        let r6 = verify_structural(Construction::Base, 6, DEFAULT_ENUM_CAP).unwrap();
        let md = r6.case("min-distance [base]").next().unwrap();
        assert_eq!(md.witness["method"], "parity-check columns");
    }

    #[test]
    fn general_k5_tight_cross_layer_case() {
        let r = verify_structural(Construction::General, 5, DEFAULT_ENUM_CAP).unwrap();
        assert!(r.overall, "{r:#?}");
        let b = r.case("b: exponents 2 > 1 [r=1 vs base]").next().unwrap();
        assert_eq!(b.inequality, "16 * (1/2^2)^2 >= 1");
        assert_eq!(b.margin, "0");
    }

    #[test]
    fn general_k4_and_k6() {
        for k in [4, 6] {
            let r = verify_structural(Construction::General, k, DEFAULT_ENUM_CAP).unwrap();
            assert!(r.overall, "k={k}: {r:#?}");
        }
    }

    #[test]
    fn augmented16_certificate() {
        let r = verify_structural(Construction::Augmented16, 4, DEFAULT_ENUM_CAP).unwrap();
        assert!(r.overall, "{r:#?}");
        assert_eq!(margin_of(&r, "d: augmentation vs [base]"), "0");
        assert_eq!(margin_of(&r, "d: augmentation points pairwise"), "0");
    }

    #[test]
    fn falsified_distance_fails_case_c() {
        let base = Layer::base(4).unwrap();
        let weak = base.code().clone().with_claimed_min_distance(2).unwrap();
        let spec = LayerSpec::new(2, 4).unwrap();
        let layer = Layer::with_code(&spec, weak).unwrap();
        let input = StructuralInput {
            layers: vec![layer],
            augmentation: None,
        };
        let r = verify_structural_layers(&input, DEFAULT_ENUM_CAP).unwrap();
        assert!(!r.overall);
        let c = r.case("c: different codewords").next().unwrap();
        assert!(!c.verified);
        assert_eq!(c.margin, "-1/2");
        // the weaker claim is still a true lower bound
        assert!(r.case("min-distance").next().unwrap().verified);
    }

    #[test]
    fn overclaimed_distance_is_caught() {
        let code = codes::reed_muller(1, 4).unwrap().with_claimed_min_distance(16).unwrap();
        let check = verify_min_distance(&code, DEFAULT_ENUM_CAP);
        assert!(!check.verified);
        assert_eq!(check.observed, Some(8));
    }

    #[test]
    fn parity_check_route_agrees_with_enumeration() {
        for k in 3..=5 {
            let code = codes::extended_hamming(k).unwrap();
            let enumerated = verify_min_distance(&code, DEFAULT_ENUM_CAP);
            let by_columns = verify_min_distance(&code, 0);
            assert_eq!(by_columns.method, "parity-check columns");
            assert_eq!(enumerated.verified, by_columns.verified);
            let bad = code.clone().with_claimed_min_distance(5).unwrap();
            assert!(!verify_min_distance(&bad, DEFAULT_ENUM_CAP).verified);
            // Hamming code itself has distance 3: claim 4 must fail by columns
            let ham = codes::hamming_code(k).unwrap().with_claimed_min_distance(4).unwrap();
            assert!(!verify_min_distance(&ham, 0).verified);
        }
    }

    #[test]
    fn unverifiable_claim_marks_certificate_incomplete() {
        let code = codes::reed_muller(1, 7).unwrap();
        let check = verify_min_distance(&code, 0);
        assert_eq!(check.method, "unverifiable");
        let spec = LayerSpec::new(1, 7).unwrap();
        let input = StructuralInput {
            layers: vec![Layer::with_code(&spec, code).unwrap()],
            augmentation: None,
        };
        let r = verify_structural_layers(&input, 0).unwrap();
        assert!(!r.complete && !r.overall);
    }

    #[test]
    fn augmentation_with_quarter_layer_fails() {
        let mut layers = construction_layers(Construction::General, 4).unwrap();
        layers.truncate(2);
        let input = StructuralInput {
            layers,
            augmentation: Some(codes::extended_hamming(4).unwrap()),
        };
        let r = verify_structural_layers(&input, DEFAULT_ENUM_CAP).unwrap();
        assert!(!r.overall);
        assert!(!r.case("d: augmentation vs [r=0]").next().unwrap().verified);
    }
}
