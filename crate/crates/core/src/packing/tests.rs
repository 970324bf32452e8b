use std::collections::{BTreeMap, HashSet};

use super::*;
use crate::codes::DEFAULT_ENUM_CAP;

fn within_unit_cube(p: &DyadicPoint) -> bool {
    let one = 1u64 << p.denom_exp();
    p.numerators().iter().all(|&x| (x as u64) <= one)
}

#[test]
fn base_k2_is_vertices_plus_center() {
    let pts: Vec<DyadicPoint> = build_base(2).unwrap().collect();
    assert_eq!(pts.len(), 17);
    let vertices = pts.iter().filter(|p| p.denom_exp() == 0).count();
    assert_eq!(vertices, 16);
    assert!(pts.contains(&DyadicPoint::new(1, vec![1; 4]).unwrap()));
    // ε in binary-counter order, leftmost position most significant
    assert_eq!(pts[0].numerators(), &[0, 0, 0, 0]);
    assert_eq!(pts[1].numerators(), &[0, 0, 0, 1]);
    assert_eq!(pts[2].numerators(), &[0, 0, 1, 0]);
}

#[test]
fn base_k3_counts_by_weight_class() {
    let set = build_base(3).unwrap().materialize(DEFAULT_MAX_POINTS).unwrap();
    assert_eq!(set.len(), 481);
    let classes = weight_class_breakdown(&set);
    let expect: BTreeMap<usize, u64> = [(0, 256), (4, 224), (8, 1)].into_iter().collect();
    assert_eq!(classes, expect);
    assert_eq!(set.duplicate_count(), 0);
    assert!(set.iter().all(|p| within_unit_cube(&p)));
}

#[test]
fn per_codeword_emission_matches_formula() {
    // RM(1,4) words at exponent 2: two multipliers, 2^{16-w} assignments each
    let spec = LayerSpec::new(0, 4).unwrap();
    let layer = Layer::with_code(&spec, codes::reed_muller(1, 4).unwrap()).unwrap();
    let mut by_support: BTreeMap<String, u64> = BTreeMap::new();
    let mut total = 0u64;
    for p in layer.stream().unwrap() {
        assert_eq!(p.denom_exp(), 2);
        assert!(within_unit_cube(&p));
        *by_support.entry(p.fractional_support().to_string()).or_default() += 1;
        total += 1;
    }
    assert_eq!(total, 30 * 2 * 256 + 2);
    assert_eq!(by_support.len(), 31);
    for (support, n) in by_support {
        let w = support.matches('1').count();
        assert_eq!(n, 2 << (16 - w), "support {support}");
    }
}

#[test]
fn rm_layer_r0_k4_is_two_points() {
    let spec = LayerSpec::new(0, 4).unwrap();
    assert_eq!(spec.l_values, vec![1, 3]);
    let pts: Vec<DyadicPoint> = build_rm_layer(&spec, DEFAULT_ENUM_CAP).unwrap().collect();
    assert_eq!(
        pts,
        vec![
            DyadicPoint::new(2, vec![1; 16]).unwrap(),
            DyadicPoint::new(2, vec![3; 16]).unwrap()
        ]
    );
}

#[test]
fn rm_layer_r1_k5_count() {
    let spec = LayerSpec::new(1, 5).unwrap();
    let expect = BigUint::from(62u64 * 2 * (1 << 16) + 2);
    assert_eq!(rm_layer_count(&spec, DEFAULT_ENUM_CAP).unwrap(), expect);
    let s = build_rm_layer(&spec, DEFAULT_ENUM_CAP).unwrap();
    assert_eq!(s.expected_count(), &BigUint::from(8_126_466u64));
    assert_eq!(rm_layer_lower(&spec).unwrap(), BigUint::from(8_126_464u64));
}

#[test]
fn rm_layer_rejects_base_order() {
    let spec = LayerSpec::new(2, 4).unwrap();
    assert!(build_rm_layer(&spec, DEFAULT_ENUM_CAP).is_err());
}

#[test]
fn layer_spec_validation() {
    assert!(LayerSpec::new(1, 4).is_err());
    assert!(LayerSpec::new(4, 4).is_err());
    for (r, k) in [(0, 4), (1, 5), (0, 6), (1, 7), (0, 8)] {
        let s = LayerSpec::new(r, k).unwrap();
        assert_eq!(s.l_values.len(), 1 << (s.m - 1));
        assert!(s.l_values.iter().all(|&l| l % 2 == 1 && l < 1 << s.m));
    }
}

#[test]
fn general_orders() {
    assert_eq!(general_layer_orders(4), vec![0]);
    assert_eq!(general_layer_orders(5), vec![1]);
    assert_eq!(general_layer_orders(6), vec![0, 2]);
    assert_eq!(general_layer_orders(7), vec![1, 3]);
    assert_eq!(general_layer_orders(3), Vec::<u32>::new());
}

#[test]
fn augmented16_points() {
    let pts: Vec<DyadicPoint> = build_augmented16().unwrap().collect();
    assert_eq!(pts.len(), 2048);
    assert_eq!(pts[0], DyadicPoint::new(2, vec![3; 16]).unwrap());
    assert!(pts.contains(&DyadicPoint::new(2, vec![1; 16]).unwrap()));
    assert!(pts.iter().all(|p| p.denom_exp() == 2 && p.is_normalized()));
    let keys: HashSet<Vec<u8>> = pts.iter().map(|p| canonical_key(p).unwrap()).collect();
    assert_eq!(keys.len(), 2048);
}

#[test]
fn counts() {
    let c4 = count_general(4, CountMode::Exact, DEFAULT_ENUM_CAP).unwrap();
    assert_eq!(c4.total, BigUint::from(1_351_363u64));
    assert!(c4.exact);
    let e5 = count_general(5, CountMode::Exact, DEFAULT_ENUM_CAP).unwrap();
    let l5 = count_general(5, CountMode::Lower, DEFAULT_ENUM_CAP).unwrap();
    let base5 = weights::base_count(5).unwrap();
    assert_eq!(e5.total, &base5 + BigUint::from(8_126_466u64));
    assert_eq!(l5.total, &base5 + BigUint::from(8_126_464u64));
    assert!(!l5.exact);
    assert_eq!(&e5.total - &l5.total, BigUint::from(2u32));
    // RM(3,7) has dimension 64: exact mode falls back and flags it
    let e7 = count_general(7, CountMode::Exact, DEFAULT_ENUM_CAP).unwrap();
    assert!(!e7.exact);
    assert_eq!(e7.per_layer.len(), 3);
    assert_eq!(e7.total, e7.per_layer.values().sum::<BigUint>());
}

#[test]
fn base_k5_refuses_materialization() {
    let s = build_base(5).unwrap();
    let n = s.expected_count().clone();
    match s.materialize(DEFAULT_MAX_POINTS) {
        Err(Error::MaterializationRefused { count, .. }) => assert_eq!(count, n.to_string()),
        other => panic!("expected refusal, got {:?}", other.map(|s| s.len())),
    }
}

#[test]
fn sampled_points_belong_to_layer() {
    use rand::SeedableRng;
    let layer = Layer::base(5).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let set = layer.sample(500, &mut rng).unwrap();
    assert_eq!(set.len(), 500);
    for p in set.iter() {
        let supp = p.fractional_support();
        assert!(supp.is_zero() || p.denom_exp() == 1);
        assert!(layer.code().contains(&supp));
    }
}
