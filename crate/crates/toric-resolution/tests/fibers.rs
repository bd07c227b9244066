mod common;

use common::BOUND;
use toric_core::{product_stacky_fan, standard, StackyMorphism};
use toric_resolution::*;

#[test]
fn golden_complexes_are_exact_off_y_and_have_koszul_tor_on_y() {
    let p1 = standard::projective_space(1);
    let p2 = standard::projective_space(2);
    for r in [
        build_resolution(&StackyMorphism::identity_point(&p1), BOUND).unwrap(),
        build_resolution(&StackyMorphism::identity_point(&p2), BOUND).unwrap(),
        diagonal_resolution(&p1, BOUND).unwrap(),
        diagonal_resolution(&p2, BOUND).unwrap(),
    ] {
        let report = fiber_exactness_check(&r, 100, 0).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
        assert!(report.on_y_trials >= 10);
        assert!(report.on_y_trials < 100);
    }
}

#[test]
fn stacky_and_product_examples_pass() {
    for fan in [
        standard::weighted_p1_2(),
        standard::hirzebruch(1),
        product_stacky_fan(&standard::projective_space(1), &standard::projective_space(1)),
    ] {
        let r = build_resolution(&StackyMorphism::identity_point(&fan), BOUND).unwrap();
        assert!(fiber_exactness_check(&r, 60, 3).unwrap().passed());
    }
}

#[test]
fn a_corrupted_differential_is_caught() {
    let p2 = standard::projective_space(2);
    let mut r = build_resolution(&StackyMorphism::identity_point(&p2), BOUND).unwrap();
    // dropping d_1 leaves C_0 unresolved everywhere
    r.complex.complex.differentials.remove(&1);
    let report = fiber_exactness_check(&r, 50, 0).unwrap();
    assert!(!report.passed());
    assert!(report.violations.iter().any(|v| !v.on_y));
}

#[test]
fn reports_are_reproducible_from_the_seed() {
    let p1 = standard::projective_space(1);
    let r = diagonal_resolution(&p1, BOUND).unwrap();
    let a = fiber_exactness_check(&r, 30, 11).unwrap();
    let b = fiber_exactness_check(&r, 30, 11).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.codim, 1);
}
