use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use toric_core::fan::standard;
use toric_core::lattice::{self, IntMatrix};
use toric_core::morphism::{sublattice_immersion, StackyMorphism};
use toric_core::*;

fn m(rows: &[&[i64]]) -> LatticeMap {
    IntMatrix::from_i64(rows)
}

#[test]
fn smith_small_cases() {
    let s = smith_normal_form(&m(&[&[2]]));
    assert_eq!(s.d, m(&[&[2]]));
    let id = IntMatrix::<Int>::identity(3);
    assert_eq!(smith_normal_form(&id).d, id);

    let a = m(&[&[2, 0], &[0, 3]]);
    let s = smith_normal_form(&a);
    assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
    assert_eq!(s.d, m(&[&[1, 0], &[0, 6]]));
}

/// Independent oracle: search all unimodular 2x2 matrices with small entries
/// for a pair reaching diag(1, 6), and confirm nothing reaches another
/// divisibility-chain diagonal.
#[test]
fn smith_brute_force_oracle() {
    let a = [[2i64, 0], [0, 3]];
    let mut unimodular = Vec::new();
    for p in -3..=3i64 {
        for q in -3..=3i64 {
            for r in -3..=3i64 {
                for s in -3..=3i64 {
                    if (p * s - q * r).abs() == 1 {
                        unimodular.push([[p, q], [r, s]]);
                    }
                }
            }
        }
    }
    let mul = |x: [[i64; 2]; 2], y: [[i64; 2]; 2]| {
        let mut z = [[0i64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                z[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
            }
        }
        z
    };
    let mut diagonals = std::collections::BTreeSet::new();
    for u in &unimodular {
        let ua = mul(*u, a);
        for v in &unimodular {
            let d = mul(ua, *v);
            if d[0][1] == 0 && d[1][0] == 0 && d[0][0] > 0 && d[1][1] > 0 && d[1][1] % d[0][0] == 0 {
                diagonals.insert((d[0][0], d[1][1]));
            }
        }
    }
    assert_eq!(diagonals.into_iter().collect::<Vec<_>>(), vec![(1, 6)]);
}

#[test]
fn cokernel_examples() {
    let c = cokernel_decomposition(&m(&[&[2]])).unwrap();
    assert_eq!((c.free_rank, c.torsion.clone()), (0, vec![int(2)]));
    assert_eq!(c.representatives, vec![ints(&[0]), ints(&[1])]);

    let c = cokernel_decomposition(&m(&[&[1, 1]])).unwrap();
    assert!(c.torsion.is_empty());
    assert_eq!(c.representatives, vec![ints(&[0])]);

    // the chart of P(1,2) at the ray with β-image -2
    let f = standard::weighted_p1_2();
    let beta_on_ray = IntMatrix::from_cols(&[f.beta().apply(&f.rays()[1])], 1);
    assert_eq!(lattice::cokernel_structure(&beta_on_ray).torsion, vec![int(2)]);

    assert_eq!(
        cokernel_decomposition(&m(&[&[0]])).unwrap_err().code(),
        "REPRESENTATIVES_INFINITE"
    );
}

#[test]
fn kernel_examples() {
    assert!(lattice::kernel_saturated_basis(&IntMatrix::<Int>::identity(2)).is_empty());
    assert_eq!(lattice::kernel_saturated_basis(&IntMatrix::<Int>::zeros(0, 2)), vec![ints(&[1, 0]), ints(&[0, 1])]);
    let k = lattice::kernel_saturated_basis(&m(&[&[1, 1]]));
    assert_eq!(k.len(), 1);
    // oracle: the primitive solutions of a + b = 0 are ±(1, -1)
    assert!(k[0] == ints(&[1, -1]) || k[0] == ints(&[-1, 1]));
}

#[test]
fn validation_reports() {
    assert!(validate_stacky_fan(&standard::projective_space(2).to_raw()).is_valid());
    let bad = RawFan {
        rank_l: 2,
        rank_n: 2,
        beta: vec![ints(&[1, 0]), ints(&[0, 1])],
        rays: vec![ints(&[2, 0]), ints(&[0, 1])],
        cones: vec![vec![0, 1]],
    };
    let r = validate_stacky_fan(&bad);
    assert!(matches!(r.violations[..], [fan::Violation::NonPrimitiveRay { ray: 0 }]));
    let bad = RawFan { rank_l: 1, rank_n: 1, beta: vec![ints(&[0])], rays: vec![ints(&[1])], cones: vec![vec![0]] };
    assert!(validate_stacky_fan(&bad).violations.contains(&fan::Violation::InfiniteCokernel));
    // overlapping cones
    let bad = RawFan {
        rank_l: 2,
        rank_n: 2,
        beta: vec![ints(&[1, 0]), ints(&[0, 1])],
        rays: vec![ints(&[1, 0]), ints(&[0, 1]), ints(&[1, 1])],
        cones: vec![vec![0, 1], vec![0, 2]],
    };
    assert!(matches!(validate_stacky_fan(&bad).violations[..], [fan::Violation::IncompatibleCones { .. }]));
    // face closure is completed with a note
    let raw = RawFan {
        rank_l: 2,
        rank_n: 2,
        beta: vec![ints(&[1, 0]), ints(&[0, 1])],
        rays: vec![ints(&[1, 0]), ints(&[0, 1])],
        cones: vec![vec![0, 1]],
    };
    let r = validate_stacky_fan(&raw);
    assert!(r.is_valid() && !r.notes.is_empty());
}

#[test]
fn classification_examples() {
    let p1 = standard::projective_space(1);
    let diag = StackyMorphism::diagonal(&p1);
    let c = diag.classify();
    assert!(c.inclusion && c.immersion && !c.open_inclusion && !c.finite_quotient);

    // identity with Phi extended by a zero column (a stabilization)
    let stab_source = StackyFan::from_i64(&[&[1, 0]], 2, &[&[1, 0], &[-1, 0]], &[&[0], &[1]]).unwrap();
    let stab = StackyMorphism::new(stab_source, p1.clone(), m(&[&[1, 0]]), m(&[&[1]])).unwrap();
    let c = stab.classify();
    assert!(c.stabilization_equivalence);
    assert!(!c.inclusion && !c.finite_quotient);

    // A^1 -> [A^1/(Z/2)]
    let a1 = standard::affine_space(1);
    let orb = standard::orbifold_line();
    let q = StackyMorphism::new(a1, orb, m(&[&[1]]), m(&[&[2]])).unwrap();
    let c = q.classify();
    assert!(c.change_of_group_finite_cokernel && c.finite_quotient);
    assert!(!c.inclusion && !c.stabilization_equivalence);

    let bad = StackyMorphism::new(standard::affine_space(1), standard::orbifold_line(), m(&[&[1]]), m(&[&[1]]));
    assert_eq!(bad.unwrap_err().code(), "INCOMPATIBLE_DIAGRAM");
}

#[test]
fn non_split_quotient_is_not_finite_quotient() {
    // Z/4 with a Z/2 subgroup: the sequence 0 -> Z/2 -> Z/4 -> Z/2 -> 0 does not split
    let f1 = StackyFan::from_i64(&[&[2]], 1, &[&[1]], &[&[0]]).unwrap();
    let f2 = StackyFan::from_i64(&[&[4]], 1, &[&[1]], &[&[0]]).unwrap();
    let q = StackyMorphism::new(f1, f2, m(&[&[1]]), m(&[&[2]])).unwrap();
    let c = q.classify();
    assert!(c.change_of_group_finite_cokernel && !c.finite_quotient);
}

#[test]
fn chart_covers() {
    let charts = smooth_stacky_chart_cover(&standard::projective_space(2)).unwrap();
    assert_eq!(charts.len(), 3);
    for ch in &charts {
        assert_eq!(ch.cone.len(), 2);
        let rays: Vec<Vec<Int>> = ch.cone.iter().map(|&r| standard::projective_space(2).rays()[r].clone()).collect();
        assert!(lattice::determinant(&IntMatrix::from_cols(&rays, 2)).abs().is_one());
        assert!(ch.inclusion.classify().open_inclusion);
    }
    let charts = smooth_stacky_chart_cover(&standard::non_separated_line()).unwrap();
    assert_eq!(charts.len(), 2);
    for ch in &charts {
        assert!(ch.inclusion.classify().open_inclusion);
        assert!(morphism::stabilization_basis(ch.inclusion.target(), &ch.cone).is_some());
    }
    // a cone of determinant 2 presented as a variety
    let singular = StackyFan::variety_i64(&[&[1, 0], &[1, 2]], &[&[0, 1]]).unwrap();
    let err = smooth_stacky_chart_cover(&singular).unwrap_err();
    assert_eq!(err.code(), "NOT_SMOOTHLY_COVERED");
}

#[test]
fn divisors_and_classes() {
    assert!(divisor_of_support(&SupportFunction::zero(3)).iter().all(|x| x.is_zero()));
    let p1 = standard::projective_space(1);
    let f = SupportFunction::from_i64(&[0, -3]);
    assert_eq!(f.divisor(), ints(&[0, 3]));
    let pic = PicGroup::of(&p1);
    assert!(pic.same_class(&f.divisor(), &ints(&[3, 0])));
    assert_eq!(pic.coordinates(&f.divisor(), &[0]), Some(ints(&[3])));
    assert_eq!(divisor_of_support(&SupportFunction::from_i64(&[1, 1, 1])), ints(&[-1, -1, -1]));

    assert!(pic.same_class(&ints(&[-1, 0]), &ints(&[0, -1])));

    let ns = standard::non_separated_line();
    let c = pic_canonical_form(&ints(&[3, 5]), &ns);
    assert_eq!(c, pic_canonical_form(&ints(&[4, 6]), &ns));
    assert_ne!(c, pic_canonical_form(&ints(&[4, 4]), &ns));
    assert!(c.coefficients[0].is_zero());

    let orb = standard::orbifold_line();
    let pic = PicGroup::of(&orb);
    assert!(!pic.same_class(&ints(&[0]), &ints(&[-1])));
    assert!(pic.same_class(&ints(&[0]), &ints(&[-2])));
    assert_eq!(pic.structure().torsion, vec![int(2)]);
}

#[test]
fn sections() {
    assert!(delta_beta_contains(&standard::point(), &SupportFunction::zero(0), &[]));
    let p1 = standard::projective_space(1);
    let f = SupportFunction::from_i64(&[0, -3]);
    for k in 0..=3 {
        assert!(delta_beta_contains(&p1, &f, &ints(&[k])));
    }
    assert!(!delta_beta_contains(&p1, &f, &ints(&[4])));
    assert!(!delta_beta_contains(&p1, &f, &ints(&[-1])));

    let orb = standard::orbifold_line();
    let f = SupportFunction::from_i64(&[-1]);
    assert!(delta_beta_contains(&orb, &f, &ints(&[0])));
    // β*m only takes even values, so the odd value −1 is never reached
    assert!(!(-5..5).any(|k| support::character_values(&orb, &ints(&[k]))[0] == int(-1)));
}

#[test]
fn pullbacks() {
    let p2 = standard::projective_space(2);
    let f = SupportFunction::from_i64(&[2, -1, 5]);
    let id = StackyMorphism::identity(&p2);
    assert_eq!(pullback_support(&id, &f).unwrap(), f);

    let charts = smooth_stacky_chart_cover(&p2).unwrap();
    for ch in &charts {
        let g = pullback_support(&ch.inclusion, &f).unwrap();
        let kept: Vec<Int> = ch.cone.iter().map(|&r| f.values[r].clone()).collect();
        assert_eq!(g.values, kept);
    }

    // Frobenius self-map of P^1 with ℓ = 2
    let p1 = standard::projective_space(1);
    let frob = StackyMorphism::new(p1.clone(), p1.clone(), m(&[&[2]]), m(&[&[2]])).unwrap();
    let f = SupportFunction::from_i64(&[3, -4]);
    assert_eq!(pullback_support(&frob, &f).unwrap().values, ints(&[6, -8]));

    // a ray mapped outside a non-complete fan
    let a1 = standard::affine_space(1);
    let neg = StackyMorphism::new_unchecked_cones(a1.clone(), a1.clone(), m(&[&[-1]]), m(&[&[-1]])).unwrap();
    assert_eq!(pullback_support(&neg, &SupportFunction::zero(1)).unwrap_err().code(), "RAY_IMAGE_OUTSIDE_SUPPORT");
}

#[test]
fn pullback_is_contravariant() {
    let p1 = standard::projective_space(1);
    let two = StackyMorphism::new(p1.clone(), p1.clone(), m(&[&[2]]), m(&[&[2]])).unwrap();
    let three = StackyMorphism::new(p1.clone(), p1.clone(), m(&[&[3]]), m(&[&[3]])).unwrap();
    let comp = two.then(&three).unwrap();
    let f = SupportFunction::from_i64(&[1, -2]);
    let lhs = pullback_support(&comp, &f).unwrap();
    let rhs = pullback_support(&two, &pullback_support(&three, &f).unwrap()).unwrap();
    assert_eq!(lhs, rhs);
}

#[test]
fn finite_quotient_pushforward() {
    let q = StackyMorphism::new(standard::affine_space(1), standard::orbifold_line(), m(&[&[1]]), m(&[&[2]])).unwrap();
    let parts = pushforward_support_finite_quotient(&q, &SupportFunction::zero(1)).unwrap();
    assert_eq!(parts.len(), 2);
    let pic = PicGroup::of(q.target());
    let mut classes: Vec<DivisorClass> = parts.iter().map(|(_, f)| pic.class_of_support(f)).collect();
    classes.sort();
    // O and O(F_1) with F_1 the support function taking value 1
    let mut expected = vec![pic.canonical(&ints(&[0])), pic.canonical(&ints(&[-1]))];
    expected.sort();
    assert_eq!(classes, expected);

    let id = StackyMorphism::identity(&standard::projective_space(1));
    let f = SupportFunction::from_i64(&[1, 0]);
    let parts = pushforward_support_finite_quotient(&id, &f).unwrap();
    assert_eq!(parts, vec![(ints(&[0]), f.clone())]);

    let p1 = standard::projective_space(1);
    let frob = StackyMorphism::new(p1.clone(), p1.clone(), m(&[&[2]]), m(&[&[2]])).unwrap();
    assert_eq!(pushforward_support_finite_quotient(&frob, &f).unwrap_err().code(), "NOT_FINITE_QUOTIENT");
}

#[test]
fn products() {
    let p1 = standard::projective_space(1);
    let pp = product_stacky_fan(&p1, &p1);
    assert_eq!((pp.num_rays(), pp.maximal_cones().len()), (4, 4));
    let a = product_stacky_fan(&standard::affine_space(1), &standard::affine_space(1));
    assert_eq!(a, standard::affine_space(2));
    let p2 = standard::projective_space(2);
    let pp = product_stacky_fan(&p2, &p2);
    assert_eq!((pp.num_rays(), pp.maximal_cones().len()), (6, 9));
    let d = product_morphism(&StackyMorphism::identity(&p1), &StackyMorphism::identity_point(&p1));
    assert_eq!(d.target(), &product_stacky_fan(&p1, &p1));
}

#[test]
fn sublattice_immersions() {
    let p1p1 = product_stacky_fan(&standard::projective_space(1), &standard::projective_space(1));
    let diag = sublattice_immersion(&p1p1, &[ints(&[1, 1])]).unwrap();
    let c = diag.classify();
    assert!(c.immersion);
    assert_eq!(diag.source().num_rays(), 2);
    let point = sublattice_immersion(&p1p1, &[]).unwrap();
    assert!(point.classify().immersion);
    assert_eq!(point.codim(), 2);
}

proptest! {
    #[test]
    fn pic_canonical_form_is_invariant(
        d in proptest::collection::vec(-20i64..20, 5),
        mm in proptest::collection::vec(-20i64..20, 2),
    ) {
        let f = standard::p2_blown_up_twice();
        let pic = PicGroup::of(&f);
        let d = ints(&d);
        let shift = support::character_values(&f, &ints(&mm));
        let moved: Vec<Int> = d.iter().zip(&shift).map(|(a, b)| a + b).collect();
        prop_assert_eq!(pic.canonical(&d), pic.canonical(&moved));
        let c = pic.canonical(&d);
        prop_assert_eq!(pic.canonical(&c.coefficients), c.clone());
    }

    #[test]
    fn smith_identity_holds(entries in proptest::collection::vec(-9i64..9, 12)) {
        let a = IntMatrix::<i64>::from_rows(entries.chunks(4).map(|c| c.to_vec()).collect(), 4);
        let s = smith_normal_form(&a);
        prop_assert_eq!(s.u.mul(&a).mul(&s.v), s.d.clone());
        prop_assert!(lattice::determinant(&s.u).abs() == 1);
        prop_assert!(lattice::determinant(&s.v).abs() == 1);
        let f = s.invariant_factors();
        for w in f.windows(2) {
            prop_assert!(w[1] % w[0] == 0);
        }
        prop_assert!(f.iter().all(|x| x.is_positive()));
    }
}

#[test]
fn blowing_up_a_point_of_p2_gives_the_first_hirzebruch_surface() {
    let p2 = toric_core::standard::projective_space(2);
    let f = toric_core::star_subdivision(&p2, &[0, 1]).unwrap();
    assert_eq!(f.num_rays(), 4);
    assert_eq!(f.maximal_cones().len(), 4);
    assert!(f.is_complete());
    assert!(toric_core::smooth_stacky_chart_cover(&f).is_ok());
    assert_eq!(f.rays()[3], vec![toric_core::int(1), toric_core::int(1)]);
    assert!(toric_core::star_subdivision(&p2, &[0]).is_err());
}
