use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric_core::fan::standard;
use toric_core::morphism::sublattice_immersion;
use toric_core::*;
use toric_strat::*;

fn classes(fan: &StackyFan, divisors: &[&[i64]]) -> BTreeSet<DivisorClass> {
    let pic = PicGroup::of(fan);
    divisors.iter().map(|d| pic.canonical(&ints(d))).collect()
}

#[test]
fn exit_torus_examples() {
    let p2 = standard::projective_space(2);
    let t = exit_torus(&StackyMorphism::identity_point(&p2)).unwrap();
    assert_eq!(t.codim, 2);
    assert_eq!(t.ray_functionals, vec![ints(&[1, 0]), ints(&[0, 1]), ints(&[-1, -1])]);

    let t = exit_torus(&StackyMorphism::identity(&p2)).unwrap();
    assert_eq!(t.codim, 0);
    assert!(t.basis.is_empty());

    let t = exit_torus(&StackyMorphism::diagonal(&standard::projective_space(1))).unwrap();
    assert_eq!(t.codim, 1);
    let sign = if t.basis[0] == ints(&[1, -1]) { 1 } else { -1 };
    let expected: Vec<Vec<Int>> = [1, -1, -1, 1].iter().map(|&x| ints(&[x * sign])).collect();
    assert_eq!(t.ray_functionals, expected);

    // a finite quotient is not an immersion
    let q = StackyMorphism::new(
        standard::affine_space(1),
        standard::orbifold_line(),
        IntMatrix::from_i64(&[&[1]]),
        IntMatrix::from_i64(&[&[2]]),
    )
    .unwrap();
    assert_eq!(exit_torus(&q).unwrap_err().code(), "NOT_IMMERSION");
}

#[test]
fn torsion_cokernel_is_rejected() {
    // the sublattice 2Z ⊂ Z is not saturated
    let a1 = standard::affine_space(1);
    let src = StackyFan::new(IntMatrix::identity(1), vec![ints(&[1])], vec![vec![0]]).unwrap();
    let m = StackyMorphism::new(src, a1, IntMatrix::from_i64(&[&[1]]), IntMatrix::from_i64(&[&[1]])).unwrap();
    assert!(exit_torus(&m).is_ok());
    let p1 = standard::projective_space(1);
    let pt = standard::point();
    let m = StackyMorphism::new(pt, p1, IntMatrix::zeros(1, 0), IntMatrix::zeros(1, 0)).unwrap();
    assert!(exit_torus(&m).is_ok());
}

#[test]
fn bondal_support_examples() {
    let p2 = standard::projective_space(2);
    let pic = PicGroup::of(&p2);
    let f = bondal_support(&p2, &[Rat::zero(), Rat::zero()]);
    assert!(pic.class_of_support(&f).is_trivial());
    let f = bondal_support(&p2, &[rat(1, 2), rat(1, 4)]);
    assert_eq!(f.values, ints(&[1, 1, 0]));
    assert_eq!(pic.class_of_support(&f), pic.canonical(&ints(&[-2, 0, 0])));
    let f = bondal_support(&p2, &[rat(1, 2), rat(1, 2)]);
    assert_eq!(pic.class_of_support(&f), pic.canonical(&ints(&[-1, 0, 0])));
}

#[test]
fn thomsen_collections_of_projective_spaces() {
    for n in 1..=4usize {
        let pn = standard::projective_space(n);
        let got = thomsen_collection(&pn, DEFAULT_CODIM_BOUND).unwrap();
        let pic = PicGroup::of(&pn);
        let expected: BTreeSet<DivisorClass> = (0..=n as i64)
            .map(|k| {
                let mut d = vec![0i64; n + 1];
                d[0] = -k;
                pic.canonical(&ints(&d))
            })
            .collect();
        assert_eq!(got, expected, "P^{n}");
    }
}

#[test]
fn thomsen_collection_of_p1_times_p1() {
    let p1 = standard::projective_space(1);
    let f = product_stacky_fan(&p1, &p1);
    let got = thomsen_collection(&f, DEFAULT_CODIM_BOUND).unwrap();
    let expected = classes(&f, &[&[0, 0, 0, 0], &[-1, 0, 0, 0], &[0, 0, -1, 0], &[-1, 0, -1, 0]]);
    assert_eq!(got, expected);
}

#[test]
fn codim_limit() {
    let p5 = standard::projective_space(5);
    let err = Stratification::of(&StackyMorphism::identity_point(&p5), DEFAULT_CODIM_BOUND).unwrap_err();
    assert_eq!(err.code(), "CODIM_LIMIT");
}

fn dim_counts(s: &Stratification) -> Vec<usize> {
    let m = s.quiver.max_dim();
    (0..=m).map(|d| s.strata().iter().filter(|x| x.dim == d).count()).collect()
}

#[test]
fn golden_cell_counts() {
    let s = Stratification::of(&StackyMorphism::identity_point(&standard::projective_space(1)), 4).unwrap();
    assert_eq!(dim_counts(&s), vec![1, 1]);
    let s = Stratification::of(&StackyMorphism::identity_point(&standard::projective_space(2)), 4).unwrap();
    assert_eq!(dim_counts(&s), vec![1, 3, 2]);
    assert_eq!(s.quiver.edges.len(), 12);
    let s = Stratification::of(&StackyMorphism::diagonal(&standard::projective_space(1)), 4).unwrap();
    assert_eq!(dim_counts(&s), vec![1, 1]);
    let s = Stratification::of(&StackyMorphism::identity(&standard::projective_space(2)), 4).unwrap();
    assert_eq!(dim_counts(&s), vec![1]);
    assert!(s.quiver.edges.is_empty());
}

#[test]
fn edge_monomials_for_points() {
    // e -> A^1: monomials x and 1
    let s = Stratification::of(&StackyMorphism::identity_point(&standard::affine_space(1)), 4).unwrap();
    let mut exps: Vec<Vec<Int>> = s.quiver.edges.iter().map(|e| e.exponent.clone()).collect();
    exps.sort();
    assert_eq!(exps, vec![ints(&[0]), ints(&[1])]);
    let signs: i32 = s.quiver.edges.iter().map(|e| e.sign as i32).sum();
    assert_eq!(signs, 0);

    // e -> P^1: monomials x_0 and x_1 with opposite signs
    let s = Stratification::of(&StackyMorphism::identity_point(&standard::projective_space(1)), 4).unwrap();
    let mut exps: Vec<(Vec<Int>, i8)> = s.quiver.edges.iter().map(|e| (e.exponent.clone(), e.sign)).collect();
    exps.sort();
    assert_eq!(exps[0].0, ints(&[0, 1]));
    assert_eq!(exps[1].0, ints(&[1, 0]));
    assert_eq!(exps[0].1, -exps[1].1);
}

/// Structural invariants that must hold for every stratification.
fn check_invariants(s: &Stratification, rng: &mut ChaCha8Rng) {
    let t = &s.torus;
    if t.codim >= 1 {
        assert_eq!(s.quiver.euler_characteristic(), 0);
    }
    let pic = PicGroup::of(&t.fan);
    for st in s.strata() {
        assert!(strata::is_in_unit_box(&st.sample));
        assert_eq!(st.bundle, pic.class_of_support(&st.support));
        assert_eq!(pic.canonical(&st.bundle.coefficients), st.bundle);
        // bF is constant on the stratum: random interior points of the closure
        for _ in 0..10 {
            let verts = &st.closure.vertices;
            let weights: Vec<Rat> = verts.iter().map(|_| rat(rng.gen_range(1..50), 1)).collect();
            let total = weights.iter().fold(Rat::zero(), |a, b| a + b);
            let w: Vec<Rat> = (0..t.codim)
                .map(|k| verts.iter().zip(&weights).fold(Rat::zero(), |a, (v, x)| a + &v[k] * x) / &total)
                .collect();
            assert_eq!(bondal_support(&t.fan, &t.to_character(&w)), st.support);
        }
    }
    for e in &s.quiver.edges {
        assert_eq!(s.strata()[e.src].dim, s.strata()[e.dst].dim + 1);
        assert!(e.exponent.iter().all(|x| !x.is_negative()));
        // zero exponent iff the supports at the recorded lifts agree
        let shifted: Vec<Int> = s.strata()[e.dst]
            .support
            .values
            .iter()
            .zip(&t.ray_functionals)
            .map(|(v, a)| v + lattice::dot(a, &e.dst_lift_translation))
            .collect();
        let equal = shifted == s.strata()[e.src].support.values;
        assert_eq!(equal, e.exponent.iter().all(|x| x.is_zero()));
    }
}

/// Independent count oracle on the 1- and 2-dimensional torus: vertices are
/// computed directly as intersection points of the hyperplane families, each
/// hyperplane circle is cut into as many arcs as vertices it contains, and
/// the number of 2-cells follows from the Euler characteristic.
fn oracle_counts(t: &ExitTorus) -> (usize, usize, usize) {
    let c = t.codim;
    let fs: Vec<Vec<i64>> = t
        .ray_functionals
        .iter()
        .filter(|a| a.iter().any(|x| !x.is_zero()))
        .map(|a| a.iter().map(|x| i64::try_from(x).unwrap()).collect())
        .collect();
    let frac = |q: Rat| q.clone() - q.floor();
    if c == 1 {
        let mut pts = BTreeSet::new();
        for a in &fs {
            let g = a[0].abs();
            for j in 0..g {
                pts.insert(frac(rat(j, g)));
            }
        }
        return (pts.len(), pts.len(), 0);
    }
    assert_eq!(c, 2);
    // lines {p·w = t}, p primitive with a sign normalisation, t ∈ [0,1)
    let mut lines: BTreeSet<(Vec<i64>, Rat)> = BTreeSet::new();
    for a in &fs {
        let g = num_integer::gcd(a[0], a[1]).abs();
        let mut p = vec![a[0] / g, a[1] / g];
        if p[0] < 0 || (p[0] == 0 && p[1] < 0) {
            p = vec![-p[0], -p[1]];
        }
        for j in 0..g {
            lines.insert((p.clone(), rat(j, g)));
        }
    }
    let lines: Vec<(Vec<i64>, Rat)> = lines.into_iter().collect();
    let mut vertices: BTreeSet<(Rat, Rat)> = BTreeSet::new();
    for (i, (p, s)) in lines.iter().enumerate() {
        for (q, u) in &lines[i + 1..] {
            let det = p[0] * q[1] - p[1] * q[0];
            if det == 0 {
                continue;
            }
            let span = det.abs() + 1;
            for a in -span..=span {
                for b in -span..=span {
                    let r1 = s + rat(a, 1);
                    let r2 = u + rat(b, 1);
                    let x = (&r1 * rat(q[1], 1) - &r2 * rat(p[1], 1)) / rat(det, 1);
                    let y = (&r2 * rat(p[0], 1) - &r1 * rat(q[0], 1)) / rat(det, 1);
                    vertices.insert((frac(x), frac(y)));
                }
            }
        }
    }
    let mut edges = 0;
    for (p, s) in &lines {
        edges += vertices
            .iter()
            .filter(|(x, y)| {
                let v = x * rat(p[0], 1) + y * rat(p[1], 1) - s;
                v.is_integer()
            })
            .count();
    }
    let v = vertices.len();
    (v, edges, edges - v)
}

fn random_fan_2d(rng: &mut ChaCha8Rng) -> StackyFan {
    // star subdivisions of P^2 or P^1 x P^1 keep the fan smooth and complete
    let mut rays: Vec<(i64, i64)> =
        if rng.gen_bool(0.5) { vec![(1, 0), (0, 1), (-1, -1)] } else { vec![(1, 0), (0, 1), (-1, 0), (0, -1)] };
    for _ in 0..rng.gen_range(0..3) {
        let mut sorted = rays.clone();
        sorted.sort_by(|a, b| {
            let ta = (a.1 as f64).atan2(a.0 as f64);
            let tb = (b.1 as f64).atan2(b.0 as f64);
            ta.partial_cmp(&tb).unwrap()
        });
        let k = rng.gen_range(0..sorted.len());
        let (a, b) = (sorted[k], sorted[(k + 1) % sorted.len()]);
        let new = (a.0 + b.0, a.1 + b.1);
        if new.0.abs() > 3 || new.1.abs() > 3 {
            continue;
        }
        rays.push(new);
    }
    fan_from_rays(&rays)
}

fn fan_from_rays(rays: &[(i64, i64)]) -> StackyFan {
    let mut order: Vec<usize> = (0..rays.len()).collect();
    order.sort_by(|&a, &b| {
        let ta = (rays[a].1 as f64).atan2(rays[a].0 as f64);
        let tb = (rays[b].1 as f64).atan2(rays[b].0 as f64);
        ta.partial_cmp(&tb).unwrap()
    });
    let n = rays.len();
    let cones: Vec<Vec<usize>> = (0..n).map(|i| vec![order[i], order[(i + 1) % n]]).collect();
    StackyFan::variety(2, rays.iter().map(|&(a, b)| ints(&[a, b])).collect(), cones).unwrap()
}

#[test]
fn stratifications_match_count_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut cases: Vec<StackyMorphism> = vec![
        StackyMorphism::identity_point(&standard::projective_space(1)),
        StackyMorphism::identity_point(&standard::projective_space(2)),
        StackyMorphism::identity_point(&standard::hirzebruch(1)),
        StackyMorphism::identity_point(&standard::hirzebruch(3)),
        StackyMorphism::identity_point(&standard::p2_blown_up_twice()),
        StackyMorphism::diagonal(&standard::projective_space(1)),
        StackyMorphism::diagonal(&standard::projective_space(2)),
        StackyMorphism::identity_point(&standard::weighted_p1_2()),
        StackyMorphism::identity_point(&standard::orbifold_line()),
    ];
    for _ in 0..12 {
        let f = random_fan_2d(&mut rng);
        cases.push(StackyMorphism::identity_point(&f));
        // a random line through the identity
        let v = loop {
            let v = ints(&[rng.gen_range(-2..=2), rng.gen_range(-2..=2)]);
            if lattice::is_primitive(&v) {
                break v;
            }
        };
        cases.push(sublattice_immersion(&f, &[v]).unwrap());
    }
    for phi in &cases {
        let s = Stratification::of(phi, 4).unwrap();
        check_invariants(&s, &mut rng);
        let (v, e, f) = oracle_counts(&s.torus);
        let counts = dim_counts(&s);
        assert_eq!(counts[0], v);
        assert_eq!(counts[1], e);
        if s.torus.codim == 2 {
            assert_eq!(counts[2], f);
            // every arc has two endpoints and borders two 2-cells
            assert_eq!(s.quiver.edges.len(), 4 * e);
        } else {
            assert_eq!(s.quiver.edges.len(), 2 * e);
        }
    }
}

#[test]
fn three_dimensional_torus_euler_and_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let p1 = standard::projective_space(1);
    let p1p1p1 = product_stacky_fan(&product_stacky_fan(&p1, &p1), &p1);
    for f in [standard::projective_space(3), p1p1p1] {
        let s = Stratification::of(&StackyMorphism::identity_point(&f), 4).unwrap();
        check_invariants(&s, &mut rng);
    }
    let s = Stratification::of(&StackyMorphism::identity_point(&standard::projective_space(3)), 4).unwrap();
    // x,y,z = 0 and x+y+z ∈ Z: one vertex, six arcs, two faces on each
    // of the four 2-tori, and the three slabs of the unit cube
    assert_eq!(dim_counts(&s), vec![1, 6, 8, 3]);
}

#[test]
fn deterministic_ordering_and_identity() {
    let phi = StackyMorphism::identity_point(&standard::projective_space(2));
    let a = Stratification::of(&phi, 4).unwrap();
    let b = Stratification::of(&phi, 4).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    let id = &a.strata()[a.quiver.identity_stratum];
    assert!(id.sample.iter().all(|x| x.is_zero()));
    assert!(id.bundle.is_trivial());
    for w in a.strata().windows(2) {
        assert!(w[0].dim > w[1].dim || (w[0].dim == w[1].dim && w[0].sample < w[1].sample));
    }
    assert!(a.strata()[0].sample.iter().all(|x| x < &Rat::one()));
}
