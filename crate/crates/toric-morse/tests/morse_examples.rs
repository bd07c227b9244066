use num_traits::{One as _, Zero as _};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric_core::fan::standard;
use toric_core::morphism::sublattice_immersion;
use toric_core::*;
use toric_morse::*;
use toric_strat::Stratification;

fn strat_of_point(f: &StackyFan) -> Stratification {
    Stratification::of(&StackyMorphism::identity_point(f), 4).unwrap()
}

fn specialize_sheaf(f: &QuiverSheaf<DivisorClass, Poly>, values: &[Option<Rat>]) -> QuiverSheaf<DivisorClass, Poly> {
    QuiverSheaf { ctx: f.ctx, objects: f.objects.clone(), values: f.values.iter().map(|p| p.specialize(values)).collect() }
}

#[test]
fn two_vertex_constant_sheaf() {
    let q = MorseQuiver::new(vec![1, 0], vec![QuiverEdge { src: 0, dst: 1, sign: Some(-1) }]).unwrap();
    let f = QuiverSheaf { ctx: (), objects: vec!["a", "b"], values: vec![Rat::one()] };
    let c = sheaf_complex(&q, &f).unwrap();
    assert_eq!(c.d(1).get(0, 0), Some(&-Rat::one()));

    let m = AcyclicMatching::new([0]);
    assert!(validate_acyclic_matching(&q, &m));
    let r = morse_reduce(&q, &m, &f).unwrap();
    assert!(r.critical.is_empty());
    let check = r.homotopy.verify(&r.original, &r.reduced);
    assert!(check.all(), "{check:?} {:?}", r.homotopy);
}

#[test]
fn quiver_validation() {
    let bad = MorseQuiver::new(vec![2, 0], vec![QuiverEdge { src: 0, dst: 1, sign: Some(1) }]);
    assert_eq!(bad.unwrap_err().code(), "INVALID_QUIVER");
    let q = MorseQuiver::new(vec![1, 0], vec![QuiverEdge { src: 0, dst: 1, sign: None }]).unwrap();
    let f = QuiverSheaf { ctx: (), objects: vec![(), ()], values: vec![Rat::one()] };
    assert_eq!(sheaf_complex(&q, &f).unwrap_err().code(), "MISSING_ORIENTATION");
}

#[test]
fn matching_validation() {
    // a 1-cell with two endpoints, and a second 1-cell sharing the right one
    let e = |s, d| QuiverEdge { src: s, dst: d, sign: Some(1) };
    let q = MorseQuiver::new(vec![1, 1, 0, 0], vec![e(0, 2), e(0, 3), e(1, 3), e(1, 2)]).unwrap();
    assert!(validate_acyclic_matching(&q, &AcyclicMatching::default()));
    assert!(!validate_acyclic_matching(&q, &AcyclicMatching::new([0, 1])));
    assert!(validate_acyclic_matching(&q, &AcyclicMatching::new([0])));
    // circle: matching both cells around the loop creates a cycle
    assert!(!validate_acyclic_matching(&q, &AcyclicMatching::new([0, 2])));
    // parallel edges: matching one of two edges between the same pair is cyclic
    let par = MorseQuiver::new(vec![1, 0], vec![e(0, 1), e(0, 1)]).unwrap();
    assert!(!validate_acyclic_matching(&par, &AcyclicMatching::new([0])));
    assert!(!validate_acyclic_matching(&q, &AcyclicMatching::new([9])));
}

#[test]
fn empty_matching_is_identity() {
    let s = strat_of_point(&standard::projective_space(2));
    let (q, f) = exit_path_sheaf(&s.quiver);
    let r = morse_reduce(&q, &AcyclicMatching::default(), &f).unwrap();
    assert_eq!(r.reduced, r.original);
    assert_eq!(r.homotopy.projection, r.original.identity_map());
    assert_eq!(r.homotopy.inclusion, r.original.identity_map());
    assert!(r.homotopy.homotopy.values().all(|h| h.is_zero()));
    let key = |e: &QuiverEdge| (e.src, e.dst, e.sign);
    let mut a: Vec<_> = q.edges.iter().map(key).collect();
    let mut b: Vec<_> = r.reduced_quiver.edges.iter().map(key).collect();
    a.sort();
    b.sort();
    assert_eq!(a, b);
}

#[test]
fn point_in_p1_complex() {
    let s = strat_of_point(&standard::projective_space(1));
    let (q, f) = exit_path_sheaf(&s.quiver);
    let c = sheaf_complex(&q, &f).unwrap();
    assert_eq!(c.ranks(), vec![(0, 1), (1, 1)]);
    let d = c.d(1);
    let entry = d.get(0, 0).unwrap();
    let x0 = Poly::var(2, 0);
    let x1 = Poly::var(2, 1);
    assert!(*entry == &x0 - &x1 || *entry == &x1 - &x0);
    let pic = PicGroup::of(&standard::projective_space(1));
    assert_eq!(c.terms[&1][0], pic.canonical(&ints(&[-1, 0])));
    assert!(c.terms[&0][0].is_trivial());
}

#[test]
fn point_in_p2_complex() {
    let s = strat_of_point(&standard::projective_space(2));
    let (q, f) = exit_path_sheaf(&s.quiver);
    let c = sheaf_complex(&q, &f).unwrap();
    assert_eq!(c.ranks(), vec![(0, 1), (1, 3), (2, 2)]);
    assert!(c.is_d_squared_zero());
    let x: Vec<Poly> = (0..3).map(|i| Poly::var(3, i)).collect();
    // d_1 entries are differences of two variables, each pair once
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (_, e) in c.d(1).entries() {
        let (i, j) = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .find(|&(i, j)| i < j && (*e == &x[i] - &x[j] || *e == &x[j] - &x[i]))
            .expect("binomial x_i − x_j");
        pairs.push((i, j));
    }
    pairs.sort();
    assert_eq!(pairs, vec![(0, 1), (0, 2), (1, 2)]);
    // d_2: one column of three units, one column of the three variables
    let d2 = c.d(2);
    assert_eq!(d2.nnz(), 6);
    let mut kinds: Vec<&str> = Vec::new();
    for col in 0..2 {
        let entries: Vec<&Poly> = (0..3).filter_map(|r| d2.get(r, col)).collect();
        if entries.iter().all(|p| p.as_unit().map_or(false, |u| u == Rat::one() || u == -Rat::one())) {
            kinds.push("units");
        } else {
            let mut vars: Vec<usize> =
                entries.iter().map(|p| (0..3).find(|&i| **p == x[i] || **p == -&x[i]).expect("a signed variable")).collect();
            vars.sort();
            assert_eq!(vars, vec![0, 1, 2]);
            kinds.push("variables");
        }
    }
    kinds.sort();
    assert_eq!(kinds, vec!["units", "variables"]);
}

#[test]
fn flow_line_composites_match_reduction() {
    let s = strat_of_point(&standard::projective_space(2));
    let (q, f) = exit_path_sheaf(&s.quiver);
    let m = rho_positive_matching(&s, 2).unwrap();
    let r = morse_reduce(&q, &m, &f).unwrap();
    let rebuilt = sheaf_complex(&r.reduced_quiver, &r.reduced_sheaf).unwrap();
    assert_eq!(rebuilt.differentials, r.reduced.differentials);
    // flow line sign rule on every line
    for &s_crit in &r.critical {
        for &t_crit in &r.critical {
            if q.levels[s_crit] != q.levels[t_crit] + 1 {
                continue;
            }
            for line in gradient_flow_lines(&q, &m, s_crit, t_crit).unwrap() {
                let mut sign: i8 = if (line.edges.len() - 1) / 2 % 2 == 0 { 1 } else { -1 };
                for &e in &line.edges {
                    sign *= q.edges[e].sign.unwrap();
                }
                assert_eq!(sign, line.sign);
                assert_eq!(line.edges.len() % 2, 1);
            }
        }
    }
}

#[test]
fn rho_positive_matching_on_p2() {
    let p2 = standard::projective_space(2);
    let s = strat_of_point(&p2);
    let (q, f) = exit_path_sheaf(&s.quiver);
    for rho in 0..3 {
        let m = rho_positive_matching(&s, rho).unwrap();
        assert_eq!(m.edges.len(), 1);
        assert!(validate_acyclic_matching(&q, &m));
        let mut point: Vec<Option<Rat>> = vec![None; 3];
        point[rho] = Some(Rat::one());
        let restricted = specialize_sheaf(&f, &point);
        let r = morse_reduce(&q, &m, &restricted).unwrap();
        assert_eq!(r.reduced.ranks(), vec![(0, 1), (1, 2), (2, 1)]);
        assert!(r.reduced.is_d_squared_zero());
        assert!(r.homotopy.verify(&r.original, &r.reduced).all());
        // the identity vertex stays critical
        assert!(r.critical.contains(&s.quiver.identity_stratum));
    }
}

#[test]
fn rho_positive_matching_errors_and_parallel_rays() {
    let s = strat_of_point(&standard::projective_space(1));
    // the two rays of P^1 cut out the same hyperplanes
    assert!(rho_positive_matching(&s, 0).unwrap().is_empty());
    assert!(rho_positive_matching(&s, 1).unwrap().is_empty());
    assert_eq!(rho_positive_matching(&s, 7).unwrap_err().code(), "RAY_INACTIVE");

    // the line {x = y} in P^1 x P^1 is the diagonal; the ray (1,0) of the
    // first factor pairs with functional (1)
    let p1 = standard::projective_space(1);
    let pp = product_stacky_fan(&p1, &p1);
    let line = sublattice_immersion(&pp, &[ints(&[1, 0])]).unwrap();
    let s = Stratification::of(&line, 4).unwrap();
    for r in s.torus.inactive_rays.clone() {
        assert_eq!(rho_positive_matching(&s, r).unwrap_err().code(), "RAY_INACTIVE");
    }
}

#[test]
fn non_respecting_matching_is_rejected() {
    let s = strat_of_point(&standard::projective_space(2));
    let (q, f) = exit_path_sheaf(&s.quiver);
    let e = (0..q.edges.len()).find(|&e| q.levels[q.edges[e].src] == 2 && f.values[e].as_unit().is_none()).unwrap();
    let m = AcyclicMatching::new([e]);
    assert!(validate_acyclic_matching(&q, &m));
    assert_eq!(morse_reduce(&q, &m, &f).unwrap_err().code(), "MATCHING_NOT_RESPECTING");
}

/// Greedy random acyclic matching over edges with invertible values.
pub fn random_matching<C: Coefficient>(q: &MorseQuiver, values: &[C], rng: &mut ChaCha8Rng) -> AcyclicMatching {
    let mut order: Vec<usize> = (0..q.edges.len()).collect();
    order.shuffle(rng);
    let mut m = AcyclicMatching::default();
    for e in order {
        if values[e].try_inverse().is_none() || rng.gen_bool(0.3) {
            continue;
        }
        m.edges.insert(e);
        if !validate_acyclic_matching(q, &m) {
            m.edges.remove(&e);
        }
    }
    m
}

#[test]
fn random_matchings_preserve_homology() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let p1 = standard::projective_space(1);
    let fans = [
        standard::projective_space(2),
        standard::hirzebruch(1),
        standard::hirzebruch(2),
        standard::p2_blown_up_twice(),
        product_stacky_fan(&p1, &p1),
    ];
    let mut reduced_something = 0;
    for trial in 0..20 {
        let fan = &fans[trial % fans.len()];
        let phi = if trial % 2 == 0 {
            StackyMorphism::identity_point(fan)
        } else {
            StackyMorphism::diagonal(&standard::projective_space(2))
        };
        let s = Stratification::of(&phi, 4).unwrap();
        let (q, f) = exit_path_sheaf(&s.quiver);
        let n = f.ctx;
        let point: Vec<Rat> = (0..n).map(|_| rat(rng.gen_range(1..=997), rng.gen_range(1..=997))).collect();
        let sheaf = QuiverSheaf { ctx: (), objects: f.objects.clone(), values: f.values.iter().map(|p| p.evaluate(&point)).collect() };
        let m = random_matching(&q, &sheaf.values, &mut rng);
        if !m.is_empty() {
            reduced_something += 1;
        }
        let r = morse_reduce(&q, &m, &sheaf).unwrap();
        assert!(r.reduced.is_d_squared_zero());
        assert!(r.homotopy.verify(&r.original, &r.reduced).all());
        let h1 = homology_ranks(&r.original);
        let h2 = homology_ranks(&r.reduced);
        assert_eq!(h1, h2);
        // the point complexes are exact at a generic point off Y
        assert!(h1.values().all(|&x| x == 0), "{h1:?}");
        assert!(Rat::zero() < point[0]);
    }
    assert!(reduced_something > 10, "{reduced_something}");
}
