//! The Koszul local model of a chart and its comparison with a reduced
//! chart complex.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use toric_core::lattice::{self, EchelonBasis, IntMatrix};
use toric_core::{DivisorClass, Int, PicGroup, Poly, Rat, StackyFan, StackyMorphism};
use toric_morse::{ChainComplex, SparseMatrix};

use crate::error::{ResolutionError, Result};
use crate::iso::find_signed_isomorphism;
use crate::quotient::split_components;
use crate::restrict::ChartRestriction;

/// `x^{u+} − x^{u−}`.
pub fn binomial(nvars: usize, u: &[Int]) -> Poly {
    let plus: Vec<u32> = u.iter().map(|x| if x.is_positive() { u32::try_from(x).expect("small exponent") } else { 0 }).collect();
    let minus: Vec<u32> =
        u.iter().map(|x| if x.is_negative() { u32::try_from(-x).expect("small exponent") } else { 0 }).collect();
    assert_eq!(plus.len(), nvars);
    &Poly::monomial(plus, Rat::one()) - &Poly::monomial(minus, Rat::one())
}

use num_traits::Signed;

/// The Koszul complex `K(f_1, …, f_c)` with all terms `O`, built as the
/// tensor product of the two-term complexes `O →(f_i) O`. Degree-`k`
/// summands are indexed by the `k`-subsets of `{1..c}` in lexicographic
/// order; `d(e_S) = Σ_t (−1)^t f_{s_t} e_{S∖s_t}`.
pub fn koszul_complex(nvars: usize, fs: &[Poly], trivial: DivisorClass) -> ChainComplex<DivisorClass, Poly> {
    let c = fs.len();
    let mut subsets: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
    for mask in 0u32..(1 << c) {
        let s: Vec<usize> = (0..c).filter(|i| mask & (1 << i) != 0).collect();
        subsets.entry(s.len()).or_default().push(s);
    }
    for v in subsets.values_mut() {
        v.sort();
    }
    let mut out = ChainComplex::new(nvars);
    for (&k, v) in &subsets {
        out.terms.insert(k as i64, vec![trivial.clone(); v.len()]);
    }
    for k in 1..=c {
        let rows = &subsets[&(k - 1)];
        let cols = &subsets[&k];
        let mut m = SparseMatrix::new(rows.len(), cols.len());
        for (j, s) in cols.iter().enumerate() {
            for (t, &i) in s.iter().enumerate() {
                let rest: Vec<usize> = s.iter().copied().filter(|&x| x != i).collect();
                let r = rows.iter().position(|x| *x == rest).expect("face of a subset");
                let f = if t % 2 == 0 { fs[i].clone() } else { -&fs[i] };
                m.add_to(r, j, &f);
            }
        }
        out.differentials.insert(k as i64, m);
    }
    out
}

/// The local model of `Y` on the chart: on the cover `A^n` (coordinates
/// = chart rays) the lift of `Y` is cut out by the binomials of a saturated
/// basis of characters vanishing on it. Its Koszul complex is pushed
/// forward to `[A^n/G]`, `G` the finite group with character group
/// `Z^n / β_σ^* M`: the summand `(S, [q])` has class `[q]` and a monomial
/// `x^a` maps `[q]` to `[q + a]`. Returns the component containing
/// `(∅, [0])`, with that summand's degree-0 position.
pub fn chart_local_model(chart_fan: &StackyFan, phi: &StackyMorphism) -> Result<(ChainComplex<DivisorClass, Poly>, usize)> {
    let n = chart_fan.num_rays();
    let rank_n = chart_fan.rank_n();
    let pic = PicGroup::of(chart_fan);
    let zero = vec![Int::zero(); n];
    let torus = toric_strat::torus::exit_torus_unchecked(chart_fan, phi.phi());
    let c = torus.codim;
    if c == 0 {
        let mut out = ChainComplex::new(n);
        out.terms.insert(0, vec![pic.canonical(&zero)]);
        return Ok((out, 0));
    }
    let beta_rays = chart_fan.beta_rays();
    if n != rank_n || lattice::rank(&IntMatrix::from_rows(beta_rays.clone(), rank_n)) != n {
        return Err(ResolutionError::NoLocalModel(format!(
            "chart has {n} rays but the ambient lattice N has rank {rank_n}; the local model is not a finite quotient of affine space"
        )));
    }
    let gens: Vec<Vec<Int>> = (0..c).map(|i| (0..n).map(|r| torus.ray_functionals[r][i].clone()).collect()).collect();
    let u = EchelonBasis::of_span(&lattice::saturate(&gens, n), n).rows;
    let fs: Vec<Poly> = u.iter().map(|v| binomial(n, v)).collect();
    let koszul = koszul_complex(n, &fs, pic.canonical(&zero));

    // characters of G: Z^n modulo the relation lattice of the chart
    let rel = chart_fan.relation_rows();
    let reps = lattice::cokernel_representatives(&IntMatrix::from_cols(&rel, n))
        .ok_or_else(|| ResolutionError::NoLocalModel("chart group is not finite".into()))?;
    let mut classes: Vec<DivisorClass> = reps.iter().map(|q| pic.canonical(q)).collect();
    classes.sort();
    classes.dedup();
    let index: BTreeMap<DivisorClass, usize> = classes.iter().cloned().enumerate().map(|(i, d)| (d, i)).collect();
    let nq = classes.len();
    let mut big: ChainComplex<DivisorClass, Poly> = ChainComplex::new(n);
    for (&k, t) in &koszul.terms {
        big.terms.insert(k, (0..t.len()).flat_map(|_| classes.iter().cloned()).collect());
    }
    for (&k, d) in &koszul.differentials {
        let mut m = SparseMatrix::new(koszul.rank(k - 1) * nq, koszul.rank(k) * nq);
        for (&(i, j), p) in d.entries() {
            for (e, coeff) in p.terms() {
                let mono = Poly::monomial(e.clone(), coeff.clone());
                for (qi, q) in classes.iter().enumerate() {
                    let v: Vec<Int> = q.coefficients.iter().zip(e).map(|(a, &b)| a + Int::from(b)).collect();
                    let qj = index[&pic.canonical(&v)];
                    m.add_to(i * nq + qj, j * nq + qi, &mono);
                }
            }
        }
        big.differentials.insert(k, m);
    }
    let origin = index[&pic.canonical(&zero)];
    for (members, comp) in split_components(&big) {
        if let Some(p) = members.iter().filter(|m| m.0 == 0).position(|m| m.1 == origin) {
            return Ok((comp, p));
        }
    }
    unreachable!("every summand lies in some component")
}

/// `true` iff the reduced chart complex equals the Koszul local model up to
/// unit rescaling and permutation of summands, with the identity-stratum
/// summand matched to `(∅, [0])`.
pub fn koszul_compare(r: &ChartRestriction, phi: &StackyMorphism) -> Result<bool> {
    let (model, origin) = chart_local_model(&r.chart_fan, phi)?;
    Ok(find_signed_isomorphism(&r.reduced.complex, &model, &[(0, r.alpha, origin)]).is_some())
}
