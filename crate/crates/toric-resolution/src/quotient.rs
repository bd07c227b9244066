//! Functoriality along finite quotients, torus quotients and open
//! inclusions with complement of equivariant codimension two.

use std::collections::BTreeMap;

use num_traits::Zero;
use toric_core::lattice::{self, EchelonBasis, IntMatrix};
use toric_core::{DivisorClass, Int, LatticeMap, PicGroup, Poly, StackyFan, StackyMorphism};
use toric_morse::{ChainComplex, SparseMatrix};
use toric_strat::torus::exit_torus_unchecked;
use toric_strat::{ExitTorus, Stratification};

use crate::complex::{build_resolution, AugmentedComplex, LineBundleComplex};
use crate::error::{ResolutionError, Result};

/// For every ray of the source, the index of the target ray it maps onto
/// under `Φ`, if any.
fn ray_images(m: &StackyMorphism) -> Vec<Option<usize>> {
    m.source()
        .rays()
        .iter()
        .map(|r| {
            let img = m.big_phi().apply(r);
            m.target().rays().iter().position(|t| *t == img)
        })
        .collect()
}

/// `π_*C` along a finite quotient, split into its connected summand
/// complexes. Summand `(j, [m])` of `π_*C_k` is `O(Π_*(F_j − β*m))`; a
/// monomial `x^a` from `(j, [m])` lands in `(i, [m − m_a])` where
/// `β*m_a = D_i − D_j − a`. Each returned complex is labelled by the
/// character class of its first degree-0 summand.
pub fn pushforward_finite_quotient_complex(
    c: &LineBundleComplex,
    pi: &StackyMorphism,
) -> Result<Vec<(Vec<Int>, LineBundleComplex)>> {
    if !pi.classify().finite_quotient {
        return Err(toric_core::CoreError::NotFiniteQuotient.into());
    }
    let src = pi.source();
    let tgt = pi.target();
    let images = ray_images(pi);
    let map: Vec<usize> = images
        .iter()
        .map(|x| x.ok_or(toric_core::CoreError::NotFiniteQuotient))
        .collect::<std::result::Result<_, _>>()?;
    let tpic = PicGroup::of(tgt);
    let nt = tgt.num_rays();
    let rank_n = src.rank_n();

    let sub = EchelonBasis::of_span(&pi.phi().row_vecs(), rank_n);
    let reduce = |m: &[Int]| sub.reduce(m).0;
    let mut reps: Vec<Vec<Int>> = pi.character_coset_representatives()?.iter().map(|r| reduce(r)).collect();
    reps.sort();
    reps.dedup();
    let beta_star = IntMatrix::from_rows(src.beta_rays(), rank_n);
    let push_divisor = |d: &[Int]| {
        let mut v = vec![Int::zero(); nt];
        for (i, x) in d.iter().enumerate() {
            v[map[i]] += x;
        }
        tpic.canonical(&v)
    };

    let rep_index: BTreeMap<Vec<Int>, usize> = reps.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
    let nq = reps.len();
    let mut big: ChainComplex<DivisorClass, Poly> = ChainComplex::new(nt);
    for (&k, terms) in &c.complex.terms {
        let mut out = Vec::with_capacity(terms.len() * nq);
        for d in terms {
            for q in &reps {
                let chi = beta_star.apply(q);
                let v: Vec<Int> = d.coefficients.iter().zip(&chi).map(|(a, b)| a + b).collect();
                out.push(push_divisor(&v));
            }
        }
        big.terms.insert(k, out);
    }
    for (&k, d) in &c.complex.differentials {
        let src_terms = c.terms(k);
        let dst_terms = c.terms(k - 1);
        let mut m = SparseMatrix::new(dst_terms.len() * nq, src_terms.len() * nq);
        for (&(i, j), p) in d.entries() {
            for (e, coeff) in p.terms() {
                let r: Vec<Int> = (0..src.num_rays())
                    .map(|t| &dst_terms[i].coefficients[t] - &src_terms[j].coefficients[t] - Int::from(e[t]))
                    .collect();
                let m_a = lattice::solve_integer(&beta_star, &r)
                    .ok_or(ResolutionError::Inhomogeneous { degree: k, row: i, col: j })?;
                let mono = Poly::monomial(e.clone(), coeff.clone()).relabel(nt, &map);
                for (qi, q) in reps.iter().enumerate() {
                    let shifted: Vec<Int> = q.iter().zip(&m_a).map(|(a, b)| a - b).collect();
                    let qj = rep_index[&reduce(&shifted)];
                    m.add_to(i * nq + qj, j * nq + qi, &mono);
                }
            }
        }
        if !m.is_zero() {
            big.differentials.insert(k, m);
        }
    }
    // label each component by the character of its first summand
    Ok(split_components(&big)
        .into_iter()
        .map(|(members, cx)| (reps[members[0].1 % nq].clone(), LineBundleComplex::new(tgt.clone(), cx)))
        .collect())
}

/// Connected components of the summand graph (summands linked by nonzero
/// entries), each with its members `(degree, original index)` in order.
/// A connected complex is returned unchanged.
pub fn split_components(c: &ChainComplex<DivisorClass, Poly>) -> Vec<(Vec<(i64, usize)>, ChainComplex<DivisorClass, Poly>)> {
    let mut ids: BTreeMap<(i64, usize), usize> = BTreeMap::new();
    for (&k, t) in &c.terms {
        for i in 0..t.len() {
            let n = ids.len();
            ids.insert((k, i), n);
        }
    }
    let mut parent: Vec<usize> = (0..ids.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for (&k, d) in &c.differentials {
        for (&(r, col), _) in d.entries() {
            let a = find(&mut parent, ids[&(k - 1, r)]);
            let b = find(&mut parent, ids[&(k, col)]);
            parent[a.max(b)] = a.min(b);
        }
    }
    let keys: Vec<(i64, usize)> = ids.keys().copied().collect();
    let mut groups: Vec<(usize, Vec<(i64, usize)>)> = Vec::new();
    for key in &keys {
        let r = find(&mut parent, ids[key]);
        match groups.iter_mut().find(|(root, _)| *root == r) {
            Some((_, members)) => members.push(*key),
            None => groups.push((r, vec![*key])),
        }
    }
    if groups.len() <= 1 {
        return vec![(keys, c.clone())];
    }
    let mut out = Vec::new();
    for (_, members) in groups {
        let mut new_pos: BTreeMap<(i64, usize), usize> = BTreeMap::new();
        let mut cx = ChainComplex::new(c.ctx);
        for key in &members {
            let t = cx.terms.entry(key.0).or_insert_with(Vec::new);
            new_pos.insert(*key, t.len());
            t.push(c.terms[&key.0][key.1].clone());
        }
        for (&k, d) in &c.differentials {
            let mut m = SparseMatrix::new(cx.rank(k - 1), cx.rank(k));
            for (&(r, col), v) in d.entries() {
                if let (Some(&a), Some(&b)) = (new_pos.get(&(k - 1, r)), new_pos.get(&(k, col))) {
                    m.set(a, b, v.clone());
                }
            }
            if !m.is_zero() {
                cx.differentials.insert(k, m);
            }
        }
        out.push((members, cx));
    }
    out
}

/// `q: N → N/N_G`, as the matrix whose rows are a saturated basis of
/// `N_G^⊥ ⊂ M`.
pub fn quotient_map(rank_n: usize, n_g: &[Vec<Int>]) -> Result<LatticeMap> {
    let sat = lattice::saturate(n_g, rank_n);
    if sat.len() != n_g.len() || EchelonBasis::of_span(n_g, rank_n).rows != EchelonBasis::of_span(&sat, rank_n).rows {
        return Err(ResolutionError::InvalidAction("N_G must be a saturated sublattice".into()));
    }
    let perp = if n_g.is_empty() {
        (0..rank_n).map(|i| (0..rank_n).map(|j| Int::from((i == j) as i64)).collect()).collect()
    } else {
        lattice::kernel_saturated_basis(&IntMatrix::from_rows(sat, rank_n))
    };
    Ok(IntMatrix::from_rows(perp, rank_n))
}

/// The quotient `[X/T]` by the subtorus `T_{N_G}`: same `L` and fan,
/// `β' = q∘β`.
pub fn torus_quotient_fan(fan: &StackyFan, n_g: &[Vec<Int>]) -> Result<(StackyFan, LatticeMap)> {
    let q = quotient_map(fan.rank_n(), n_g)?;
    let beta = q.mul(fan.beta());
    let all: Vec<Vec<usize>> = fan.cones().to_vec();
    Ok((StackyFan::new(beta, fan.rays().to_vec(), all)?, q))
}

/// The open substack `X° ⊂ X` of cones on which `q∘β` is injective, with
/// its quotient fan `(Σ°, q∘β)`; returns the quotient fan and the ambient
/// index of each of its rays.
pub fn free_locus_quotient(fan: &StackyFan, n_g: &[Vec<Int>]) -> Result<(StackyFan, Vec<usize>, LatticeMap)> {
    let q = quotient_map(fan.rank_n(), n_g)?;
    let beta = q.mul(fan.beta());
    let injective = |cone: &[usize]| {
        let imgs: Vec<Vec<Int>> = cone.iter().map(|&r| beta.apply(&fan.rays()[r])).collect();
        cone.is_empty() || lattice::rank(&IntMatrix::from_rows(imgs, beta.rows())) == cone.len()
    };
    let cones: Vec<Vec<usize>> = fan.cones().iter().filter(|c| injective(c)).cloned().collect();
    let mut kept: Vec<usize> = cones.iter().flatten().copied().collect();
    kept.sort_unstable();
    kept.dedup();
    let pos = |r: usize| kept.iter().position(|&k| k == r).expect("ray of a kept cone");
    let cones: Vec<Vec<usize>> = cones.iter().map(|c| c.iter().map(|&r| pos(r)).collect()).collect();
    let rays: Vec<Vec<Int>> = kept.iter().map(|&r| fan.rays()[r].clone()).collect();
    Ok((StackyFan::new(beta, rays, cones)?, kept, q))
}

/// `i_♭`: extends support functions by zero on the rays missing from the
/// open subfan and re-expresses entries in the larger Cox ring.
pub fn iflat_extend_complex(c: &LineBundleComplex, inclusion: &StackyMorphism) -> Result<LineBundleComplex> {
    let target = inclusion.target();
    let images = ray_images(inclusion);
    let map: Vec<usize> = images
        .iter()
        .enumerate()
        .map(|(i, x)| x.ok_or(toric_core::CoreError::RayImageOutsideSupport { ray: i }))
        .collect::<std::result::Result<_, _>>()?;
    for (r, bu) in target.beta_rays().iter().enumerate() {
        if !map.contains(&r) && bu.iter().any(|x| !x.is_zero()) {
            return Err(ResolutionError::NotEquivCodim2 { ray: r });
        }
    }
    let pic = PicGroup::of(target);
    let nt = target.num_rays();
    let extend = |d: &DivisorClass| {
        let mut v = vec![Int::zero(); nt];
        for (i, x) in d.coefficients.iter().enumerate() {
            v[map[i]] = x.clone();
        }
        pic.canonical(&v)
    };
    let complex = ChainComplex {
        ctx: nt,
        terms: c.complex.terms.iter().map(|(&k, t)| (k, t.iter().map(extend).collect())).collect(),
        differentials: c.complex.differentials.iter().map(|(&k, m)| (k, m.map(|p| p.relabel(nt, &map)))).collect(),
    };
    Ok(LineBundleComplex::new(target.clone(), complex))
}

/// `π^*` along `X → [X/T]`: the Cox ring is unchanged, classes are read in
/// `Pic(X)`.
pub fn pullback_along_torus_quotient(c: &LineBundleComplex, fan: &StackyFan) -> Result<LineBundleComplex> {
    if fan.rays() != c.fan.rays() || fan.cones() != c.fan.cones() {
        return Err(ResolutionError::InvalidAction("quotient and ambient fans differ".into()));
    }
    let pic = PicGroup::of(fan);
    let complex = ChainComplex {
        ctx: c.complex.ctx,
        terms: c.complex.terms.iter().map(|(&k, t)| (k, t.iter().map(|d| pic.canonical(&d.coefficients)).collect())).collect(),
        differentials: c.complex.differentials.clone(),
    };
    Ok(LineBundleComplex::new(fan.clone(), complex))
}

/// The image lattice `φ(N_Y)` (saturated), which is the largest torus
/// acting on `Y`.
pub fn orbit_lattice(phi: &StackyMorphism) -> Vec<Vec<Int>> {
    let cols: Vec<Vec<Int>> = (0..phi.phi().cols()).map(|j| phi.phi().col(j)).collect();
    lattice::saturate(&cols, phi.target().rank_n())
}

/// Stages of resolving a subtorus closure `Y ⊂ X` through the quotient by
/// the torus of `Y`: the point `Y/T` in `[X°/T]`, its resolution, the
/// `i_♭` extension to `[X/T]`, and the pullback to `X`.
#[derive(Clone, Debug)]
pub struct TorusQuotientPipeline {
    pub quotient_open: StackyFan,
    pub point_resolution: AugmentedComplex,
    pub extended: LineBundleComplex,
    pub pulled_back: LineBundleComplex,
}

pub fn resolve_through_torus_quotient(phi: &StackyMorphism, codim_bound: usize) -> Result<TorusQuotientPipeline> {
    let fan = phi.target();
    let n_g = orbit_lattice(phi);
    let (open, kept, _) = free_locus_quotient(fan, &n_g)?;
    let (closed, _) = torus_quotient_fan(fan, &n_g)?;
    let point = StackyMorphism::identity_point(&open);
    let point_resolution = build_resolution(&point, codim_bound)?;
    let l = fan.rank_l();
    let n = closed.rank_n();
    let inclusion =
        StackyMorphism::new(open.clone(), closed, IntMatrix::identity(l), IntMatrix::identity(n))?;
    debug_assert!(kept.iter().enumerate().all(|(i, &r)| open.rays()[i] == fan.rays()[r]));
    let extended = iflat_extend_complex(&point_resolution.complex, &inclusion)?;
    let pulled_back = pullback_along_torus_quotient(&extended, fan)?;
    Ok(TorusQuotientPipeline { quotient_open: open, point_resolution, extended, pulled_back })
}

/// Whether the stratification of `φ` and of `φ/T` (for the subtorus
/// `T_{N_G}` acting on `Y`) agree: same exit torus inside `M`, same ray
/// functionals, and identical strata, edges and exponents, with bundle
/// classes matching after pullback.
pub fn pullback_torus_quotient_check(phi: &StackyMorphism, n_g: &[Vec<Int>], codim_bound: usize) -> Result<bool> {
    let fan = phi.target();
    let rank_n = fan.rank_n();
    let image = EchelonBasis::of_span(&orbit_lattice(phi), rank_n);
    if !n_g.iter().all(|v| image.contains(v)) {
        return Err(ResolutionError::InvalidAction("N_G is not contained in the lattice of Y".into()));
    }
    let s = Stratification::of(phi, codim_bound)?;
    let (qfan, q) = torus_quotient_fan(fan, n_g)?;
    let t_quot = exit_torus_unchecked(&qfan, &q.mul(phi.phi()));
    // compare the exit tori as sublattices of M
    let lifted: Vec<Vec<Int>> = t_quot.basis.iter().map(|b| q.transpose().apply(b)).collect();
    if EchelonBasis::of_span(&lifted, rank_n).rows != EchelonBasis::of_span(&s.torus.basis, rank_n).rows {
        return Ok(false);
    }
    // express the basis of T^φ in quotient coordinates and rebuild
    let qt = q.transpose();
    let mut basis = Vec::new();
    for b in &s.torus.basis {
        match lattice::solve_integer(&qt, b) {
            Some(x) => basis.push(x),
            None => return Ok(false),
        }
    }
    let functionals: Vec<Vec<Int>> =
        qfan.beta_rays().iter().map(|bu| basis.iter().map(|b| lattice::dot(b, bu)).collect()).collect();
    if functionals != s.torus.ray_functionals {
        return Ok(false);
    }
    let torus = ExitTorus {
        fan: qfan.clone(),
        codim: basis.len(),
        basis,
        inactive_rays: s.torus.inactive_rays.clone(),
        ray_functionals: functionals,
    };
    let sq = Stratification::of_torus(torus, codim_bound)?;
    let pic = PicGroup::of(fan);
    let same_strata = s.strata().len() == sq.strata().len()
        && s.strata().iter().zip(sq.strata()).all(|(a, b)| {
            a.dim == b.dim
                && a.sample == b.sample
                && a.codes == b.codes
                && a.support == b.support
                && pic.canonical(&b.bundle.coefficients) == a.bundle
        });
    let same_edges = s.quiver.edges.len() == sq.quiver.edges.len()
        && s.quiver.edges.iter().zip(&sq.quiver.edges).all(|(a, b)| {
            a.src == b.src && a.dst == b.dst && a.exponent == b.exponent && a.sign == b.sign
        });
    Ok(same_strata && same_edges && s.quiver.identity_stratum == sq.quiver.identity_stratum)
}
