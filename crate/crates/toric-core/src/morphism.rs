//! Morphisms of stacky fans and their classification.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::error::{CoreError, Result};
use crate::fan::{product_stacky_fan, StackyFan};
use crate::lattice::{self, IntMatrix};
use crate::linalg;
use crate::{Int, LatticeMap, Rat};

/// `(φ, Φ): (Σ', β') → (Σ, β)` with `β Φ = φ β'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackyMorphism {
    source: StackyFan,
    target: StackyFan,
    big_phi: LatticeMap,
    phi: LatticeMap,
}

/// The flags computed by [`StackyMorphism::classify`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Classification {
    pub inclusion: bool,
    pub immersion: bool,
    pub open_inclusion: bool,
    pub change_of_group_finite_cokernel: bool,
    pub finite_quotient: bool,
    pub stabilization_equivalence: bool,
}

impl Classification {
    pub fn names(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.inclusion {
            out.push("inclusion");
        }
        if self.immersion {
            out.push("immersion");
        }
        if self.open_inclusion {
            out.push("open_inclusion");
        }
        if self.change_of_group_finite_cokernel {
            out.push("change_of_group_finite_cokernel");
        }
        if self.finite_quotient {
            out.push("finite_quotient");
        }
        if self.stabilization_equivalence {
            out.push("stabilization_equivalence");
        }
        out
    }
}

fn primitive(v: Vec<Int>) -> Vec<Int> {
    let g = lattice::content(&v);
    if g.is_zero() || g.is_one() {
        v
    } else {
        v.into_iter().map(|x| x / g.clone()).collect()
    }
}

/// Clears denominators of a rational vector and makes it primitive.
pub fn primitive_integer_vector(v: &[Rat]) -> Vec<Int> {
    let lcm = v.iter().fold(Int::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
    primitive(v.iter().map(|x| (x * Rat::from_integer(lcm.clone())).to_integer()).collect())
}

fn injective_torsion_free(a: &LatticeMap) -> bool {
    let snf = lattice::smith_normal_form(a);
    snf.rank() == a.cols() && snf.invariant_factors().iter().all(|d| d.is_one())
}

fn is_unimodular_square(a: &LatticeMap) -> bool {
    a.rows() == a.cols() && lattice::determinant(a).abs().is_one()
}

/// Extreme rays of the pointed cone `{a ≥ 0 : A a = 0}` in `R^k`, found by
/// minimal supports.
fn extreme_rays_of_kernel_cone(a: &[Vec<Rat>], k: usize) -> Vec<Vec<Rat>> {
    let mut out: Vec<Vec<Rat>> = Vec::new();
    for mask in 1u64..(1u64 << k) {
        let support: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).collect();
        let sub: Vec<Vec<Rat>> = a.iter().map(|row| support.iter().map(|&j| row[j].clone()).collect()).collect();
        let ns = linalg::nullspace(&sub, support.len());
        if ns.len() != 1 {
            continue;
        }
        let v = &ns[0];
        let sign = if v.iter().all(|x| x.is_positive()) {
            Rat::one()
        } else if v.iter().all(|x| x.is_negative()) {
            -Rat::one()
        } else {
            continue;
        };
        let mut full = vec![Rat::zero(); k];
        for (i, &j) in support.iter().enumerate() {
            full[j] = v[i].clone() * sign.clone();
        }
        out.push(full);
    }
    out
}

/// Primitive generators of `Φ^{-1}(τ)` for the cone spanned by `rays` in `L`,
/// where `Φ: L' → L` is injective. Sorted.
pub fn preimage_cone(big_phi: &LatticeMap, rays: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let l = big_phi.rows();
    let lp = big_phi.cols();
    if rays.is_empty() {
        return vec![];
    }
    // rows of q annihilate the image of Φ
    let q = lattice::kernel_saturated_basis(&big_phi.transpose());
    let k = rays.len();
    let a: Vec<Vec<Rat>> = q
        .iter()
        .map(|row| (0..k).map(|j| Rat::from_integer(lattice::dot(row, &rays[j]))).collect())
        .collect();
    let phi_q: Vec<Vec<Rat>> =
        (0..l).map(|i| (0..lp).map(|j| Rat::from_integer(big_phi[(i, j)].clone())).collect()).collect();
    let mut gens: Vec<Vec<Int>> = extreme_rays_of_kernel_cone(&a, k)
        .into_iter()
        .map(|coeffs| {
            let v: Vec<Rat> = (0..l)
                .map(|i| {
                    (0..k).fold(Rat::zero(), |acc, j| acc + coeffs[j].clone() * Rat::from_integer(rays[j][i].clone()))
                })
                .collect();
            let y = linalg::solve(&phi_q, lp, &v).expect("vector lies in the image");
            primitive_integer_vector(&y)
        })
        .collect();
    gens.sort();
    gens.dedup();
    gens
}

impl StackyMorphism {
    pub fn new(source: StackyFan, target: StackyFan, big_phi: LatticeMap, phi: LatticeMap) -> Result<Self> {
        if big_phi.rows() != target.rank_l()
            || big_phi.cols() != source.rank_l()
            || phi.rows() != target.rank_n()
            || phi.cols() != source.rank_n()
        {
            return Err(CoreError::InvalidMorphism("lattice map dimensions do not match the fans".into()));
        }
        if target.beta().mul(&big_phi) != phi.mul(source.beta()) {
            return Err(CoreError::IncompatibleDiagram);
        }
        let m = StackyMorphism { source, target, big_phi, phi };
        for cone in m.source.maximal_cones() {
            if m.image_cone_in_target(cone).is_none() {
                return Err(CoreError::InvalidMorphism(format!("cone {cone:?} does not map into a cone")));
            }
        }
        Ok(m)
    }

    pub fn identity(fan: &StackyFan) -> Self {
        StackyMorphism {
            source: fan.clone(),
            target: fan.clone(),
            big_phi: IntMatrix::identity(fan.rank_l()),
            phi: IntMatrix::identity(fan.rank_n()),
        }
    }

    /// Inclusion of the identity point `e → X`.
    pub fn identity_point(fan: &StackyFan) -> Self {
        StackyMorphism {
            source: crate::fan::standard::point(),
            target: fan.clone(),
            big_phi: IntMatrix::zeros(fan.rank_l(), 0),
            phi: IntMatrix::zeros(fan.rank_n(), 0),
        }
    }

    /// The diagonal `X → X × X`.
    pub fn diagonal(fan: &StackyFan) -> Self {
        let target = product_stacky_fan(fan, fan);
        let stack = |n: usize| {
            let id = IntMatrix::<Int>::identity(n);
            let mut m = IntMatrix::zeros(2 * n, n);
            for i in 0..n {
                m[(i, i)] = id[(i, i)].clone();
                m[(n + i, i)] = id[(i, i)].clone();
            }
            m
        };
        StackyMorphism::new(fan.clone(), target, stack(fan.rank_l()), stack(fan.rank_n()))
            .expect("diagonal is a morphism")
    }

    pub fn source(&self) -> &StackyFan {
        &self.source
    }

    pub fn target(&self) -> &StackyFan {
        &self.target
    }

    /// The map `Φ: L' → L`.
    pub fn big_phi(&self) -> &LatticeMap {
        &self.big_phi
    }

    /// The map `φ: N' → N`.
    pub fn phi(&self) -> &LatticeMap {
        &self.phi
    }

    pub fn codim(&self) -> usize {
        self.target.rank_n() - lattice::rank(&self.phi)
    }

    /// Target cone (ray indices) containing the image of a source cone.
    fn image_cone_in_target(&self, cone: &[usize]) -> Option<Vec<usize>> {
        let images: Vec<Vec<Int>> = cone.iter().map(|&r| self.big_phi.apply(&self.source.rays()[r])).collect();
        let mut best: Option<Vec<usize>> = None;
        let candidates: Vec<Vec<usize>> =
            std::iter::once(vec![]).chain(self.target.cones().iter().cloned()).collect();
        for tau in candidates {
            let ok = images.iter().all(|v| {
                if v.iter().all(|x| x.is_zero()) {
                    return true;
                }
                if tau.is_empty() {
                    return false;
                }
                let cols: Vec<Vec<Rat>> = (0..self.target.rank_l())
                    .map(|k| tau.iter().map(|&r| Rat::from_integer(self.target.rays()[r][k].clone())).collect())
                    .collect();
                let vq: Vec<Rat> = v.iter().map(|x| Rat::from_integer(x.clone())).collect();
                matches!(linalg::solve(&cols, tau.len(), &vq), Some(x) if x.iter().all(|a| !a.is_negative()))
            });
            if ok && best.as_ref().map_or(true, |b| tau.len() < b.len()) {
                best = Some(tau);
            }
        }
        best
    }

    /// The set `{Φ^{-1}(τ) : τ ∈ Σ ∪ {0}}` as sorted generator lists.
    pub fn preimage_cones(&self) -> BTreeSet<Vec<Vec<Int>>> {
        let mut out = BTreeSet::new();
        out.insert(vec![]);
        for tau in self.target.cones() {
            let rays: Vec<Vec<Int>> = tau.iter().map(|&r| self.target.rays()[r].clone()).collect();
            out.insert(preimage_cone(&self.big_phi, &rays));
        }
        out
    }

    fn source_cones_as_generators(&self) -> BTreeSet<Vec<Vec<Int>>> {
        let mut out = BTreeSet::new();
        out.insert(vec![]);
        for c in self.source.cones() {
            let mut g: Vec<Vec<Int>> = c.iter().map(|&r| self.source.rays()[r].clone()).collect();
            g.sort();
            out.insert(g);
        }
        out
    }

    pub fn classify(&self) -> Classification {
        let mut c = Classification::default();
        let maps_injective = injective_torsion_free(&self.big_phi) && injective_torsion_free(&self.phi);
        if maps_injective {
            let pre = self.preimage_cones();
            let src = self.source_cones_as_generators();
            c.inclusion = src.is_subset(&pre);
            c.immersion = c.inclusion && src == pre;
            c.open_inclusion =
                c.inclusion && is_unimodular_square(&self.big_phi) && is_unimodular_square(&self.phi);
        }
        let same_fan = self.big_phi == IntMatrix::identity(self.source.rank_l())
            && self.source.rank_l() == self.target.rank_l()
            && self.source.rays() == self.target.rays()
            && self.source.cones() == self.target.cones();
        if same_fan && self.phi.rows() == self.phi.cols() && !lattice::determinant(&self.phi).is_zero() {
            c.change_of_group_finite_cokernel = true;
            c.finite_quotient = self.quotient_splits();
        }
        c.stabilization_equivalence = self.is_stabilization_equivalence();
        c
    }

    /// Splitting test for `0 → M/π*M' → L^∨/β'*M' → L^∨/β*M → 0`: for finitely
    /// generated abelian groups the sequence splits iff the middle term is
    /// isomorphic to the direct sum of the outer ones.
    fn quotient_splits(&self) -> bool {
        let beta_s = self.source.beta();
        let beta_t = self.target.beta();
        let outer_left = lattice::cokernel_structure(&self.phi.transpose());
        let outer_right = lattice::cokernel_structure(&beta_s.transpose());
        let middle = lattice::cokernel_structure(&beta_t.transpose());
        let mut sum = outer_left.torsion.clone();
        sum.extend(outer_right.torsion.iter().cloned());
        elementary_divisors(&sum) == elementary_divisors(&middle.torsion)
            && outer_left.free_rank + outer_right.free_rank == middle.free_rank
    }

    fn is_stabilization_equivalence(&self) -> bool {
        if !is_unimodular_square(&self.phi) {
            return false;
        }
        let (s, t) = (&self.source, &self.target);
        if s.num_rays() != t.num_rays() {
            return false;
        }
        // rays must correspond bijectively, cones too
        let mut map = Vec::with_capacity(s.num_rays());
        for r in s.rays() {
            let img = self.big_phi.apply(r);
            match t.rays().iter().position(|x| *x == img) {
                Some(j) => map.push(j),
                None => return false,
            }
        }
        let mut img_cones: Vec<Vec<usize>> = s
            .cones()
            .iter()
            .map(|c| {
                let mut v: Vec<usize> = c.iter().map(|&r| map[r]).collect();
                v.sort_unstable();
                v
            })
            .collect();
        img_cones.sort_by(|x, y| x.len().cmp(&y.len()).then(x.cmp(y)));
        if img_cones != t.cones() {
            return false;
        }
        if s.rank_l() <= t.rank_l() {
            injective_torsion_free(&self.big_phi)
        } else {
            // surjective projection: the kernel must be a complement carrying no rays
            lattice::smith_normal_form(&self.big_phi).invariant_factors().iter().all(|d| d.is_one())
                && lattice::rank(&self.big_phi) == t.rank_l()
        }
    }

    /// Representatives of `coker(φ*: M → M')`, i.e. of `M'/φ^T M`.
    pub fn character_coset_representatives(&self) -> Result<Vec<Vec<Int>>> {
        let phit = self.phi.transpose();
        lattice::cokernel_representatives(&phit)
            .ok_or_else(|| CoreError::RepresentativesInfinite(lattice::cokernel_structure(&phit).free_rank))
    }

    /// Composition `other ∘ self`.
    pub fn then(&self, other: &StackyMorphism) -> Result<StackyMorphism> {
        if self.target != other.source {
            return Err(CoreError::InvalidMorphism("morphisms are not composable".into()));
        }
        StackyMorphism::new(
            self.source.clone(),
            other.target.clone(),
            other.big_phi.mul(&self.big_phi),
            other.phi.mul(&self.phi),
        )
    }

    /// Builds a morphism without checking the cone condition (the lattice
    /// diagram is still checked).
    pub fn new_unchecked_cones(
        source: StackyFan,
        target: StackyFan,
        big_phi: LatticeMap,
        phi: LatticeMap,
    ) -> Result<Self> {
        if target.beta().mul(&big_phi) != phi.mul(source.beta()) {
            return Err(CoreError::IncompatibleDiagram);
        }
        Ok(StackyMorphism { source, target, big_phi, phi })
    }
}

fn elementary_divisors(torsion: &[Int]) -> Vec<(Int, u32)> {
    // prime-power decomposition of a list of cyclic orders
    let mut out = Vec::new();
    for t in torsion {
        let mut n = t.abs();
        let mut p = Int::from(2);
        while &p * &p <= n {
            let mut k = 0;
            while (&n % &p).is_zero() {
                n /= &p;
                k += 1;
            }
            if k > 0 {
                out.push((p.clone(), k));
            }
            p += 1;
        }
        if n > Int::one() {
            out.push((n, 1));
        }
    }
    out.sort();
    out
}

/// `(φ1 × φ2, Φ1 × Φ2)`.
pub fn product_morphism(a: &StackyMorphism, b: &StackyMorphism) -> StackyMorphism {
    StackyMorphism::new(
        product_stacky_fan(&a.source, &b.source),
        product_stacky_fan(&a.target, &b.target),
        a.big_phi.direct_sum(&b.big_phi),
        a.phi.direct_sum(&b.phi),
    )
    .expect("product of morphisms")
}

/// The closed substack cut out by a saturated sublattice `N_Y ⊂ N` (given by
/// a basis): `L_Y = β^{-1}(N_Y)` saturated, fan `{Φ^{-1}(τ)}`.
pub fn sublattice_immersion(target: &StackyFan, n_basis: &[Vec<Int>]) -> Result<StackyMorphism> {
    let n = target.rank_n();
    let l = target.rank_l();
    let k = n_basis.len();
    let n_y = lattice::saturate(n_basis, n);
    if n_y.len() != k {
        return Err(CoreError::InvalidMorphism("sublattice basis is not independent".into()));
    }
    // L_Y: vectors of L whose β-image lies in span(N_Y)
    let perp = if k == n { vec![] } else { lattice::kernel_saturated_basis(&IntMatrix::from_rows(n_y.clone(), n)) };
    let l_y = if perp.is_empty() {
        lattice::kernel_saturated_basis(&IntMatrix::<Int>::zeros(0, l))
    } else {
        let a = IntMatrix::from_rows(perp, n).mul(target.beta());
        lattice::kernel_saturated_basis(&a)
    };
    let big_phi = IntMatrix::from_cols(&l_y, l);
    let phi = IntMatrix::from_cols(&n_y, n);
    // β_Y: coordinates of β(l) in the basis n_y
    let phi_q: Vec<Vec<Rat>> = (0..n).map(|i| (0..k).map(|j| Rat::from_integer(phi[(i, j)].clone())).collect()).collect();
    let mut beta_y = IntMatrix::zeros(k, l_y.len());
    for (j, v) in l_y.iter().enumerate() {
        let img: Vec<Rat> = target.beta().apply(v).into_iter().map(Rat::from_integer).collect();
        let c = linalg::solve(&phi_q, k, &img).ok_or(CoreError::InvalidMorphism("beta image".into()))?;
        for (i, x) in c.into_iter().enumerate() {
            if !x.is_integer() {
                return Err(CoreError::InvalidMorphism("beta restriction is not integral".into()));
            }
            beta_y[(i, j)] = x.to_integer();
        }
    }
    // source fan: preimages of all target cones
    let mut rays: Vec<Vec<Int>> = Vec::new();
    let mut cones: Vec<Vec<usize>> = Vec::new();
    for tau in target.cones() {
        let tr: Vec<Vec<Int>> = tau.iter().map(|&r| target.rays()[r].clone()).collect();
        let gens = preimage_cone(&big_phi, &tr);
        let mut idx = Vec::new();
        for g in gens {
            let i = match rays.iter().position(|r| *r == g) {
                Some(i) => i,
                None => {
                    rays.push(g);
                    rays.len() - 1
                }
            };
            idx.push(i);
        }
        if !idx.is_empty() {
            cones.push(idx);
        }
    }
    // deterministic ray order
    let mut order: Vec<usize> = (0..rays.len()).collect();
    order.sort_by(|&a, &b| rays[a].cmp(&rays[b]));
    let new_index: Vec<usize> = {
        let mut inv = vec![0; rays.len()];
        for (new, &old) in order.iter().enumerate() {
            inv[old] = new;
        }
        inv
    };
    let rays_sorted: Vec<Vec<Int>> = order.iter().map(|&o| rays[o].clone()).collect();
    let cones: Vec<Vec<usize>> = cones.iter().map(|c| c.iter().map(|&i| new_index[i]).collect()).collect();
    let source = StackyFan::new(beta_y, rays_sorted, cones)?;
    StackyMorphism::new(source, target.clone(), big_phi, phi)
}

/// One smooth chart per maximal cone: the subfan consisting of the closure of
/// `σ` with the same lattices (a stabilization of a smooth stacky coordinate
/// fan), together with its open inclusion.
#[derive(Clone, Debug)]
pub struct Chart {
    pub cone: Vec<usize>,
    pub inclusion: StackyMorphism,
}

impl Chart {
    /// Ambient ray index of each chart ray.
    pub fn ray_map(&self) -> &[usize] {
        &self.cone
    }
}

pub fn smooth_stacky_chart_cover(fan: &StackyFan) -> Result<Vec<Chart>> {
    let mut out = Vec::new();
    for cone in fan.maximal_cones() {
        if !fan.cone_is_smooth(cone) {
            return Err(CoreError::NotSmoothlyCovered { cone: cone.clone() });
        }
        let sub = fan.subfan(cone)?;
        let inclusion = StackyMorphism::new(
            sub,
            fan.clone(),
            IntMatrix::identity(fan.rank_l()),
            IntMatrix::identity(fan.rank_n()),
        )?;
        out.push(Chart { cone: cone.clone(), inclusion });
    }
    if fan.maximal_cones().is_empty() {
        // the torus itself: the empty cone is its own chart
        let sub = fan.subfan(&[])?;
        let inclusion = StackyMorphism::new(
            sub,
            fan.clone(),
            IntMatrix::identity(fan.rank_l()),
            IntMatrix::identity(fan.rank_n()),
        )?;
        out.push(Chart { cone: vec![], inclusion });
    }
    Ok(out)
}

/// Decomposition `L = L_σ ⊕ complement` witnessing a chart source as a
/// stabilization: returns a unimodular matrix whose first `|σ|` columns are
/// the rays of `σ`.
pub fn stabilization_basis(fan: &StackyFan, cone: &[usize]) -> Option<LatticeMap> {
    let l = fan.rank_l();
    let gens: Vec<Vec<Int>> = cone.iter().map(|&r| fan.rays()[r].clone()).collect();
    let mut cols = gens.clone();
    let m = IntMatrix::from_cols(&gens, l);
    if !injective_torsion_free(&m) {
        return None;
    }
    // complete to a basis: the smith transform u has u m v = [I; 0], so the
    // last columns of u^{-1} complete the rays to a basis.
    let snf = lattice::smith_normal_form(&m);
    let uinv = lattice::unimodular_inverse(&snf.u);
    for j in cone.len()..l {
        cols.push(uinv.col(j));
    }
    let b = IntMatrix::from_cols(&cols, l);
    if lattice::determinant(&b).abs().is_one() {
        Some(b)
    } else {
        None
    }
}
