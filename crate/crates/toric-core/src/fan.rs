//! Stacky fans `(Σ, β: L → N)` with simplicial cones stored as ray-index sets.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::error::{CoreError, Result};
use crate::lattice::{self, EchelonBasis, IntMatrix};
use crate::lp::{Cmp, LinearProgram};
use crate::{Int, LatticeMap, Rat};

/// Unvalidated fan data, as read from a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawFan {
    pub rank_l: usize,
    pub rank_n: usize,
    pub beta: Vec<Vec<Int>>,
    pub rays: Vec<Vec<Int>>,
    pub cones: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Shape(String),
    ZeroRay { ray: usize },
    NonPrimitiveRay { ray: usize },
    DuplicateRay { ray: usize, duplicate_of: usize },
    ConeIndexOutOfRange { cone: usize },
    NonSimplicial { cone: Vec<usize> },
    IncompatibleCones { a: Vec<usize>, b: Vec<usize> },
    InfiniteCokernel,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Shape(s) => write!(f, "shape: {s}"),
            Violation::ZeroRay { ray } => write!(f, "ray {ray} is zero"),
            Violation::NonPrimitiveRay { ray } => write!(f, "ray {ray} is not primitive"),
            Violation::DuplicateRay { ray, duplicate_of } => {
                write!(f, "ray {ray} duplicates ray {duplicate_of}")
            }
            Violation::ConeIndexOutOfRange { cone } => write!(f, "cone {cone} uses an unknown ray"),
            Violation::NonSimplicial { cone } => write!(f, "cone {cone:?} is not simplicial"),
            Violation::IncompatibleCones { a, b } => {
                write!(f, "cones {a:?} and {b:?} do not meet in a common face")
            }
            Violation::InfiniteCokernel => write!(f, "beta has infinite cokernel"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A validated stacky fan. Cones are closed under faces; the empty cone is
/// implicit and not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackyFan {
    rank_l: usize,
    rank_n: usize,
    beta: LatticeMap,
    rays: Vec<Vec<Int>>,
    cones: Vec<Vec<usize>>,
    maximal: Vec<Vec<usize>>,
}

fn int(x: i64) -> Int {
    Int::from(x)
}

/// Checks a raw fan and lists every violation.
pub fn validate_stacky_fan(raw: &RawFan) -> ValidationReport {
    let mut report = ValidationReport::default();
    let (l, n) = (raw.rank_l, raw.rank_n);
    if raw.beta.len() != n || raw.beta.iter().any(|r| r.len() != l) {
        report.violations.push(Violation::Shape(format!("beta must be {n} x {l}")));
        return report;
    }
    for (i, r) in raw.rays.iter().enumerate() {
        if r.len() != l {
            report.violations.push(Violation::Shape(format!("ray {i} must have length {l}")));
            return report;
        }
    }
    for (i, r) in raw.rays.iter().enumerate() {
        if r.iter().all(|x| x.is_zero()) {
            report.violations.push(Violation::ZeroRay { ray: i });
        } else if !lattice::is_primitive(r) {
            report.violations.push(Violation::NonPrimitiveRay { ray: i });
        }
        if let Some(j) = raw.rays[..i].iter().position(|s| s == r) {
            report.violations.push(Violation::DuplicateRay { ray: i, duplicate_of: j });
        }
    }
    let beta = IntMatrix::from_rows(raw.beta.clone(), l);
    if lattice::rank(&beta) != n {
        report.violations.push(Violation::InfiniteCokernel);
    }
    let mut closed: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut bad_index = false;
    for (ci, c) in raw.cones.iter().enumerate() {
        if c.iter().any(|&i| i >= raw.rays.len()) {
            report.violations.push(Violation::ConeIndexOutOfRange { cone: ci });
            bad_index = true;
            continue;
        }
        let mut c = c.clone();
        c.sort_unstable();
        c.dedup();
        let gens: Vec<Vec<Int>> = c.iter().map(|&i| raw.rays[i].clone()).collect();
        if !gens.is_empty() && lattice::rank(&IntMatrix::from_rows(gens, l)) != c.len() {
            report.violations.push(Violation::NonSimplicial { cone: c.clone() });
            continue;
        }
        closed.insert(c);
    }
    if bad_index {
        return report;
    }
    let given: BTreeSet<Vec<usize>> = closed.clone();
    let closed = face_closure(&closed);
    if closed.len() != given.len() {
        report.notes.push(format!("completed face closure: added {} faces", closed.len() - given.len()));
    }
    let maximal = maximal_cones(&closed);
    for i in 0..maximal.len() {
        for j in i + 1..maximal.len() {
            if !cones_meet_in_face(&raw.rays, l, &maximal[i], &maximal[j]) {
                report.violations.push(Violation::IncompatibleCones {
                    a: maximal[i].clone(),
                    b: maximal[j].clone(),
                });
            }
        }
    }
    report
}

fn face_closure(cones: &BTreeSet<Vec<usize>>) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    for c in cones {
        let k = c.len();
        for mask in 1u64..(1u64 << k) {
            let face: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| c[b]).collect();
            out.insert(face);
        }
    }
    out
}

fn maximal_cones(cones: &BTreeSet<Vec<usize>>) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = cones
        .iter()
        .filter(|c| !cones.iter().any(|d| d.len() > c.len() && c.iter().all(|x| d.contains(x))))
        .cloned()
        .collect();
    out.sort();
    out
}

/// Two simplicial cones meet in their common face iff no nonnegative
/// combination of one equals a nonnegative combination of the other while
/// using a ray outside the common face.
fn cones_meet_in_face(rays: &[Vec<Int>], dim: usize, a: &[usize], b: &[usize]) -> bool {
    let na = a.len();
    let nb = b.len();
    let mut lp = LinearProgram::<Rat>::with_nonneg(na + nb);
    for k in 0..dim {
        let mut row = Vec::with_capacity(na + nb);
        for &i in a {
            row.push(Rat::from_integer(rays[i][k].clone()));
        }
        for &i in b {
            row.push(Rat::from_integer(-rays[i][k].clone()));
        }
        lp.add(row, Cmp::Eq, Rat::zero());
    }
    let mut norm = vec![Rat::zero(); na + nb];
    let mut any = false;
    for (k, i) in a.iter().enumerate() {
        if !b.contains(i) {
            norm[k] = Rat::one();
            any = true;
        }
    }
    for (k, i) in b.iter().enumerate() {
        if !a.contains(i) {
            norm[na + k] = Rat::one();
            any = true;
        }
    }
    if !any {
        return true;
    }
    lp.add(norm, Cmp::Eq, Rat::one());
    !lp.is_feasible()
}

impl StackyFan {
    /// Validates and builds a fan; any violation is an error.
    pub fn from_raw(raw: &RawFan) -> Result<Self> {
        let report = validate_stacky_fan(raw);
        if let Some(v) = report.violations.first() {
            return Err(CoreError::InvalidFan(v.to_string()));
        }
        let mut set = BTreeSet::new();
        for c in &raw.cones {
            let mut c = c.clone();
            c.sort_unstable();
            c.dedup();
            if !c.is_empty() {
                set.insert(c);
            }
        }
        let closed = face_closure(&set);
        let maximal = maximal_cones(&closed);
        let mut cones: Vec<Vec<usize>> = closed.into_iter().collect();
        cones.sort_by(|x, y| x.len().cmp(&y.len()).then(x.cmp(y)));
        Ok(StackyFan {
            rank_l: raw.rank_l,
            rank_n: raw.rank_n,
            beta: IntMatrix::from_rows(raw.beta.clone(), raw.rank_l),
            rays: raw.rays.clone(),
            cones,
            maximal,
        })
    }

    pub fn new(beta: LatticeMap, rays: Vec<Vec<Int>>, cones: Vec<Vec<usize>>) -> Result<Self> {
        Self::from_raw(&RawFan {
            rank_l: beta.cols(),
            rank_n: beta.rows(),
            beta: beta.row_vecs(),
            rays,
            cones,
        })
    }

    /// A fan presented as a toric variety (`β = id`).
    pub fn variety(dim: usize, rays: Vec<Vec<Int>>, cones: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(IntMatrix::identity(dim), rays, cones)
    }

    /// Convenience constructor from small integer data.
    pub fn from_i64(beta: &[&[i64]], rank_l: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Result<Self> {
        let beta_rows: Vec<Vec<Int>> = beta.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        Self::from_raw(&RawFan {
            rank_l,
            rank_n: beta_rows.len(),
            beta: beta_rows,
            rays: rays.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect(),
            cones: cones.iter().map(|c| c.to_vec()).collect(),
        })
    }

    pub fn variety_i64(rays: &[&[i64]], cones: &[&[usize]]) -> Result<Self> {
        let dim = rays.first().map_or(0, |r| r.len());
        let id: Vec<Vec<i64>> = (0..dim).map(|i| (0..dim).map(|j| (i == j) as i64).collect()).collect();
        let id_refs: Vec<&[i64]> = id.iter().map(|r| r.as_slice()).collect();
        Self::from_i64(&id_refs, dim, rays, cones)
    }

    pub fn to_raw(&self) -> RawFan {
        RawFan {
            rank_l: self.rank_l,
            rank_n: self.rank_n,
            beta: self.beta.row_vecs(),
            rays: self.rays.clone(),
            cones: self.maximal.clone(),
        }
    }

    pub fn rank_l(&self) -> usize {
        self.rank_l
    }

    pub fn rank_n(&self) -> usize {
        self.rank_n
    }

    pub fn beta(&self) -> &LatticeMap {
        &self.beta
    }

    pub fn rays(&self) -> &[Vec<Int>] {
        &self.rays
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    /// All nonempty cones, sorted by size then lexicographically.
    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn maximal_cones(&self) -> &[Vec<usize>] {
        &self.maximal
    }

    pub fn has_cone(&self, cone: &[usize]) -> bool {
        if cone.is_empty() {
            return true;
        }
        let mut c = cone.to_vec();
        c.sort_unstable();
        self.cones.binary_search_by(|x| x.len().cmp(&c.len()).then(x.as_slice().cmp(&c))).is_ok()
    }

    /// `β(u_ρ) ∈ N` for every ray.
    pub fn beta_rays(&self) -> Vec<Vec<Int>> {
        self.rays.iter().map(|r| self.beta.apply(r)).collect()
    }

    /// The matrix whose columns are the rays (rank_L × #rays).
    pub fn ray_matrix(&self) -> LatticeMap {
        IntMatrix::from_cols(&self.rays, self.rank_l)
    }

    /// Relation rows `R = (β U)ᵀ`: row `i` is the divisor of the character `e_i^*`.
    pub fn relation_rows(&self) -> Vec<Vec<Int>> {
        self.beta.mul(&self.ray_matrix()).row_vecs()
    }

    pub fn is_variety(&self) -> bool {
        self.rank_l == self.rank_n && self.beta == IntMatrix::identity(self.rank_n)
    }

    /// Whether a maximal cone gives a smooth stacky chart: its rays form a
    /// basis of their saturated span and `β` is injective on that span.
    pub fn cone_is_smooth(&self, cone: &[usize]) -> bool {
        if cone.is_empty() {
            return true;
        }
        let gens: Vec<Vec<Int>> = cone.iter().map(|&i| self.rays[i].clone()).collect();
        let m = IntMatrix::from_rows(gens.clone(), self.rank_l);
        let snf = lattice::smith_normal_form(&m);
        if snf.invariant_factors().iter().any(|d| !d.is_one()) || snf.rank() != cone.len() {
            return false;
        }
        let images: Vec<Vec<Int>> = gens.iter().map(|g| self.beta.apply(g)).collect();
        lattice::rank(&IntMatrix::from_rows(images, self.rank_n)) == cone.len()
    }

    /// Subfan keeping only the given rays (cones using other rays are dropped),
    /// re-indexed in the order given. Returns the subfan.
    pub fn subfan(&self, keep: &[usize]) -> Result<StackyFan> {
        let pos = |r: usize| keep.iter().position(|&k| k == r);
        let cones: Vec<Vec<usize>> = self
            .maximal
            .iter()
            .chain(self.cones.iter())
            .filter_map(|c| c.iter().map(|&r| pos(r)).collect::<Option<Vec<usize>>>())
            .collect();
        StackyFan::from_raw(&RawFan {
            rank_l: self.rank_l,
            rank_n: self.rank_n,
            beta: self.beta.row_vecs(),
            rays: keep.iter().map(|&r| self.rays[r].clone()).collect(),
            cones,
        })
    }

    /// Whether the support of the fan is all of `L_R` (checked by testing that
    /// every vector `±e_i` and a generic interior combination lies in a cone).
    pub fn is_complete(&self) -> bool {
        if self.rank_l == 0 {
            return true;
        }
        // A simplicial fan is complete iff its full-dimensional cones cover the
        // sphere; equivalently every codimension-one face of a maximal cone is
        // shared by exactly two maximal cones and all maximal cones are full.
        if self.maximal.iter().any(|c| c.len() != self.rank_l) {
            return false;
        }
        let mut counts = std::collections::BTreeMap::new();
        for c in &self.maximal {
            for skip in 0..c.len() {
                let f: Vec<usize> = c.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &r)| r).collect();
                *counts.entry(f).or_insert(0usize) += 1;
            }
        }
        counts.values().all(|&k| k == 2)
    }

    /// Locates the smallest cone containing `v` in its relative interior.
    /// Returns the cone (ray indices) and the coefficients on its rays.
    pub fn locate(&self, v: &[Int]) -> Option<(Vec<usize>, Vec<Rat>)> {
        if v.iter().all(|x| x.is_zero()) {
            return Some((vec![], vec![]));
        }
        let vq: Vec<Rat> = v.iter().map(|x| Rat::from_integer(x.clone())).collect();
        for c in &self.maximal {
            let cols: Vec<Vec<Rat>> = (0..self.rank_l)
                .map(|k| c.iter().map(|&r| Rat::from_integer(self.rays[r][k].clone())).collect())
                .collect();
            if let Some(x) = crate::linalg::solve(&cols, c.len(), &vq) {
                if x.iter().all(|a| !a.is_negative()) {
                    let face: Vec<usize> =
                        c.iter().zip(&x).filter(|(_, a)| a.is_positive()).map(|(&r, _)| r).collect();
                    let coeffs: Vec<Rat> = x.into_iter().filter(|a| a.is_positive()).collect();
                    return Some((face, coeffs));
                }
            }
        }
        None
    }

    /// Whether the rays span their saturated sublattice of `L`... used for
    /// Pic freeness: the class group is free iff the relation lattice is saturated.
    pub fn relation_lattice(&self) -> EchelonBasis<Int> {
        EchelonBasis::of_span(&self.relation_rows(), self.num_rays())
    }
}

/// Product `(Σ1 × Σ2, β1 ⊕ β2)`.
pub fn product_stacky_fan(a: &StackyFan, b: &StackyFan) -> StackyFan {
    let l = a.rank_l + b.rank_l;
    let mut rays = Vec::with_capacity(a.num_rays() + b.num_rays());
    for r in &a.rays {
        let mut v = r.clone();
        v.extend(std::iter::repeat(Int::zero()).take(b.rank_l));
        rays.push(v);
    }
    for r in &b.rays {
        let mut v = vec![Int::zero(); a.rank_l];
        v.extend(r.iter().cloned());
        rays.push(v);
    }
    let off = a.num_rays();
    let mut cones = Vec::new();
    let ca: Vec<Vec<usize>> = std::iter::once(vec![]).chain(a.maximal.iter().cloned()).collect();
    let cb: Vec<Vec<usize>> = std::iter::once(vec![]).chain(b.maximal.iter().cloned()).collect();
    for x in &ca {
        for y in &cb {
            let mut c = x.clone();
            c.extend(y.iter().map(|&r| r + off));
            if !c.is_empty() {
                cones.push(c);
            }
        }
    }
    StackyFan::new(a.beta.direct_sum(&b.beta), rays, cones).map(|f| {
        debug_assert_eq!(f.rank_l, l);
        f
    })
    .expect("product of valid fans is valid")
}

/// Star subdivision of `fan` along `cone`: a new ray `Σ_{ρ∈cone} u_ρ` is
/// added and every maximal cone `σ ⊇ cone` is replaced by the cones
/// `(σ ∖ {ρ}) ∪ {new}`, `ρ ∈ cone`. For a smooth cone this is the toric
/// blow-up of the corresponding orbit closure and preserves smoothness.
pub fn star_subdivision(fan: &StackyFan, cone: &[usize]) -> Result<StackyFan> {
    if cone.len() < 2 || !fan.has_cone(cone) {
        return Err(CoreError::InvalidFan(format!("cannot subdivide along {cone:?}")));
    }
    let mut new_ray = vec![Int::zero(); fan.rank_l];
    for &r in cone {
        for (x, y) in new_ray.iter_mut().zip(&fan.rays[r]) {
            *x += y;
        }
    }
    let g = lattice::content(&new_ray);
    for x in new_ray.iter_mut() {
        *x /= &g;
    }
    let idx = fan.num_rays();
    let mut rays = fan.rays.clone();
    rays.push(new_ray);
    let mut cones = Vec::new();
    for sigma in &fan.maximal {
        if cone.iter().all(|r| sigma.contains(r)) {
            for rho in cone {
                let mut c: Vec<usize> = sigma.iter().copied().filter(|r| r != rho).collect();
                c.push(idx);
                cones.push(c);
            }
        } else {
            cones.push(sigma.clone());
        }
    }
    StackyFan::new(fan.beta.clone(), rays, cones)
}

/// Standard fans used in examples and tests.
pub mod standard {
    use super::*;

    /// Projective space `P^n` as a variety: rays `e_1..e_n, -(e_1+..+e_n)`.
    pub fn projective_space(n: usize) -> StackyFan {
        let mut rays: Vec<Vec<Int>> =
            (0..n).map(|i| (0..n).map(|j| Int::from((i == j) as i64)).collect()).collect();
        rays.push(vec![Int::from(-1); n]);
        let cones: Vec<Vec<usize>> = (0..=n).map(|skip| (0..=n).filter(|&r| r != skip).collect()).collect();
        StackyFan::variety(n, rays, cones).expect("P^n")
    }

    /// Affine space `A^n` (the coordinate fan).
    pub fn affine_space(n: usize) -> StackyFan {
        let rays: Vec<Vec<Int>> = (0..n).map(|i| (0..n).map(|j| Int::from((i == j) as i64)).collect()).collect();
        StackyFan::variety(n, rays, vec![(0..n).collect()]).expect("A^n")
    }

    /// Hirzebruch surface `F_b`: rays (1,0), (0,1), (-1,b), (0,-1).
    pub fn hirzebruch(b: i64) -> StackyFan {
        StackyFan::variety_i64(&[&[1, 0], &[0, 1], &[-1, b], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]])
            .expect("Hirzebruch")
    }

    /// Weighted projective line `P(1,2)` as a stack: `L = Z^2`, `β = (1 -2)`.
    pub fn weighted_p1_2() -> StackyFan {
        StackyFan::from_i64(&[&[1, -2]], 2, &[&[1, 0], &[0, 1]], &[&[0], &[1]]).expect("P(1,2)")
    }

    /// The non-separated line: `L = Z^2`, `β = (1 1)`, two rays.
    pub fn non_separated_line() -> StackyFan {
        StackyFan::from_i64(&[&[1, 1]], 2, &[&[1, 0], &[0, 1]], &[&[0], &[1]]).expect("non-separated line")
    }

    /// The orbifold line `[A^1/(Z/2)]`: `L = N = Z`, `β = (2)`.
    pub fn orbifold_line() -> StackyFan {
        StackyFan::from_i64(&[&[2]], 1, &[&[1]], &[&[0]]).expect("orbifold line")
    }

    /// The point (rank zero lattices).
    pub fn point() -> StackyFan {
        StackyFan::new(IntMatrix::zeros(0, 0), vec![], vec![]).expect("point")
    }

    /// `P^2` blown up at two torus-fixed points.
    pub fn p2_blown_up_twice() -> StackyFan {
        StackyFan::variety_i64(
            &[&[1, 0], &[0, 1], &[-1, -1], &[1, 1], &[-1, 0]],
            &[&[0, 3], &[3, 1], &[1, 4], &[4, 2], &[2, 0]],
        )
        .expect("double blow-up")
    }
}
