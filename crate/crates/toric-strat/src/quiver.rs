//! The exit-path quiver: one edge per facet of each canonical cell lift.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use toric_core::{lattice, linalg, Int, Rat};

use crate::polytope::{affine_dim, dot};
use crate::strata::{ceil_half, code_of, Stratum};
use crate::torus::ExitTorus;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExitEdge {
    pub src: usize,
    pub dst: usize,
    /// `bF(σ̃) − bF(τ̃)` per ray, all entries nonnegative.
    pub exponent: Vec<Int>,
    pub sign: i8,
    /// The facet is the canonical lift of `dst` translated by this vector.
    pub dst_lift_translation: Vec<Int>,
}

#[derive(Clone, Debug)]
pub struct ExitPathQuiver {
    pub strata: Vec<Stratum>,
    pub edges: Vec<ExitEdge>,
    pub identity_stratum: usize,
}

impl ExitPathQuiver {
    pub fn edges_from(&self, src: usize) -> impl Iterator<Item = &ExitEdge> {
        self.edges.iter().filter(move |e| e.src == src)
    }

    pub fn max_dim(&self) -> usize {
        self.strata.iter().map(|s| s.dim).max().unwrap_or(0)
    }

    /// `Σ (−1)^dim` over strata.
    pub fn euler_characteristic(&self) -> i64 {
        self.strata.iter().map(|s| if s.dim % 2 == 0 { 1 } else { -1 }).sum()
    }
}

/// Orientation basis of a cell: the canonical null-space basis of the normals
/// of the hyperplanes containing it.
pub fn orientation_basis(t: &ExitTorus, s: &Stratum) -> Vec<Vec<Rat>> {
    let normals: Vec<Vec<Rat>> = s
        .active
        .iter()
        .map(|&r| t.ray_functionals[r].iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect();
    linalg::nullspace(&normals, t.codim)
}

fn coords(basis: &[Vec<Rat>], c: usize, v: &[Rat]) -> Vec<Rat> {
    let cols: Vec<Vec<Rat>> = (0..c).map(|k| basis.iter().map(|b| b[k].clone()).collect()).collect();
    linalg::solve(&cols, basis.len(), v).expect("vector lies in the cell direction")
}

/// Builds the quiver from enumerated strata.
pub fn exit_path_quiver(t: &ExitTorus, strata: Vec<Stratum>) -> ExitPathQuiver {
    let c = t.codim;
    let n = t.num_rays();
    let index: HashMap<Vec<Int>, usize> = strata.iter().map(|s| (s.codes.clone(), s.id)).collect();
    let bases: Vec<Vec<Vec<Rat>>> = strata.iter().map(|s| orientation_basis(t, s)).collect();
    let functionals: Vec<Vec<Rat>> = t
        .ray_functionals
        .iter()
        .map(|a| a.iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect();
    let mut edges = Vec::new();
    for s in &strata {
        if s.dim == 0 {
            continue;
        }
        let p = &s.closure;
        let mut facets: Vec<Vec<usize>> = Vec::new();
        for (r, k) in s.bands() {
            for level in [k.clone(), k + Int::from(1)] {
                let lq = Rat::from_integer(level);
                let idx: Vec<usize> =
                    (0..p.vertices.len()).filter(|&i| dot(&functionals[r], &p.vertices[i]) == lq).collect();
                if idx.is_empty() || facets.contains(&idx) {
                    continue;
                }
                let pts: Vec<&Vec<Rat>> = idx.iter().map(|&i| &p.vertices[i]).collect();
                if affine_dim(&pts) + 1 == s.dim {
                    facets.push(idx);
                }
            }
        }
        facets.sort();
        for idx in facets {
            let face = p.face(&idx, s.dim - 1);
            let lift_sample = face.lex_midpoint();
            let z: Vec<Int> = lift_sample.iter().map(|x| x.floor().to_integer()).collect();
            let codes: Vec<Int> = (0..n)
                .map(|r| {
                    if t.inactive_rays.contains(&r) {
                        Int::zero()
                    } else {
                        code_of(&dot(&functionals[r], &lift_sample)) - lattice::dot(&t.ray_functionals[r], &z) * Int::from(2)
                    }
                })
                .collect();
            let dst = *index.get(&codes).expect("facet is an enumerated cell");
            let tau = &strata[dst];
            let exponent: Vec<Int> = (0..n)
                .map(|r| {
                    if t.inactive_rays.contains(&r) {
                        Int::zero()
                    } else {
                        ceil_half(&s.codes[r]) - ceil_half(&tau.codes[r]) - lattice::dot(&t.ray_functionals[r], &z)
                    }
                })
                .collect();
            debug_assert!(exponent.iter().all(|e| !e.is_negative()));
            let outward: Vec<Rat> = lift_sample.iter().zip(&s.sample).map(|(a, b)| a - b).collect();
            let mut m: Vec<Vec<Rat>> = Vec::with_capacity(s.dim);
            m.push(coords(&bases[s.id], c, &outward));
            for b in &bases[dst] {
                m.push(coords(&bases[s.id], c, b));
            }
            let det = linalg::determinant(&m);
            debug_assert!(!det.is_zero());
            let sign = if det.is_positive() { 1 } else { -1 };
            edges.push(ExitEdge { src: s.id, dst, exponent, sign, dst_lift_translation: z });
        }
    }
    let identity_stratum = strata
        .iter()
        .position(|s| s.codes.iter().all(|x| x.is_zero()) && s.dim == 0)
        .expect("the identity is a vertex of the stratification");
    ExitPathQuiver { strata, edges, identity_stratum }
}
