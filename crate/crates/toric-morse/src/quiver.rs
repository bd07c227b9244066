//! Level-graded quivers with sheaf data, and their cellular complexes.

use std::collections::BTreeMap;

use toric_core::{DivisorClass, Int, Poly, Rat};
use toric_strat::ExitPathQuiver;

use crate::error::{MorseError, Result};
use crate::matrix::{ChainComplex, Coefficient, SparseMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuiverEdge {
    pub src: usize,
    pub dst: usize,
    pub sign: Option<i8>,
}

/// Vertices carry a level; every edge drops the level by exactly one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseQuiver {
    pub levels: Vec<i64>,
    pub edges: Vec<QuiverEdge>,
}

impl MorseQuiver {
    pub fn new(levels: Vec<i64>, edges: Vec<QuiverEdge>) -> Result<Self> {
        for (i, e) in edges.iter().enumerate() {
            if e.src >= levels.len() || e.dst >= levels.len() || levels[e.src] != levels[e.dst] + 1 {
                return Err(MorseError::InvalidQuiver { edge: i });
            }
        }
        Ok(MorseQuiver { levels, edges })
    }

    pub fn num_vertices(&self) -> usize {
        self.levels.len()
    }

    pub fn is_oriented(&self) -> bool {
        self.edges.iter().all(|e| e.sign.is_some())
    }

    /// Vertices of each level, in increasing vertex order.
    pub fn basis(&self) -> BTreeMap<i64, Vec<usize>> {
        let mut out: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (v, &l) in self.levels.iter().enumerate() {
            out.entry(l).or_default().push(v);
        }
        out
    }

    /// Position of each vertex inside its level.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.levels.len()];
        for vs in self.basis().values() {
            for (i, &v) in vs.iter().enumerate() {
                pos[v] = i;
            }
        }
        pos
    }
}

/// An object per vertex and a morphism per edge.
#[derive(Clone, Debug, PartialEq)]
pub struct QuiverSheaf<O, C: Coefficient> {
    pub ctx: C::Ctx,
    pub objects: Vec<O>,
    pub values: Vec<C>,
}

/// Assembles `C_k = ⊕_{|σ|=k} F(σ)` with `d_σ^τ = Σ_γ sgn(γ)·F(γ)`.
pub fn sheaf_complex<O: Clone, C: Coefficient>(q: &MorseQuiver, f: &QuiverSheaf<O, C>) -> Result<ChainComplex<O, C>> {
    assert_eq!(f.objects.len(), q.num_vertices());
    assert_eq!(f.values.len(), q.edges.len());
    let basis = q.basis();
    let pos = q.positions();
    let mut out = ChainComplex::new(f.ctx.clone());
    for (&k, vs) in &basis {
        out.terms.insert(k, vs.iter().map(|&v| f.objects[v].clone()).collect());
    }
    for (i, e) in q.edges.iter().enumerate() {
        let sign = e.sign.ok_or(MorseError::MissingOrientation { edge: i })?;
        let k = q.levels[e.src];
        let rows = out.rank(k - 1);
        let cols = out.rank(k);
        let m = out.differentials.entry(k).or_insert_with(|| SparseMatrix::new(rows, cols));
        let v = if sign < 0 { f.values[i].negated() } else { f.values[i].clone() };
        m.add_to(pos[e.dst], pos[e.src], &v);
    }
    Ok(out)
}

/// The exit-path quiver as a Morse quiver, with the sheaf `O^φ`: bundle
/// classes on vertices and the monomial `x^{exponent}` on every edge.
pub fn exit_path_sheaf(q: &ExitPathQuiver) -> (MorseQuiver, QuiverSheaf<DivisorClass, Poly>) {
    let nvars = q.strata.first().map_or(0, |s| s.support.values.len());
    let levels = q.strata.iter().map(|s| s.dim as i64).collect();
    let edges = q.edges.iter().map(|e| QuiverEdge { src: e.src, dst: e.dst, sign: Some(e.sign) }).collect();
    let values = q.edges.iter().map(|e| monomial(&e.exponent)).collect();
    let objects = q.strata.iter().map(|s| s.bundle.clone()).collect();
    (MorseQuiver { levels, edges }, QuiverSheaf { ctx: nvars, objects, values })
}

fn monomial(exponent: &[Int]) -> Poly {
    let e: Vec<u32> = exponent.iter().map(|x| u32::try_from(x).expect("exponent fits in u32")).collect();
    Poly::monomial(e, Rat::from_integer(Int::from(1)))
}
