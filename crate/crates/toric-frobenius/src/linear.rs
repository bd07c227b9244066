//! Linear inclusions `Y → X`: subfans of `Σ_X` lying in a linear subspace
//! spanned by rays, whose support is that whole subspace.

use std::collections::BTreeSet;

use toric_core::lattice::{self, EchelonBasis, IntMatrix};
use toric_core::{Int, StackyFan, StackyMorphism};

use crate::decomposition::check_smooth_variety;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct LinearInclusion {
    /// `dim Y`.
    pub rank: usize,
    /// Rays of `Σ_X` that are rays of `Σ_Y`, ascending; ray `i` of `Y` is
    /// `rays[i]`.
    pub rays: Vec<usize>,
    pub fan: StackyFan,
    pub morphism: StackyMorphism,
}

impl LinearInclusion {
    /// `φ^* D`: forget the components off `Σ_Y(1)`.
    pub fn pullback(&self, d: &[Int]) -> Vec<Int> {
        self.rays.iter().map(|&r| d[r].clone()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rank == self.morphism.target().rank_n()
    }

    pub fn is_point(&self) -> bool {
        self.rank == 0
    }
}

fn span_closure(fan: &StackyFan, subset: &[usize]) -> (Vec<usize>, usize) {
    let n = fan.rank_n();
    let gens: Vec<Vec<Int>> = subset.iter().map(|&r| fan.rays()[r].clone()).collect();
    let span = EchelonBasis::of_span(&gens, n);
    let closed = (0..fan.num_rays()).filter(|&r| span.contains(&fan.rays()[r])).collect();
    (closed, span.rank())
}

fn inclusion_of(fan: &StackyFan, rays: Vec<usize>, rank: usize) -> Result<Option<LinearInclusion>> {
    let n = fan.rank_n();
    if rank == 0 {
        return Ok(Some(LinearInclusion {
            rank,
            rays,
            fan: toric_core::standard::point(),
            morphism: StackyMorphism::identity_point(fan),
        }));
    }
    let gens: Vec<Vec<Int>> = rays.iter().map(|&r| fan.rays()[r].clone()).collect();
    let basis = lattice::saturate(&gens, n);
    let b = IntMatrix::from_cols(&basis, n);
    let mut y_rays = Vec::with_capacity(rays.len());
    for g in &gens {
        y_rays.push(lattice::solve_integer(&b, g).expect("ray lies in the saturated span"));
    }
    let cones: Vec<Vec<usize>> = fan
        .maximal_cones()
        .iter()
        .flat_map(|c| {
            // faces of c inside the subspace
            let inside: Vec<usize> = c.iter().filter_map(|r| rays.iter().position(|x| x == r)).collect();
            (!inside.is_empty()).then_some(inside)
        })
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let y = StackyFan::variety(rank, y_rays, cones)?;
    if !y.is_complete() {
        return Ok(None);
    }
    let morphism = StackyMorphism::new(y.clone(), fan.clone(), b.clone(), b)?;
    Ok(Some(LinearInclusion { rank, rays, fan: y, morphism }))
}

/// Every linear inclusion of dimension at most `max_rank`, ordered by
/// dimension and then by ray set. The identity point and (for a complete
/// fan) the identity are always among them.
pub fn linear_inclusions(fan: &StackyFan, max_rank: usize) -> Result<Vec<LinearInclusion>> {
    check_smooth_variety(fan)?;
    let nr = fan.num_rays();
    let mut closed: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    closed.insert((0, Vec::new()));
    for k in 1..=fan.rank_n().min(max_rank) {
        crate::zonotope::for_each_subset(nr, k, &mut |s| {
            let (c, rank) = span_closure(fan, s);
            if rank == k {
                closed.insert((k, c));
            }
        });
    }
    let mut out = Vec::new();
    for (rank, rays) in closed {
        if let Some(inc) = inclusion_of(fan, rays, rank)? {
            out.push(inc);
        }
    }
    Ok(out)
}
