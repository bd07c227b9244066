//! Acyclic partial matchings, gradient flow lines and the ρ-positive matching
//! of an exit-path quiver.

use std::collections::{BTreeSet, VecDeque};

use toric_core::{lattice, Int};
use toric_strat::Stratification;

use crate::error::{MorseError, Result};
use crate::quiver::MorseQuiver;

/// A set of matched edges (by index into the quiver's edge list).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AcyclicMatching {
    pub edges: BTreeSet<usize>,
}

impl AcyclicMatching {
    pub fn new(edges: impl IntoIterator<Item = usize>) -> Self {
        AcyclicMatching { edges: edges.into_iter().collect() }
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// For each vertex, the matched edge touching it.
    pub fn partner_edges(&self, q: &MorseQuiver) -> Option<Vec<Option<usize>>> {
        let mut at = vec![None; q.num_vertices()];
        for &e in &self.edges {
            let edge = q.edges.get(e)?;
            for v in [edge.src, edge.dst] {
                if at[v].is_some() {
                    return None;
                }
                at[v] = Some(e);
            }
        }
        Some(at)
    }

    pub fn critical_vertices(&self, q: &MorseQuiver) -> Vec<usize> {
        let mut matched = vec![false; q.num_vertices()];
        for &e in &self.edges {
            matched[q.edges[e].src] = true;
            matched[q.edges[e].dst] = true;
        }
        (0..q.num_vertices()).filter(|&v| !matched[v]).collect()
    }
}

/// Successors in the quiver with matched edges reversed, as (edge, vertex).
pub(crate) fn modified_graph(q: &MorseQuiver, m: &AcyclicMatching) -> Vec<Vec<(usize, usize)>> {
    let mut adj = vec![Vec::new(); q.num_vertices()];
    for (i, e) in q.edges.iter().enumerate() {
        if m.edges.contains(&i) {
            adj[e.dst].push((i, e.src));
        } else {
            adj[e.src].push((i, e.dst));
        }
    }
    adj
}

/// Topological order of the modified graph, or `None` on a directed cycle.
pub(crate) fn topological_order(adj: &[Vec<(usize, usize)>]) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut indeg = vec![0usize; n];
    for out in adj {
        for &(_, w) in out {
            indeg[w] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &(_, w) in &adj[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push_back(w);
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// True iff the edges form a vertex-disjoint matching whose reversal leaves
/// the quiver without directed cycles.
pub fn validate_acyclic_matching(q: &MorseQuiver, m: &AcyclicMatching) -> bool {
    if m.partner_edges(q).is_none() {
        return false;
    }
    topological_order(&modified_graph(q, m)).is_some()
}

/// An alternating path `σ → τ₁ ⇐ σ₁ → … → τ` from a level-`k` vertex to a
/// level-`(k−1)` vertex, starting and ending with unmatched edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowLine {
    /// Edge indices in path order; odd positions are matched edges.
    pub edges: Vec<usize>,
    /// `(−1)^{(ℓ−1)/2} · Π sgn(γ)`.
    pub sign: i8,
}

/// All index-one gradient flow lines from `src` to `dst`.
pub fn gradient_flow_lines(q: &MorseQuiver, m: &AcyclicMatching, src: usize, dst: usize) -> Result<Vec<FlowLine>> {
    let partners = m.partner_edges(q).ok_or(MorseError::InvalidMatching)?;
    if topological_order(&modified_graph(q, m)).is_none() {
        return Err(MorseError::InvalidMatching);
    }
    let mut out = Vec::new();
    if q.levels[src] != q.levels[dst] + 1 {
        return Ok(out);
    }
    let mut down: Vec<Vec<usize>> = vec![Vec::new(); q.num_vertices()];
    for (i, e) in q.edges.iter().enumerate() {
        if !m.edges.contains(&i) {
            down[e.src].push(i);
        }
    }
    let mut path = Vec::new();
    walk(q, &partners, &down, src, dst, &mut path, &mut out)?;
    Ok(out)
}

fn walk(
    q: &MorseQuiver,
    partners: &[Option<usize>],
    down: &[Vec<usize>],
    at: usize,
    dst: usize,
    path: &mut Vec<usize>,
    out: &mut Vec<FlowLine>,
) -> Result<()> {
    for &e in &down[at] {
        let w = q.edges[e].dst;
        path.push(e);
        if w == dst {
            let mut sign: i8 = if (path.len() - 1) / 2 % 2 == 0 { 1 } else { -1 };
            for &g in path.iter() {
                sign *= q.edges[g].sign.ok_or(MorseError::MissingOrientation { edge: g })?;
            }
            out.push(FlowLine { edges: path.clone(), sign });
        } else if let Some(me) = partners[w] {
            // continue upwards only through a matching edge whose bottom is w
            if q.edges[me].dst == w {
                path.push(me);
                walk(q, partners, down, q.edges[me].src, dst, path, out)?;
                path.pop();
            }
        }
        path.pop();
    }
    Ok(())
}

/// Edges `σ → τ` that end positively inside the hyperplane family of `ρ`:
/// `ρ` is the only ray whose hyperplane contains `τ` but not `σ`, and the
/// value of `u_ρ` increases from `σ` to the facet. When `ρ`'s hyperplanes
/// coincide with those of other rays the stratification does not change
/// on removing `ρ` and the matching is empty.
pub fn rho_positive_matching(s: &Stratification, rho: usize) -> Result<AcyclicMatching> {
    let t = &s.torus;
    if rho >= t.num_rays() || t.inactive_rays.contains(&rho) {
        return Err(MorseError::RayInactive(rho));
    }
    let strata = s.strata();
    let mut out = BTreeSet::new();
    for (i, e) in s.quiver.edges.iter().enumerate() {
        let (sigma, tau) = (&strata[e.src], &strata[e.dst]);
        let new: Vec<usize> = tau.active.iter().copied().filter(|r| !sigma.active.contains(r)).collect();
        if new != [rho] {
            continue;
        }
        let lifted = &tau.codes[rho] + lattice::dot(&t.ray_functionals[rho], &e.dst_lift_translation) * Int::from(2);
        if lifted == &sigma.codes[rho] + Int::from(1) {
            out.insert(i);
        }
    }
    Ok(AcyclicMatching { edges: out })
}
