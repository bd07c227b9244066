//! Morse reduction along an acyclic matching.
//!
//! With matched edges reversed and weighted by `−(sgn·F)^{-1}` (unmatched
//! edges keep `sgn·F`), let `Γ(x, y)` be the weighted sum over all directed
//! paths from `x` to `y`. The reduced differential, projection, inclusion
//! and homotopy are the restrictions of `Γ` to critical vertices and to
//! adjacent levels. `Γ` is computed by a single sweep over a topological
//! order of the modified graph.

use std::collections::BTreeMap;

use crate::error::{MorseError, Result};
use crate::matching::{gradient_flow_lines, modified_graph, topological_order, AcyclicMatching};
use crate::matrix::{ChainComplex, Coefficient, GradedMap, HomotopyData, SparseMatrix};
use crate::quiver::{sheaf_complex, MorseQuiver, QuiverEdge, QuiverSheaf};

#[derive(Clone, Debug)]
pub struct MorseReductionResult<O, C: Coefficient> {
    /// Critical vertices of the original quiver; vertex `j` of the reduced
    /// quiver is `critical[j]`.
    pub critical: Vec<usize>,
    /// One edge per gradient flow line.
    pub reduced_quiver: MorseQuiver,
    pub reduced_sheaf: QuiverSheaf<O, C>,
    pub original: ChainComplex<O, C>,
    pub reduced: ChainComplex<O, C>,
    /// Maps between `original` (big) and `reduced` (small).
    pub homotopy: HomotopyData<C>,
}

pub fn morse_reduce<O: Clone, C: Coefficient>(
    q: &MorseQuiver,
    m: &AcyclicMatching,
    f: &QuiverSheaf<O, C>,
) -> Result<MorseReductionResult<O, C>> {
    let original = sheaf_complex(q, f)?;
    if m.partner_edges(q).is_none() {
        return Err(MorseError::InvalidMatching);
    }
    let adj = modified_graph(q, m);
    let order = topological_order(&adj).ok_or(MorseError::InvalidMatching)?;

    // edge weights of the modified graph
    let mut weight: Vec<Option<C>> = vec![None; q.edges.len()];
    for (i, e) in q.edges.iter().enumerate() {
        let sign = e.sign.ok_or(MorseError::MissingOrientation { edge: i })?;
        let signed = if sign < 0 { f.values[i].negated() } else { f.values[i].clone() };
        weight[i] = Some(if m.edges.contains(&i) {
            signed.try_inverse().ok_or(MorseError::MatchingNotRespecting { edge: i })?.negated()
        } else {
            signed
        });
    }

    // Γ(x, ·), keeping only targets at level ≥ |x| − 1
    let n = q.num_vertices();
    let mut gamma: Vec<BTreeMap<usize, C>> = vec![BTreeMap::new(); n];
    for &x in order.iter().rev() {
        let floor = q.levels[x] - 1;
        let mut acc: BTreeMap<usize, C> = BTreeMap::new();
        acc.insert(x, C::one_in(&f.ctx));
        for &(e, z) in &adj[x] {
            let w = weight[e].as_ref().expect("weights are set");
            for (&y, g) in &gamma[z] {
                if q.levels[y] < floor {
                    continue;
                }
                let term = w.times(g);
                let slot = acc.entry(y).or_insert_with(|| C::zero_in(&f.ctx));
                *slot = slot.plus(&term);
            }
        }
        acc.retain(|_, v| !v.vanishes());
        gamma[x] = acc;
    }

    let critical = m.critical_vertices(q);
    let mut is_critical = vec![false; n];
    for &c in &critical {
        is_critical[c] = true;
    }
    let basis = q.basis();
    let pos = q.positions();
    let mut crit_basis: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for &c in &critical {
        crit_basis.entry(q.levels[c]).or_default().push(c);
    }
    let mut crit_pos = vec![usize::MAX; n];
    for vs in crit_basis.values() {
        for (i, &v) in vs.iter().enumerate() {
            crit_pos[v] = i;
        }
    }
    let big_rank = |k: i64| basis.get(&k).map_or(0, |v| v.len());
    let small_rank = |k: i64| crit_basis.get(&k).map_or(0, |v| v.len());

    let mut reduced = ChainComplex::new(f.ctx.clone());
    for (&k, _) in &basis {
        reduced.terms.insert(k, crit_basis.get(&k).map_or(Vec::new(), |vs| vs.iter().map(|&v| f.objects[v].clone()).collect()));
    }
    let mut projection: GradedMap<C> = BTreeMap::new();
    let mut inclusion: GradedMap<C> = BTreeMap::new();
    let mut homotopy: GradedMap<C> = BTreeMap::new();
    for &k in basis.keys() {
        projection.insert(k, SparseMatrix::new(small_rank(k), big_rank(k)));
        inclusion.insert(k, SparseMatrix::new(big_rank(k), small_rank(k)));
        homotopy.insert(k, SparseMatrix::new(big_rank(k + 1), big_rank(k)));
        reduced.differentials.insert(k, SparseMatrix::new(small_rank(k - 1), small_rank(k)));
    }
    for x in 0..n {
        let k = q.levels[x];
        for (&y, g) in &gamma[x] {
            let l = q.levels[y];
            if l == k && is_critical[y] {
                projection.get_mut(&k).unwrap().set(crit_pos[y], pos[x], g.clone());
            }
            if l == k && is_critical[x] {
                inclusion.get_mut(&k).unwrap().set(pos[y], crit_pos[x], g.clone());
            }
            if l == k + 1 {
                // paths that climb a level end with a reversed matched edge
                homotopy.get_mut(&k).unwrap().set(pos[y], pos[x], g.clone());
            }
            if l == k - 1 && is_critical[x] && is_critical[y] {
                reduced.differentials.get_mut(&k).unwrap().set(crit_pos[y], crit_pos[x], g.clone());
            }
        }
    }
    reduced.differentials.retain(|_, d| !d.is_zero());

    // reduced quiver: one edge per flow line, valued by the composite
    let mut levels = Vec::with_capacity(critical.len());
    let mut index = vec![usize::MAX; n];
    for (j, &c) in critical.iter().enumerate() {
        index[c] = j;
        levels.push(q.levels[c]);
    }
    let mut edges = Vec::new();
    let mut values = Vec::new();
    for &s in &critical {
        for &t in crit_basis.get(&(q.levels[s] - 1)).map_or(&[][..], |v| v.as_slice()) {
            for line in gradient_flow_lines(q, m, s, t)? {
                let mut value = C::one_in(&f.ctx);
                for (i, &e) in line.edges.iter().enumerate() {
                    let v = if i % 2 == 0 {
                        f.values[e].clone()
                    } else {
                        f.values[e].try_inverse().ok_or(MorseError::MatchingNotRespecting { edge: e })?
                    };
                    value = value.times(&v);
                }
                edges.push(QuiverEdge { src: index[s], dst: index[t], sign: Some(line.sign) });
                values.push(value);
            }
        }
    }
    let reduced_quiver = MorseQuiver { levels, edges };
    let reduced_sheaf = QuiverSheaf {
        ctx: f.ctx.clone(),
        objects: critical.iter().map(|&c| f.objects[c].clone()).collect(),
        values,
    };
    Ok(MorseReductionResult {
        critical,
        reduced_quiver,
        reduced_sheaf,
        original,
        reduced,
        homotopy: HomotopyData { projection, inclusion, homotopy },
    })
}
