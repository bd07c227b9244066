//! Line bundle cohomology on a smooth complete toric variety, one
//! character at a time: `H^i(O(D))_m = H̃^{i−1}(V_{D,m})`, where `V_{D,m}`
//! is the subcomplex of cones all of whose rays satisfy `⟨m, u_ρ⟩ < −a_ρ`.

use std::collections::HashMap;

use num_traits::{ToPrimitive, Zero};
use toric_core::support::{ceil, floor};
use toric_core::{linalg, Int, Rat, StackyFan};

use crate::error::{FrobeniusError, Result};
use crate::zonotope::for_each_subset;

/// An axis-parallel box of characters `lower ≤ m ≤ upper`. A box with some
/// `lower_i > upper_i` is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeBox {
    pub lower: Vec<Int>,
    pub upper: Vec<Int>,
}

impl DegreeBox {
    pub fn is_empty(&self) -> bool {
        self.lower.iter().zip(&self.upper).any(|(l, u)| l > u)
    }

    /// Whether every character of `other` lies in `self`.
    pub fn covers(&self, other: &DegreeBox) -> bool {
        other.is_empty()
            || (self.lower.iter().zip(&other.lower).all(|(a, b)| a <= b)
                && self.upper.iter().zip(&other.upper).all(|(a, b)| a >= b))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    /// `dims[i] = dim H^i(O(D))`.
    pub dims: Vec<u64>,
    /// First character (in lexicographic order) carrying nonzero cohomology,
    /// with its cohomological degree.
    pub witness: Option<(usize, Vec<Int>)>,
    pub degree_box: DegreeBox,
}

impl CohomologyReport {
    pub fn total(&self) -> u64 {
        self.dims.iter().sum()
    }

    pub fn is_nonzero(&self) -> bool {
        self.total() > 0
    }
}

/// Characters that can carry cohomology. The sign pattern of `m` only changes
/// across the hyperplanes `⟨m, u_ρ⟩ = −a_ρ − 1/2`, and only bounded cells of
/// that arrangement contribute on a complete fan; these lie in the bounding
/// box of the arrangement's vertices.
pub fn support_box(fan: &StackyFan, d: &[Int]) -> DegreeBox {
    let n = fan.rank_n();
    if n == 0 {
        return DegreeBox { lower: vec![], upper: vec![] };
    }
    let rays: Vec<Vec<Rat>> =
        fan.rays().iter().map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect()).collect();
    let half = Rat::new(Int::from(1), Int::from(2));
    let rhs: Vec<Rat> = d.iter().map(|a| -Rat::from_integer(a.clone()) - &half).collect();
    let mut lo: Option<Vec<Rat>> = None;
    let mut hi: Option<Vec<Rat>> = None;
    for_each_subset(rays.len(), n, &mut |s| {
        let m: Vec<Vec<Rat>> = s.iter().map(|&r| rays[r].clone()).collect();
        if linalg::determinant(&m).is_zero() {
            return;
        }
        let b: Vec<Rat> = s.iter().map(|&r| rhs[r].clone()).collect();
        let v = linalg::solve(&m, n, &b).expect("nonsingular system");
        match (&mut lo, &mut hi) {
            (Some(l), Some(h)) => {
                for i in 0..n {
                    if v[i] < l[i] {
                        l[i] = v[i].clone();
                    }
                    if v[i] > h[i] {
                        h[i] = v[i].clone();
                    }
                }
            }
            _ => {
                lo = Some(v.clone());
                hi = Some(v);
            }
        }
    });
    match (lo, hi) {
        (Some(l), Some(h)) => DegreeBox { lower: l.iter().map(ceil).collect(), upper: h.iter().map(floor).collect() },
        // no vertices: rays do not span, nothing is bounded
        _ => DegreeBox { lower: vec![Int::from(1); n], upper: vec![Int::zero(); n] },
    }
}

/// Reduced Betti numbers, shifted: entry `i` is `dim H̃^{i−1}` of the
/// subcomplex of cones whose rays all lie in `allowed` (the empty face
/// included), for `i = 0, …, n`.
fn shifted_reduced_betti(fan: &StackyFan, allowed: &[bool]) -> Vec<u64> {
    let n = fan.rank_n();
    let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n + 1];
    faces[0].push(Vec::new());
    for c in fan.cones() {
        if c.iter().all(|&r| allowed[r]) {
            faces[c.len()].push(c.clone());
        }
    }
    // rank of ∂_k: faces[k] → faces[k−1]
    let mut ranks = vec![0usize; n + 2];
    for k in 1..=n {
        if faces[k].is_empty() || faces[k - 1].is_empty() {
            continue;
        }
        let index: HashMap<&Vec<usize>, usize> = faces[k - 1].iter().enumerate().map(|(i, f)| (f, i)).collect();
        let rows: Vec<Vec<Rat>> = faces[k]
            .iter()
            .map(|f| {
                let mut row = vec![Rat::zero(); faces[k - 1].len()];
                for skip in 0..f.len() {
                    let face: Vec<usize> =
                        f.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &r)| r).collect();
                    let sign = if skip % 2 == 0 { 1 } else { -1 };
                    row[index[&face]] = Rat::from_integer(Int::from(sign));
                }
                row
            })
            .collect();
        ranks[k] = linalg::rank(&rows, faces[k - 1].len());
    }
    (0..=n).map(|i| (faces[i].len() - ranks[i] - ranks[i + 1]) as u64).collect()
}

fn small(v: &[Int]) -> Result<Vec<i64>> {
    v.iter().map(|x| x.to_i64().ok_or(FrobeniusError::Overflow)).collect()
}

/// All cohomology of `O(Σ a_ρ D_ρ)`. With `user_box` given, the scan is
/// restricted to it and must cover [`support_box`].
pub fn line_bundle_cohomology(fan: &StackyFan, d: &[Int], user_box: Option<&DegreeBox>) -> Result<CohomologyReport> {
    if !fan.is_variety() {
        return Err(FrobeniusError::NotVariety);
    }
    if !fan.is_complete() {
        return Err(FrobeniusError::NotComplete);
    }
    let n = fan.rank_n();
    let needed = support_box(fan, d);
    let scan = match user_box {
        Some(b) => {
            if !b.covers(&needed) {
                return Err(FrobeniusError::BoxTooSmall {
                    needed_lower: needed.lower.iter().map(|x| x.to_string()).collect(),
                    needed_upper: needed.upper.iter().map(|x| x.to_string()).collect(),
                });
            }
            b.clone()
        }
        None => needed.clone(),
    };
    let mut dims = vec![0u64; n + 1];
    let mut witness = None;
    if scan.is_empty() {
        return Ok(CohomologyReport { dims, witness, degree_box: needed });
    }
    let rays: Vec<Vec<i64>> = fan.rays().iter().map(|r| small(r)).collect::<Result<_>>()?;
    let a = small(d)?;
    let lo = small(&scan.lower)?;
    let hi = small(&scan.upper)?;
    let mut cache: HashMap<Vec<bool>, Vec<u64>> = HashMap::new();
    let mut m = lo.clone();
    loop {
        let pattern: Vec<bool> =
            rays.iter().zip(&a).map(|(u, &ar)| u.iter().zip(&m).map(|(x, y)| x * y).sum::<i64>() < -ar).collect();
        let h = cache.entry(pattern).or_insert_with_key(|p| shifted_reduced_betti(fan, p));
        for (i, &x) in h.iter().enumerate() {
            dims[i] += x;
            if x > 0 && witness.is_none() {
                witness = Some((i, m.iter().map(|&v| Int::from(v)).collect()));
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(CohomologyReport { dims, witness, degree_box: needed });
            }
            i -= 1;
            if m[i] < hi[i] {
                m[i] += 1;
                m[i + 1..].copy_from_slice(&lo[i + 1..]);
                break;
            }
        }
    }
}

/// `H^•(O(D)) ≠ 0`, with the degree and character of a witness.
pub fn cohomology_nonvanishing(
    fan: &StackyFan,
    d: &[Int],
    user_box: Option<&DegreeBox>,
) -> Result<(bool, Option<(usize, Vec<Int>)>)> {
    let r = line_bundle_cohomology(fan, d, user_box)?;
    Ok((r.is_nonzero(), r.witness))
}
