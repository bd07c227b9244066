//! Exact V-representations of small polytopes, with just enough structure to
//! slice them by hyperplanes and slabs.
//!
//! Each vertex carries the set of constraints of the (implicit) H-description
//! that are tight at it. Two vertices span an edge iff no third vertex is
//! tight on every constraint the pair shares, which lets us slice without
//! ever solving a linear program.

use num_traits::Zero;
use toric_core::linalg;
use toric_core::Rat;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TightSet(Vec<u64>);

impl TightSet {
    pub fn insert(&mut self, i: usize) {
        let (w, b) = (i / 64, i % 64);
        if self.0.len() <= w {
            self.0.resize(w + 1, 0);
        }
        self.0[w] |= 1 << b;
    }

    pub fn intersect(&self, other: &TightSet) -> TightSet {
        TightSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    pub fn is_superset_of(&self, other: &TightSet) -> bool {
        other.0.iter().enumerate().all(|(i, &b)| b & !self.0.get(i).copied().unwrap_or(0) == 0)
    }
}

#[derive(Clone, Debug)]
pub struct VPolytope {
    pub vertices: Vec<Vec<Rat>>,
    pub tight: Vec<TightSet>,
    pub dim: usize,
    next_id: usize,
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

impl VPolytope {
    pub fn new(vertices: Vec<Vec<Rat>>, tight: Vec<TightSet>, dim: usize, next_id: usize) -> Self {
        VPolytope { vertices, tight, dim, next_id }
    }

    pub fn ambient(&self) -> usize {
        self.vertices.first().map_or(0, |v| v.len())
    }

    /// Range of a linear functional over the polytope.
    pub fn range(&self, a: &[Rat]) -> (Rat, Rat) {
        let mut it = self.vertices.iter().map(|v| dot(a, v));
        let first = it.next().expect("nonempty polytope");
        it.fold((first.clone(), first), |(lo, hi), x| {
            let lo = if x < lo { x.clone() } else { lo };
            let hi = if x > hi { x } else { hi };
            (lo, hi)
        })
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        let common = self.tight[i].intersect(&self.tight[j]);
        !(0..self.vertices.len()).any(|k| k != i && k != j && self.tight[k].is_superset_of(&common))
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.vertices.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.adjacent(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Intersection with `lo ≤ a·w ≤ hi`, assumed to meet the relative interior.
    /// When `lo == hi` this is a hyperplane section of one lower dimension.
    pub fn slice(&self, a: &[Rat], lo: &Rat, hi: &Rat) -> VPolytope {
        let vals: Vec<Rat> = self.vertices.iter().map(|v| dot(a, v)).collect();
        let (rlo, rhi) = self.range(a);
        let id_lo = self.next_id;
        let id_hi = if lo == hi { id_lo } else { id_lo + 1 };
        let cut_lo = *lo > rlo;
        let cut_hi = *hi < rhi;
        let mut vertices = Vec::new();
        let mut tight = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if vals[i] >= *lo && vals[i] <= *hi {
                let mut t = self.tight[i].clone();
                if cut_lo && vals[i] == *lo {
                    t.insert(id_lo);
                }
                if cut_hi && vals[i] == *hi {
                    t.insert(id_hi);
                }
                vertices.push(v.clone());
                tight.push(t);
            }
        }
        let mut levels: Vec<(Rat, usize)> = Vec::new();
        if cut_lo {
            levels.push((lo.clone(), id_lo));
        }
        if cut_hi && (lo != hi || !cut_lo) {
            levels.push((hi.clone(), id_hi));
        }
        for (i, j) in self.edges() {
            for (b, id) in &levels {
                let (vi, vj) = (&vals[i], &vals[j]);
                if (vi < b && b < vj) || (vj < b && b < vi) {
                    let t = (b - vi) / (vj - vi);
                    let p: Vec<Rat> = self.vertices[i]
                        .iter()
                        .zip(&self.vertices[j])
                        .map(|(x, y)| x + (y - x) * t.clone())
                        .collect();
                    let mut ts = self.tight[i].intersect(&self.tight[j]);
                    ts.insert(*id);
                    vertices.push(p);
                    tight.push(ts);
                }
            }
        }
        let dim = if lo == hi && rlo < rhi { self.dim - 1 } else { self.dim };
        VPolytope { vertices, tight, dim, next_id: self.next_id + 2 }
    }

    pub fn translate(&self, z: &[Rat]) -> VPolytope {
        VPolytope {
            vertices: self.vertices.iter().map(|v| v.iter().zip(z).map(|(a, b)| a + b).collect()).collect(),
            tight: self.tight.clone(),
            dim: self.dim,
            next_id: self.next_id,
        }
    }

    /// The face spanned by the given vertex subset (must be a face).
    pub fn face(&self, idx: &[usize], dim: usize) -> VPolytope {
        VPolytope {
            vertices: idx.iter().map(|&i| self.vertices[i].clone()).collect(),
            tight: idx.iter().map(|&i| self.tight[i].clone()).collect(),
            dim,
            next_id: self.next_id,
        }
    }

    /// A deterministic, translation-equivariant relative-interior point:
    /// fix coordinates one at a time at the midpoint of their range.
    pub fn lex_midpoint(&self) -> Vec<Rat> {
        let c = self.ambient();
        let mut p = self.clone();
        for i in 0..c {
            let mut e = vec![Rat::zero(); c];
            e[i] = Rat::from_integer(1.into());
            let (lo, hi) = p.range(&e);
            if lo != hi {
                let mid = (lo + hi) / Rat::from_integer(2.into());
                p = p.slice(&e, &mid, &mid);
            }
        }
        p.vertices[0].clone()
    }

    /// Vertices' centroid (a relative-interior point).
    pub fn centroid(&self) -> Vec<Rat> {
        let n = Rat::from_integer((self.vertices.len() as i64).into());
        let c = self.ambient();
        (0..c).map(|k| self.vertices.iter().fold(Rat::zero(), |acc, v| acc + v[k].clone()) / n.clone()).collect()
    }
}

/// Affine dimension of a point set.
pub fn affine_dim(points: &[&Vec<Rat>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = points[0];
    let diffs: Vec<Vec<Rat>> =
        points[1..].iter().map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect()).collect();
    linalg::rank(&diffs, base.len())
}
