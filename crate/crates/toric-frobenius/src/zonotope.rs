//! The zonotope `Z ⊂ Pic(X)_R`, the convex hull of the classes
//! `Σ_{ρ∈A} −D_ρ`, together with its facet description.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use toric_core::lattice::{self, IntMatrix};
use toric_core::{Int, Rat};

use crate::error::{FrobeniusError, Result};
use crate::pic::PicCoordinates;

/// `⟨normal, x⟩ ≤ bound`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Facet {
    pub normal: Vec<Int>,
    pub bound: Int,
}

impl Facet {
    fn value(&self, p: &[Rat]) -> Rat {
        self.normal.iter().zip(p).map(|(a, x)| x * Rat::from_integer(a.clone())).fold(Rat::zero(), |s, t| s + t)
    }

    fn is_tight(&self, p: &[Rat]) -> bool {
        self.value(p) == Rat::from_integer(self.bound.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Zonotope {
    pub dim: usize,
    /// Images of `−D_ρ`; `Z` is the Minkowski sum of the segments `[0, g]`.
    pub generators: Vec<Vec<Int>>,
    pub vertices: Vec<Vec<Int>>,
    pub facets: Vec<Facet>,
}

fn to_rat(v: &[Int]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

fn dot(a: &[Int], b: &[Int]) -> Int {
    lattice::dot(a, b)
}

impl Zonotope {
    pub fn of(coords: &PicCoordinates) -> Zonotope {
        let r = coords.rank();
        let generators: Vec<Vec<Int>> =
            (0..coords.num_rays()).map(|i| coords.ray_image(i).iter().map(|x| -x).collect()).collect();

        // Facet normals: primitive normals of hyperplanes spanned by r−1 generators.
        let mut normals: BTreeSet<Vec<Int>> = BTreeSet::new();
        if r == 1 {
            normals.insert(vec![Int::one()]);
        } else if r > 1 {
            let nonzero: Vec<&Vec<Int>> = generators.iter().filter(|g| g.iter().any(|x| !x.is_zero())).collect();
            for_each_subset(nonzero.len(), r - 1, &mut |s| {
                let rows: Vec<Vec<Int>> = s.iter().map(|&i| nonzero[i].clone()).collect();
                let k = lattice::kernel_saturated_basis(&IntMatrix::from_rows(rows, r));
                if k.len() == 1 {
                    let mut c = k[0].clone();
                    if c.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                        c = c.iter().map(|x| -x).collect();
                    }
                    normals.insert(c);
                }
            });
        }
        let support = |c: &[Int]| -> Int {
            generators.iter().map(|g| dot(c, g)).filter(|v| v.is_positive()).fold(Int::zero(), |s, v| s + v)
        };
        let mut facets = Vec::with_capacity(2 * normals.len());
        for c in normals {
            let neg: Vec<Int> = c.iter().map(|x| -x).collect();
            facets.push(Facet { bound: support(&c), normal: c });
            facets.push(Facet { bound: support(&neg), normal: neg });
        }
        facets.sort();

        // Vertices: subset sums at which the tight normals have full rank.
        let mut points: BTreeSet<Vec<Int>> = BTreeSet::new();
        points.insert(vec![Int::zero(); r]);
        for g in &generators {
            let shifted: Vec<Vec<Int>> =
                points.iter().map(|p| p.iter().zip(g).map(|(a, b)| a + b).collect()).collect();
            points.extend(shifted);
        }
        let vertices: Vec<Vec<Int>> = points
            .into_iter()
            .filter(|p| {
                let pr = to_rat(p);
                let tight: Vec<Vec<Int>> = facets.iter().filter(|f| f.is_tight(&pr)).map(|f| f.normal.clone()).collect();
                r == 0 || (!tight.is_empty() && lattice::rank(&IntMatrix::from_rows(tight, r)) == r)
            })
            .collect();
        Zonotope { dim: r, generators, vertices, facets }
    }

    pub fn contains(&self, p: &[Rat]) -> bool {
        self.facets.iter().all(|f| f.value(p) <= Rat::from_integer(f.bound.clone()))
    }

    pub fn contains_int(&self, p: &[Int]) -> bool {
        self.contains(&to_rat(p))
    }

    fn tight(&self, p: &[Rat]) -> Vec<usize> {
        (0..self.facets.len()).filter(|&i| self.facets[i].is_tight(p)).collect()
    }

    /// Whether `q` lies in `⋆_Z(p)`, the union of the relative interiors of
    /// the faces containing `p`: `q ∈ Z` and every facet tight at `q` is
    /// tight at `p`.
    pub fn star_face_contains(&self, p: &[Rat], q: &[Rat]) -> Result<bool> {
        if !self.contains(p) {
            return Err(FrobeniusError::PointOutsideZ);
        }
        if !self.contains(q) {
            return Ok(false);
        }
        let tp = self.tight(p);
        Ok(self.tight(q).iter().all(|i| tp.contains(i)))
    }

    /// Lattice points of `Pic` inside `⋆_Z(p)`.
    pub fn star_face_lattice_points(&self, p: &[Rat]) -> Result<Vec<Vec<Int>>> {
        if !self.contains(p) {
            return Err(FrobeniusError::PointOutsideZ);
        }
        let mut out = Vec::new();
        for q in self.lattice_points() {
            if self.star_face_contains(p, &to_rat(&q))? {
                out.push(q);
            }
        }
        Ok(out)
    }

    /// All lattice points of `Z`, lexicographically.
    pub fn lattice_points(&self) -> Vec<Vec<Int>> {
        let lo: Vec<Int> = (0..self.dim).map(|i| self.vertices.iter().map(|v| v[i].clone()).min().unwrap()).collect();
        let hi: Vec<Int> = (0..self.dim).map(|i| self.vertices.iter().map(|v| v[i].clone()).max().unwrap()).collect();
        let mut out = Vec::new();
        let mut q = lo.clone();
        loop {
            if self.contains_int(&q) {
                out.push(q.clone());
            }
            let mut i = self.dim;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if q[i] < hi[i] {
                    q[i] += 1;
                    for j in i + 1..self.dim {
                        q[j] = lo[j].clone();
                    }
                    break;
                }
            }
        }
    }

    /// `q ∈ p + cone(p − Z)`. The cone is the negated tangent cone of `Z`
    /// at `p`, so this holds iff `⟨c, q⟩ ≥ b` for every facet `⟨c, ·⟩ ≤ b`
    /// tight at `p`.
    pub fn translated_cone_contains(&self, p: &[Rat], q: &[Rat]) -> Result<bool> {
        if !self.contains(p) {
            return Err(FrobeniusError::PointOutsideZ);
        }
        Ok(self.tight(p).iter().all(|&i| self.facets[i].value(q) >= Rat::from_integer(self.facets[i].bound.clone())))
    }

    /// `x ∈ ((ℓ−1)/ℓ) Z + (1/ℓ)[D]`, the region containing `Frob_ℓ(D)`.
    pub fn frobenius_region_contains(&self, ell: u64, d: &[Int], x: &[Int]) -> bool {
        if ell == 1 {
            return d == x;
        }
        let l = Int::from(ell);
        let scale = Rat::new(Int::one(), Int::from(ell - 1));
        let p: Vec<Rat> = x.iter().zip(d).map(|(a, b)| Rat::from_integer(&l * a - b) * &scale).collect();
        self.contains(&p)
    }
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut s: Vec<usize> = (0..k).collect();
    loop {
        f(&s);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if s[i] < n - k + i {
                break;
            }
        }
        s[i] += 1;
        for j in i + 1..k {
            s[j] = s[j - 1] + 1;
        }
    }
}
