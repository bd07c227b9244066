//! Isomorphisms of complexes given by signed permutations of summands.

use std::collections::BTreeMap;

use toric_core::{DivisorClass, Poly};
use toric_morse::{ChainComplex, Coefficient, HomotopyData, SparseMatrix};

/// `P_k: A_k → B_k` sending basis element `j` to `signs[k][j]·e_{perm[k][j]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedIso {
    pub perm: BTreeMap<i64, Vec<usize>>,
    pub signs: BTreeMap<i64, Vec<i8>>,
}

impl SignedIso {
    pub fn matrix(&self, k: i64, ctx: &usize) -> SparseMatrix<Poly> {
        let perm = self.perm.get(&k).map_or(&[][..], |v| v.as_slice());
        let mut m = SparseMatrix::new(perm.len(), perm.len());
        for (j, &t) in perm.iter().enumerate() {
            let one = Poly::one_in(ctx);
            m.set(t, j, if self.signs[&k][j] < 0 { one.negated() } else { one });
        }
        m
    }

    /// The isomorphism as a deformation retraction with zero homotopy.
    pub fn homotopy_data(&self, ctx: &usize) -> HomotopyData<Poly> {
        let mut h = HomotopyData { projection: BTreeMap::new(), inclusion: BTreeMap::new(), homotopy: BTreeMap::new() };
        for &k in self.perm.keys() {
            let p = self.matrix(k, ctx);
            h.inclusion.insert(k, p.transpose());
            h.projection.insert(k, p);
        }
        h
    }
}

struct Search<'a> {
    a: &'a ChainComplex<DivisorClass, Poly>,
    b: &'a ChainComplex<DivisorClass, Poly>,
    degrees: Vec<i64>,
    fixed: &'a [(i64, usize, usize)],
    perm: BTreeMap<i64, Vec<usize>>,
    signs: BTreeMap<i64, Vec<i8>>,
    used: BTreeMap<i64, Vec<bool>>,
}

impl Search<'_> {
    /// Column `j` of `d^A_k` transported by the assignment in degree `k−1`.
    fn transported_column(&self, k: i64, j: usize) -> BTreeMap<usize, Poly> {
        let d = self.a.d(k);
        let mut col = BTreeMap::new();
        for (&(r, c), v) in d.entries() {
            if c == j {
                let t = self.perm[&(k - 1)][r];
                let s = self.signs[&(k - 1)][r];
                col.insert(t, if s < 0 { v.negated() } else { v.clone() });
            }
        }
        col
    }

    fn column_of_b(&self, k: i64, j: usize) -> BTreeMap<usize, Poly> {
        self.b.d(k).entries().filter(|((_, c), _)| *c == j).map(|(&(r, _), v)| (r, v.clone())).collect()
    }

    fn candidates(&self, k: i64, j: usize) -> Vec<usize> {
        if let Some(&(_, _, t)) = self.fixed.iter().find(|&&(d, s, _)| d == k && s == j) {
            return vec![t];
        }
        let class = &self.a.terms[&k][j];
        (0..self.b.rank(k)).filter(|&t| !self.used[&k][t] && &self.b.terms[&k][t] == class).collect()
    }

    fn run(&mut self, di: usize, j: usize) -> bool {
        if di == self.degrees.len() {
            return true;
        }
        let k = self.degrees[di];
        if j == self.a.rank(k) {
            return self.run(di + 1, 0);
        }
        let col = self.transported_column(k, j);
        for t in self.candidates(k, j) {
            if self.used[&k][t] {
                continue;
            }
            let target = self.column_of_b(k, t);
            let options: Vec<i8> = if col.is_empty() && target.is_empty() {
                vec![1, -1]
            } else if col == target {
                vec![1]
            } else if col.len() == target.len() && col.iter().all(|(r, v)| target.get(r) == Some(&v.negated())) {
                vec![-1]
            } else {
                vec![]
            };
            for s in options {
                self.perm.get_mut(&k).unwrap()[j] = t;
                self.signs.get_mut(&k).unwrap()[j] = s;
                self.used.get_mut(&k).unwrap()[t] = true;
                if self.run(di, j + 1) {
                    return true;
                }
                self.used.get_mut(&k).unwrap()[t] = false;
            }
        }
        false
    }
}

/// Searches for a signed permutation `P` with `d^B P = P d^A` and matching
/// classes; `fixed` pins `(degree, index in A, index in B)` pairs.
/// Candidates are filtered by class and by the transported column of the
/// differential, so the search is a bipartite matching on
/// (class, column) signatures with backtracking on ties.
pub fn find_signed_isomorphism(
    a: &ChainComplex<DivisorClass, Poly>,
    b: &ChainComplex<DivisorClass, Poly>,
    fixed: &[(i64, usize, usize)],
) -> Option<SignedIso> {
    if a.ctx != b.ctx {
        return None;
    }
    let mut degrees: Vec<i64> = a.terms.keys().chain(b.terms.keys()).copied().collect();
    degrees.sort_unstable();
    degrees.dedup();
    for &k in &degrees {
        let mut ca = a.terms.get(&k).cloned().unwrap_or_default();
        let mut cb = b.terms.get(&k).cloned().unwrap_or_default();
        ca.sort();
        cb.sort();
        if ca != cb {
            return None;
        }
    }
    let degrees: Vec<i64> = degrees.into_iter().filter(|k| a.rank(*k) > 0).collect();
    let mut search = Search {
        a,
        b,
        fixed,
        perm: degrees.iter().map(|&k| (k, vec![0; a.rank(k)])).collect(),
        signs: degrees.iter().map(|&k| (k, vec![1; a.rank(k)])).collect(),
        used: degrees.iter().map(|&k| (k, vec![false; b.rank(k)])).collect(),
        degrees,
    };
    // the lowest degree has no incoming constraint; an empty sentinel keeps
    // `transported_column` uniform
    let below = search.degrees.first().map(|&k| k - 1);
    if let Some(k) = below {
        search.perm.insert(k, vec![]);
        search.signs.insert(k, vec![]);
    }
    if search.run(0, 0) {
        if let Some(k) = below {
            search.perm.remove(&k);
            search.signs.remove(&k);
        }
        Some(SignedIso { perm: search.perm, signs: search.signs })
    } else {
        None
    }
}

/// `true` iff the complexes agree up to signed permutation of summands.
pub fn isomorphic_up_to_units(a: &ChainComplex<DivisorClass, Poly>, b: &ChainComplex<DivisorClass, Poly>) -> bool {
    find_signed_isomorphism(a, b, &[]).is_some()
}
