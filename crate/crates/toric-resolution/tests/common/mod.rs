#![allow(dead_code)]

use toric_core::{int, DivisorClass, PicGroup, Poly, Rat, StackyFan};
use toric_morse::{ChainComplex, SparseMatrix};

pub const BOUND: usize = 4;

pub fn x(n: usize, i: usize) -> Poly {
    Poly::var(n, i)
}

pub fn one(n: usize) -> Poly {
    Poly::constant(n, Rat::from_integer(int(1)))
}

pub fn class(fan: &StackyFan, d: &[i64]) -> DivisorClass {
    PicGroup::of(fan).canonical(&d.iter().map(|&v| int(v)).collect::<Vec<_>>())
}

/// A complex assembled from explicit classes and entries.
pub fn explicit(
    fan: &StackyFan,
    terms: &[(i64, Vec<Vec<i64>>)],
    diffs: &[(i64, Vec<(usize, usize, Poly)>)],
) -> ChainComplex<DivisorClass, Poly> {
    let mut c = ChainComplex::new(fan.num_rays());
    for (k, t) in terms {
        c.terms.insert(*k, t.iter().map(|d| class(fan, d)).collect());
    }
    for (k, entries) in diffs {
        let mut m = SparseMatrix::new(c.rank(k - 1), c.rank(*k));
        for (r, col, p) in entries {
            m.set(*r, *col, p.clone());
        }
        c.differentials.insert(*k, m);
    }
    c
}

/// Sorted summand classes of one degree.
pub fn sorted_terms(c: &ChainComplex<DivisorClass, Poly>, k: i64) -> Vec<DivisorClass> {
    let mut t = c.terms.get(&k).cloned().unwrap_or_default();
    t.sort();
    t
}
