//! Sparse matrices over a coefficient ring and bounded chain complexes.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use toric_core::{Poly, Rat};

/// Commutative coefficient ring for matrix entries.
///
/// `Ctx` carries whatever is needed to build constants (the number of
/// variables for polynomials, nothing for rationals).
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    type Ctx: Clone + PartialEq + fmt::Debug;

    fn zero_in(ctx: &Self::Ctx) -> Self;
    fn one_in(ctx: &Self::Ctx) -> Self;
    fn vanishes(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    /// The multiplicative inverse when the entry counts as invertible.
    fn try_inverse(&self) -> Option<Self>;

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }
}

impl<T: Clone + Integer + fmt::Debug> Coefficient for Ratio<T> {
    type Ctx = ();

    fn zero_in(_: &()) -> Self {
        Zero::zero()
    }
    fn one_in(_: &()) -> Self {
        One::one()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }
    fn times(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }
    fn negated(&self) -> Self {
        Ratio::new_raw(T::zero(), T::one()) - self.clone()
    }
    fn try_inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Only the unit monomials `±1·x^0` are treated as invertible.
impl Coefficient for Poly {
    type Ctx = usize;

    fn zero_in(nvars: &usize) -> Self {
        Poly::zero(*nvars)
    }
    fn one_in(nvars: &usize) -> Self {
        Poly::one(*nvars)
    }
    fn vanishes(&self) -> bool {
        Poly::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn try_inverse(&self) -> Option<Self> {
        match self.as_unit() {
            Some(c) if c == <Rat as One>::one() || c == -<Rat as One>::one() => Some(self.clone()),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct SparseMatrix<C> {
    pub rows: usize,
    pub cols: usize,
    entries: BTreeMap<(usize, usize), C>,
}

impl<C: Coefficient> SparseMatrix<C> {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(ctx: &C::Ctx, n: usize) -> Self {
        let mut m = Self::new(n, n);
        for i in 0..n {
            m.entries.insert((i, i), C::one_in(ctx));
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&C> {
        self.entries.get(&(r, c))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &C)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Replaces an entry; zero values remove it.
    pub fn set(&mut self, r: usize, c: usize, v: C) {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) outside {}x{}", self.rows, self.cols);
        if v.vanishes() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    /// Adds `v` to an entry, dropping it if the sum cancels.
    pub fn add_to(&mut self, r: usize, c: usize, v: &C) {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) outside {}x{}", self.rows, self.cols);
        if v.vanishes() {
            return;
        }
        match self.entries.get_mut(&(r, c)) {
            Some(x) => {
                let s = x.plus(v);
                if s.vanishes() {
                    self.entries.remove(&(r, c));
                } else {
                    *x = s;
                }
            }
            None => {
                self.entries.insert((r, c), v.clone());
            }
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut by_row: BTreeMap<usize, Vec<(usize, &C)>> = BTreeMap::new();
        for (&(r, c), v) in &other.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut out = Self::new(self.rows, other.cols);
        for (&(i, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(j, b) in row {
                    out.add_to(i, j, &a.times(b));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (&(r, c), v) in &other.entries {
            out.add_to(r, c, v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|v| v.negated())
    }

    pub fn transpose(&self) -> Self {
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|(&(r, c), v)| ((c, r), v.clone())).collect(),
        }
    }

    /// Applies `f` entrywise (zero results are dropped).
    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> SparseMatrix<D> {
        let mut out = SparseMatrix::new(self.rows, self.cols);
        for (&(r, c), v) in &self.entries {
            out.set(r, c, f(v));
        }
        out
    }

    /// Permutes/selects rows and columns: entry `(r, c)` moves to
    /// `(row_map[r], col_map[c])`.
    pub fn reindex(&self, rows: usize, cols: usize, row_map: &[usize], col_map: &[usize]) -> Self {
        let mut out = Self::new(rows, cols);
        for (&(r, c), v) in &self.entries {
            out.set(row_map[r], col_map[c], v.clone());
        }
        out
    }

    pub fn scale_rows_cols(&self, row_signs: &[i8], col_signs: &[i8]) -> Self {
        let mut out = Self::new(self.rows, self.cols);
        for (&(r, c), v) in &self.entries {
            let s = row_signs[r] * col_signs[c];
            out.set(r, c, if s < 0 { v.negated() } else { v.clone() });
        }
        out
    }
}

/// A bounded chain complex `… → C_k → C_{k−1} → …` whose summands are labelled
/// by objects of type `O`. `differentials[k]` is `d_k: C_k → C_{k−1}` with rows
/// indexed by `C_{k−1}` and columns by `C_k`.
#[derive(Clone, PartialEq, Debug)]
pub struct ChainComplex<O, C: Coefficient> {
    pub ctx: C::Ctx,
    pub terms: BTreeMap<i64, Vec<O>>,
    pub differentials: BTreeMap<i64, SparseMatrix<C>>,
}

/// Degreewise matrices of a graded map.
pub type GradedMap<C> = BTreeMap<i64, SparseMatrix<C>>;

impl<O: Clone, C: Coefficient> ChainComplex<O, C> {
    pub fn new(ctx: C::Ctx) -> Self {
        ChainComplex { ctx, terms: BTreeMap::new(), differentials: BTreeMap::new() }
    }

    pub fn rank(&self, k: i64) -> usize {
        self.terms.get(&k).map_or(0, |t| t.len())
    }

    pub fn ranks(&self) -> Vec<(i64, usize)> {
        self.terms.iter().map(|(&k, t)| (k, t.len())).collect()
    }

    pub fn min_degree(&self) -> i64 {
        self.terms.iter().find(|(_, t)| !t.is_empty()).map_or(0, |(&k, _)| k)
    }

    pub fn max_degree(&self) -> i64 {
        self.terms.iter().rev().find(|(_, t)| !t.is_empty()).map_or(0, |(&k, _)| k)
    }

    /// `d_k`, materialising a zero matrix of the right shape when absent.
    pub fn d(&self, k: i64) -> SparseMatrix<C> {
        self.differentials.get(&k).cloned().unwrap_or_else(|| SparseMatrix::new(self.rank(k - 1), self.rank(k)))
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.terms.keys().copied().collect()
    }

    /// Exact check of `d_{k−1} ∘ d_k = 0` in every degree.
    pub fn is_d_squared_zero(&self) -> bool {
        self.terms.keys().all(|&k| self.d(k - 1).mul(&self.d(k)).is_zero())
    }

    /// `Σ (−1)^k rank C_k`.
    pub fn euler_characteristic(&self) -> i64 {
        self.terms.iter().map(|(&k, t)| if k.rem_euclid(2) == 0 { t.len() as i64 } else { -(t.len() as i64) }).sum()
    }

    /// Applies `f` to every differential entry.
    pub fn map_entries<D: Coefficient>(&self, ctx: D::Ctx, f: impl Fn(&C) -> D) -> ChainComplex<O, D> {
        ChainComplex {
            ctx,
            terms: self.terms.clone(),
            differentials: self.differentials.iter().map(|(&k, m)| (k, m.map(&f))).collect(),
        }
    }

    pub fn identity_map(&self) -> GradedMap<C> {
        self.terms.iter().map(|(&k, t)| (k, SparseMatrix::identity(&self.ctx, t.len()))).collect()
    }
}

fn graded_get<C: Coefficient>(m: &GradedMap<C>, k: i64, rows: usize, cols: usize) -> SparseMatrix<C> {
    m.get(&k).cloned().unwrap_or_else(|| SparseMatrix::new(rows, cols))
}

/// A strong deformation retraction datum between a complex `big` and a
/// smaller complex `small`: `p: big → small`, `i: small → big` and
/// `h: big_k → big_{k+1}` with `p∘i = id` and `i∘p − id = d h + h d`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomotopyData<C: Coefficient> {
    pub projection: GradedMap<C>,
    pub inclusion: GradedMap<C>,
    pub homotopy: GradedMap<C>,
}

/// Which homotopy identities hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomotopyCheck {
    pub projection_is_chain_map: bool,
    pub inclusion_is_chain_map: bool,
    pub retraction: bool,
    pub homotopy: bool,
}

impl HomotopyCheck {
    pub fn all(&self) -> bool {
        self.projection_is_chain_map && self.inclusion_is_chain_map && self.retraction && self.homotopy
    }
}

impl<C: Coefficient> HomotopyData<C> {
    /// The identity datum of a complex.
    pub fn identity<O: Clone>(c: &ChainComplex<O, C>) -> Self {
        HomotopyData { projection: c.identity_map(), inclusion: c.identity_map(), homotopy: BTreeMap::new() }
    }

    pub fn p(&self, k: i64, small: usize, big: usize) -> SparseMatrix<C> {
        graded_get(&self.projection, k, small, big)
    }

    pub fn i(&self, k: i64, small: usize, big: usize) -> SparseMatrix<C> {
        graded_get(&self.inclusion, k, big, small)
    }

    pub fn h(&self, k: i64, big_k: usize, big_k1: usize) -> SparseMatrix<C> {
        graded_get(&self.homotopy, k, big_k1, big_k)
    }

    /// Exact verification of all identities as matrix equations.
    pub fn verify<O: Clone>(&self, big: &ChainComplex<O, C>, small: &ChainComplex<O, C>) -> HomotopyCheck {
        let mut degrees: Vec<i64> = big.degrees();
        degrees.extend(small.degrees());
        degrees.sort_unstable();
        degrees.dedup();
        let mut out =
            HomotopyCheck { projection_is_chain_map: true, inclusion_is_chain_map: true, retraction: true, homotopy: true };
        for &k in &degrees {
            let (b, bm, bp) = (big.rank(k), big.rank(k - 1), big.rank(k + 1));
            let (s, sm) = (small.rank(k), small.rank(k - 1));
            let p = self.p(k, s, b);
            let pm = self.p(k - 1, sm, bm);
            let i = self.i(k, s, b);
            let im = self.i(k - 1, sm, bm);
            if pm.mul(&big.d(k)) != small.d(k).mul(&p) {
                out.projection_is_chain_map = false;
            }
            if big.d(k).mul(&i) != im.mul(&small.d(k)) {
                out.inclusion_is_chain_map = false;
            }
            if p.mul(&i) != SparseMatrix::identity(&big.ctx, s) {
                out.retraction = false;
            }
            let lhs = i.mul(&p).sub(&SparseMatrix::identity(&big.ctx, b));
            let rhs = big.d(k + 1).mul(&self.h(k, b, bp)).add(&self.h(k - 1, bm, b).mul(&big.d(k)));
            if lhs != rhs {
                out.homotopy = false;
            }
        }
        out
    }

    /// Composes `self: A ⇄ B` with `next: B ⇄ C` into `A ⇄ C`:
    /// `p = p₂p₁`, `i = i₁i₂`, `h = h₁ + i₁h₂p₁`.
    pub fn then<O: Clone>(
        &self,
        next: &HomotopyData<C>,
        a: &ChainComplex<O, C>,
        b: &ChainComplex<O, C>,
        c: &ChainComplex<O, C>,
    ) -> HomotopyData<C> {
        let mut degrees: Vec<i64> = a.degrees();
        degrees.extend(b.degrees());
        degrees.extend(c.degrees());
        degrees.sort_unstable();
        degrees.dedup();
        let mut out = HomotopyData { projection: BTreeMap::new(), inclusion: BTreeMap::new(), homotopy: BTreeMap::new() };
        for &k in &degrees {
            let (na, nb, nc) = (a.rank(k), b.rank(k), c.rank(k));
            let (na1, nb1) = (a.rank(k + 1), b.rank(k + 1));
            let p1 = self.p(k, nb, na);
            let i1 = self.i(k, nb, na);
            let i1_up = self.i(k + 1, nb1, na1);
            out.projection.insert(k, next.p(k, nc, nb).mul(&p1));
            out.inclusion.insert(k, i1.mul(&next.i(k, nc, nb)));
            let h = self.h(k, na, na1).add(&i1_up.mul(&next.h(k, nb, nb1)).mul(&p1));
            out.homotopy.insert(k, h);
        }
        out
    }
}

/// Rank of a rational matrix, by exact elimination.
pub fn rational_rank(m: &SparseMatrix<Rat>) -> usize {
    let rows: Vec<Vec<Rat>> = (0..m.rows)
        .map(|r| (0..m.cols).map(|c| m.get(r, c).cloned().unwrap_or_else(<Rat as Zero>::zero)).collect())
        .collect();
    toric_core::linalg::rank(&rows, m.cols)
}

/// Dimensions of the homology groups of a complex of rational vector spaces.
pub fn homology_ranks<O: Clone>(c: &ChainComplex<O, Rat>) -> BTreeMap<i64, usize> {
    c.terms
        .keys()
        .map(|&k| {
            let out = rational_rank(&c.d(k));
            let inc = rational_rank(&c.d(k + 1));
            (k, c.rank(k) - out - inc)
        })
        .collect()
}
