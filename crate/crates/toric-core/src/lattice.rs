//! Dense integer matrices and the normal forms used throughout the crate.
//!
//! Everything here is generic over [`LatticeScalar`], so the same code runs on
//! `i64`, `i128` and `BigInt`. The fan-level types only ever use the `BigInt`
//! instantiation (see [`crate::LatticeMap`]); the machine-integer versions are
//! handy for tests and small throwaway computations.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Exact integer scalars supported by the lattice algebra.
pub trait LatticeScalar:
    Clone + Debug + Display + Integer + Signed + FromPrimitive + ToPrimitive + Hash + Send + Sync
{
}

impl<T> LatticeScalar for T where
    T: Clone + Debug + Display + Integer + Signed + FromPrimitive + ToPrimitive + Hash + Send + Sync
{
}

/// A dense row-major integer matrix, viewed as a map `Z^cols -> Z^rows`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: LatticeScalar> IntMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Builds a matrix from rows. All rows must have length `cols`.
    pub fn from_rows(rows: Vec<Vec<T>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row);
        }
        IntMatrix { rows: r, cols, data }
    }

    /// Builds a matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_cols(cols: &[Vec<T>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged matrix columns");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| T::from_i64(x).expect("scalar from i64")).collect())
            .collect();
        Self::from_rows(rows, cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc = acc + self[(i, j)].clone() * x.clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Submatrix made of the given columns, in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                out[(i, k)] = self[(i, j)].clone();
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &T) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = self[(src, j)].clone();
            if !s.is_zero() {
                self[(dst, j)] = self[(dst, j)].clone() + k.clone() * s;
            }
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &T) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = self[(i, src)].clone();
            if !s.is_zero() {
                self[(i, dst)] = self[(i, dst)].clone() + k.clone() * s;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)].clone();
        }
    }

    /// Converts to another scalar type (e.g. `i64` test data into `BigInt`).
    pub fn convert<S: LatticeScalar>(&self) -> IntMatrix<S> {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|x| S::from_i128(x.to_i128().expect("entry fits i128")).expect("convertible"))
                .collect(),
        }
    }
}

impl<T> std::ops::Index<(usize, usize)> for IntMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for IntMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Display> Debug for IntMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Result of [`smith_normal_form`]: `u * a * v == d`.
#[derive(Clone)]
pub struct Smith<T> {
    pub u: IntMatrix<T>,
    pub d: IntMatrix<T>,
    pub v: IntMatrix<T>,
}

impl<T: LatticeScalar> Smith<T> {
    /// Nonzero diagonal entries `d_1 | d_2 | ...`.
    pub fn invariant_factors(&self) -> Vec<T> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).filter(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form with unimodular transforms.
pub fn smith_normal_form<T: LatticeScalar>(a: &IntMatrix<T>) -> Smith<T> {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    let mut t = 0;
    while t < m.min(n) {
        // pivot: smallest nonzero absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !d[(i, j)].is_zero()
                    && best.map_or(true, |(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row(i, t, &-q.clone());
                u.add_row(i, t, &-q);
                if !d[(i, t)].is_zero() {
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col(j, t, &-q.clone());
                v.add_col(j, t, &-q);
                if !d[(t, j)].is_zero() {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility: fold a violating row into the pivot row
            let mut violation = None;
            'scan: for i in t + 1..m {
                for j in t + 1..n {
                    if !d[(i, j)].is_multiple_of(&d[(t, t)]) {
                        violation = Some(i);
                        break 'scan;
                    }
                }
            }
            match violation {
                Some(i) => {
                    d.add_row(t, i, &T::one());
                    u.add_row(t, i, &T::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    Smith { u, d, v }
}

/// Row-style Hermite normal form: returns `(h, u)` with `u * a == h`, `u`
/// unimodular, `h` in row echelon form with positive pivots, pivot columns as
/// early as possible, and entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form<T: LatticeScalar>(a: &IntMatrix<T>) -> (IntMatrix<T>, IntMatrix<T>) {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        // Euclid on column c among rows r..m
        loop {
            let mut best: Option<usize> = None;
            for i in r..m {
                if !h[(i, c)].is_zero() && best.map_or(true, |b| h[(i, c)].abs() < h[(b, c)].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            h.swap_rows(r, b);
            u.swap_rows(r, b);
            let mut done = true;
            for i in r + 1..m {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = h[(i, c)].div_floor(&h[(r, c)]);
                h.add_row(i, r, &-q.clone());
                u.add_row(i, r, &-q);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = h[(i, c)].div_floor(&h[(r, c)]);
            h.add_row(i, r, &-q.clone());
            u.add_row(i, r, &-q);
        }
        r += 1;
    }
    (h, u)
}

/// The nonzero rows of the Hermite normal form together with their pivot columns.
#[derive(Clone, Debug)]
pub struct EchelonBasis<T> {
    pub rows: Vec<Vec<T>>,
    pub pivots: Vec<usize>,
    pub width: usize,
}

impl<T: LatticeScalar> EchelonBasis<T> {
    /// Echelon basis of the lattice spanned by `gens` (each of length `width`).
    pub fn of_span(gens: &[Vec<T>], width: usize) -> Self {
        if gens.is_empty() {
            return EchelonBasis { rows: vec![], pivots: vec![], width };
        }
        let (h, _) = hermite_normal_form(&IntMatrix::from_rows(gens.to_vec(), width));
        let mut rows = Vec::new();
        let mut pivots = Vec::new();
        for i in 0..h.rows() {
            let row = h.row(i);
            if let Some(p) = row.iter().position(|x| !x.is_zero()) {
                rows.push(row);
                pivots.push(p);
            }
        }
        EchelonBasis { rows, pivots, width }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Canonical representative of `v` modulo the spanned lattice, together
    /// with the coefficients `c` such that `v - reduced = sum c_i rows_i`.
    pub fn reduce(&self, v: &[T]) -> (Vec<T>, Vec<T>) {
        let mut out = v.to_vec();
        let mut coeffs = vec![T::zero(); self.rows.len()];
        for (i, (row, &p)) in self.rows.iter().zip(&self.pivots).enumerate() {
            let q = out[p].div_floor(&row[p]);
            if !q.is_zero() {
                for (o, r) in out.iter_mut().zip(row) {
                    *o = o.clone() - q.clone() * r.clone();
                }
            }
            coeffs[i] = q;
        }
        (out, coeffs)
    }

    pub fn contains(&self, v: &[T]) -> bool {
        self.reduce(v).0.iter().all(|x| x.is_zero())
    }
}

/// Basis of the saturated lattice `ker(a) ∩ Z^cols`, in Hermite normal form.
pub fn kernel_saturated_basis<T: LatticeScalar>(a: &IntMatrix<T>) -> Vec<Vec<T>> {
    let n = a.cols();
    if a.rows() == 0 {
        return (0..n)
            .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
            .collect();
    }
    let (h, u) = hermite_normal_form(&a.transpose());
    let gens: Vec<Vec<T>> =
        (0..h.rows()).filter(|&i| h.row(i).iter().all(|x| x.is_zero())).map(|i| u.row(i)).collect();
    EchelonBasis::of_span(&gens, n).rows
}

/// Structure of `coker(a) = Z^rows / a(Z^cols)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cokernel<T> {
    pub free_rank: usize,
    /// Nontrivial torsion coefficients, each dividing the next.
    pub torsion: Vec<T>,
}

pub fn cokernel_structure<T: LatticeScalar>(a: &IntMatrix<T>) -> Cokernel<T> {
    let snf = smith_normal_form(a);
    let factors = snf.invariant_factors();
    Cokernel {
        free_rank: a.rows() - factors.len(),
        torsion: factors.into_iter().filter(|d| !d.is_one()).collect(),
    }
}

/// One lift per class of a finite cokernel, in a deterministic order.
/// Returns `None` when the cokernel has positive free rank.
pub fn cokernel_representatives<T: LatticeScalar>(a: &IntMatrix<T>) -> Option<Vec<Vec<T>>> {
    let m = a.rows();
    let snf = smith_normal_form(a);
    let factors = snf.invariant_factors();
    if factors.len() < m {
        return None;
    }
    // a = u^{-1} d v^{-1}, so y = u x identifies coker(a) with coker(d).
    let uinv = unimodular_inverse(&snf.u);
    let mut reps = vec![vec![T::zero(); m]];
    for (i, di) in factors.iter().enumerate() {
        let mut next = Vec::new();
        for y in &reps {
            let mut k = T::zero();
            while &k < di {
                let mut z = y.clone();
                z[i] = k.clone();
                next.push(z);
                k = k + T::one();
            }
        }
        reps = next;
    }
    let basis = EchelonBasis::of_span(&a.transpose().row_vecs(), m);
    let mut out: Vec<Vec<T>> = reps.iter().map(|y| basis.reduce(&uinv.apply(y)).0).collect();
    out.sort();
    Some(out)
}

/// Inverse of a unimodular matrix (exact, via the Hermite form of `[u | I]`).
pub fn unimodular_inverse<T: LatticeScalar>(u: &IntMatrix<T>) -> IntMatrix<T> {
    let n = u.rows();
    assert_eq!(n, u.cols());
    let (h, w) = hermite_normal_form(u);
    // w * u = h must be the identity for unimodular u
    assert!(h == IntMatrix::identity(n), "matrix is not unimodular");
    w
}

/// Integer solution of `a x = b`, if one exists.
pub fn solve_integer<T: LatticeScalar>(a: &IntMatrix<T>, b: &[T]) -> Option<Vec<T>> {
    assert_eq!(a.rows(), b.len());
    let snf = smith_normal_form(a);
    // u a v = d; a x = b  <=>  d y = u b with x = v y
    let ub = snf.u.apply(b);
    let mut y = vec![T::zero(); a.cols()];
    for (i, c) in ub.iter().enumerate() {
        let di = if i < a.cols() { snf.d[(i, i)].clone() } else { T::zero() };
        if di.is_zero() {
            if !c.is_zero() {
                return None;
            }
        } else {
            let (q, r) = c.div_rem(&di);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(snf.v.apply(&y))
}

/// Integer determinant of a square matrix (Bareiss fraction-free elimination).
pub fn determinant<T: LatticeScalar>(a: &IntMatrix<T>) -> T {
    let n = a.rows();
    assert_eq!(n, a.cols());
    if n == 0 {
        return T::one();
    }
    let mut m = a.clone();
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n {
        if m[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                return T::zero();
            };
            m.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let val = m[(i, j)].clone() * m[(k, k)].clone() - m[(i, k)].clone() * m[(k, j)].clone();
                m[(i, j)] = val / prev.clone();
            }
            m[(i, k)] = T::zero();
        }
        prev = m[(k, k)].clone();
    }
    sign * m[(n - 1, n - 1)].clone()
}

pub fn rank<T: LatticeScalar>(a: &IntMatrix<T>) -> usize {
    EchelonBasis::of_span(&a.row_vecs(), a.cols()).rank()
}

/// gcd of the entries; zero for the zero vector.
pub fn content<T: LatticeScalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |g, x| g.gcd(x))
}

pub fn is_primitive<T: LatticeScalar>(v: &[T]) -> bool {
    content(v).is_one()
}

pub fn dot<T: LatticeScalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Saturation of the lattice spanned by `gens` inside `Z^width`: the lattice of
/// integer vectors in their rational span, returned in Hermite form.
pub fn saturate<T: LatticeScalar>(gens: &[Vec<T>], width: usize) -> Vec<Vec<T>> {
    if gens.is_empty() {
        return vec![];
    }
    // saturation = kernel of the kernel
    let a = IntMatrix::from_rows(gens.to_vec(), width);
    let perp = kernel_saturated_basis(&a);
    if perp.is_empty() {
        return kernel_saturated_basis(&IntMatrix::<T>::zeros(0, width));
    }
    kernel_saturated_basis(&IntMatrix::from_rows(perp, width))
}
