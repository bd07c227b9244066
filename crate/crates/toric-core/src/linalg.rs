//! Exact linear algebra over a field (in practice `BigRational`).

use std::fmt::Debug;

use num_traits::{Num, Signed};

/// Exact field scalars. Implemented for `Ratio<i64>`, `Ratio<i128>` and
/// `BigRational`; floating point types are deliberately not supported.
pub trait Field: Clone + Debug + PartialOrd + Num + Signed {}

impl<F> Field for F where F: Clone + Debug + PartialOrd + Num + Signed {}

/// Reduced row echelon form. Returns the matrix and its pivot columns.
pub fn rref<F: Field>(m: &[Vec<F>], cols: usize) -> (Vec<Vec<F>>, Vec<usize>) {
    let mut a: Vec<Vec<F>> = m.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = F::one() / a[r][c].clone();
        for x in a[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let v = a[r][j].clone();
                    if !v.is_zero() {
                        a[i][j] = a[i][j].clone() - f.clone() * v;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank<F: Field>(m: &[Vec<F>], cols: usize) -> usize {
    rref(m, cols).1.len()
}

/// Basis of the null space `{x : m x = 0}`, one vector per free column, in a
/// canonical form determined by the row space of `m` alone.
pub fn nullspace<F: Field>(m: &[Vec<F>], cols: usize) -> Vec<Vec<F>> {
    let (r, pivots) = rref(m, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero(); cols];
            v[f] = F::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Some solution of `m x = b`, or `None` if inconsistent.
pub fn solve<F: Field>(m: &[Vec<F>], cols: usize, b: &[F]) -> Option<Vec<F>> {
    assert_eq!(m.len(), b.len());
    let aug: Vec<Vec<F>> =
        m.iter().zip(b).map(|(row, x)| row.iter().cloned().chain(std::iter::once(x.clone())).collect()).collect();
    let (r, pivots) = rref(&aug, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![F::zero(); cols];
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[cols].clone();
    }
    Some(x)
}

pub fn determinant<F: Field>(m: &[Vec<F>]) -> F {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = F::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return F::zero() };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det = det * a[c][c].clone();
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = a[i][c].clone() / a[c][c].clone();
                for j in c..n {
                    let v = a[c][j].clone();
                    a[i][j] = a[i][j].clone() - f.clone() * v;
                }
            }
        }
    }
    det
}

pub fn mat_mul<F: Field>(a: &[Vec<F>], b: &[Vec<F>], inner: usize, cols: usize) -> Vec<Vec<F>> {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = F::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc = acc + row[k].clone() * b[k][j].clone();
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    fn q(n: i64) -> Ratio<i64> {
        Ratio::from_integer(n)
    }

    #[test]
    fn nullspace_of_line() {
        let m = vec![vec![q(1), q(1)]];
        assert_eq!(nullspace(&m, 2), vec![vec![q(-1), q(1)]]);
        assert_eq!(rank(&m, 2), 1);
    }

    #[test]
    fn solve_and_det() {
        let m = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        assert_eq!(determinant(&m), q(5));
        let x = solve(&m, 2, &[q(3), q(4)]).unwrap();
        assert_eq!(x, vec![q(1), q(1)]);
        let sing = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert!(solve(&sing, 2, &[q(1), q(0)]).is_none());
    }
}
