//! Sparse polynomials in Cox coordinates with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::{Int, Rat};

/// A single Cox monomial `c · x^k` with `k ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialSection {
    pub exponent: Vec<u32>,
    pub coefficient: Rat,
}

impl MonomialSection {
    /// Builds a section from an integer exponent vector; `None` if any entry
    /// is negative.
    pub fn new(exponent: &[Int], coefficient: Rat) -> Option<Self> {
        let exponent = exponent
            .iter()
            .map(|e| if e.is_negative() { None } else { u32::try_from(e).ok() })
            .collect::<Option<Vec<u32>>>()?;
        Some(MonomialSection { exponent, coefficient })
    }

    pub fn degree_vector(&self) -> Vec<Int> {
        self.exponent.iter().map(|&e| Int::from(e)).collect()
    }
}

/// A polynomial as a map from exponent vectors to nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn monomial(exponent: Vec<u32>, c: Rat) -> Self {
        let nvars = exponent.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponent, c);
        }
        Poly { nvars, terms }
    }

    pub fn from_section(s: &MonomialSection) -> Self {
        Self::monomial(s.exponent.clone(), s.coefficient.clone())
    }

    /// The variable `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Rat::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn sections(&self) -> Vec<MonomialSection> {
        self.terms
            .iter()
            .map(|(e, c)| MonomialSection { exponent: e.clone(), coefficient: c.clone() })
            .collect()
    }

    pub fn add_term(&mut self, exponent: Vec<u32>, c: Rat) {
        debug_assert_eq!(exponent.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exponent) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let v = o.get().clone() + c;
                if v.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    /// `Some(c)` when the polynomial is a nonzero constant.
    pub fn as_unit(&self) -> Option<Rat> {
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            if e.iter().all(|&x| x == 0) {
                return Some(c.clone());
            }
        }
        None
    }

    /// `Some((exponent, coefficient))` when the polynomial is a single term.
    pub fn as_monomial(&self) -> Option<(&Vec<u32>, &Rat)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn evaluate(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars);
        let mut total = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            total += t;
        }
        total
    }

    /// Substitutes constants for some variables (`None` keeps the variable).
    pub fn specialize(&self, values: &[Option<Rat>]) -> Self {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            let mut ne = e.clone();
            for (i, v) in values.iter().enumerate() {
                if let Some(v) = v {
                    if ne[i] > 0 {
                        t *= num_traits::pow(v.clone(), ne[i] as usize);
                    }
                    ne[i] = 0;
                }
            }
            out.add_term(ne, t);
        }
        out
    }

    /// Re-expresses the polynomial in a new variable set: variable `i` becomes
    /// variable `map[i]` among `nvars` variables.
    pub fn relabel(&self, nvars: usize, map: &[usize]) -> Self {
        let mut out = Poly::zero(nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                ne[map[i]] += k;
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Formats with the given variable names.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| if k == 1 { names[j].clone() } else { format!("{}^{}", names[j], k) })
                .collect();
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                s.push_str(&a.to_string());
            } else {
                if !a.is_one() {
                    s.push_str(&a.to_string());
                    s.push('*');
                }
                s.push_str(&mono.join("*"));
            }
        }
        s
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        f.write_str(&self.display_with(&names))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars.max(rhs.nvars));
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn arithmetic_cancels() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = &(&x - &y) * &(&x + &y);
        let q = &(&x * &x) - &(&y * &y);
        assert_eq!(p, q);
        assert!((&p - &q).is_zero());
        assert_eq!(p.evaluate(&[rat(3, 1), rat(1, 2)]), rat(35, 4));
    }

    #[test]
    fn unit_detection_and_display() {
        assert_eq!(Poly::constant(3, rat(-1, 1)).as_unit(), Some(rat(-1, 1)));
        assert_eq!(Poly::var(3, 1).as_unit(), None);
        let p = &Poly::var(2, 0) - &Poly::one(2);
        assert_eq!(p.to_string(), "x0 - 1");
    }
}
