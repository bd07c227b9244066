//! A small exact two-phase simplex solver (Bland's rule).
//!
//! Problem sizes in this workspace are tiny (a few dozen constraints), so a
//! dense tableau over an exact field is the simplest correct choice.

use crate::linalg::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint<F> {
    pub coeffs: Vec<F>,
    pub cmp: Cmp,
    pub rhs: F,
}

/// `maximize objective·x` subject to the constraints; variables listed in
/// `nonneg` are constrained to be `>= 0`, the others are free.
#[derive(Clone, Debug)]
pub struct LinearProgram<F> {
    pub num_vars: usize,
    pub constraints: Vec<Constraint<F>>,
    pub nonneg: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<F> {
    Optimal { value: F, point: Vec<F> },
    Infeasible,
    Unbounded,
}

impl<F: Field> LinearProgram<F> {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram { num_vars, constraints: Vec::new(), nonneg: vec![false; num_vars] }
    }

    pub fn with_nonneg(num_vars: usize) -> Self {
        LinearProgram { num_vars, constraints: Vec::new(), nonneg: vec![true; num_vars] }
    }

    pub fn add(&mut self, coeffs: Vec<F>, cmp: Cmp, rhs: F) {
        assert_eq!(coeffs.len(), self.num_vars);
        self.constraints.push(Constraint { coeffs, cmp, rhs });
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self.maximize(&vec![F::zero(); self.num_vars]), LpOutcome::Infeasible)
    }

    pub fn maximize(&self, objective: &[F]) -> LpOutcome<F> {
        // Column layout: for each original variable one column (x+) and, when
        // free, a second column (x-); then one slack/surplus column per
        // inequality; then one artificial column per row.
        let mut var_cols: Vec<(usize, Option<usize>)> = Vec::with_capacity(self.num_vars);
        let mut ncols = 0;
        for j in 0..self.num_vars {
            if self.nonneg[j] {
                var_cols.push((ncols, None));
                ncols += 1;
            } else {
                var_cols.push((ncols, Some(ncols + 1)));
                ncols += 2;
            }
        }
        let m = self.constraints.len();
        let mut rows: Vec<Vec<F>> = Vec::with_capacity(m);
        let mut rhs: Vec<F> = Vec::with_capacity(m);
        let slack_start = ncols;
        let nslack = self.constraints.iter().filter(|c| c.cmp != Cmp::Eq).count();
        let art_start = slack_start + nslack;
        let total = art_start + m;
        let mut s = 0;
        for c in &self.constraints {
            let mut row = vec![F::zero(); total];
            for (j, a) in c.coeffs.iter().enumerate() {
                let (p, n) = var_cols[j];
                row[p] = a.clone();
                if let Some(n) = n {
                    row[n] = -a.clone();
                }
            }
            match c.cmp {
                Cmp::Le => {
                    row[slack_start + s] = F::one();
                    s += 1;
                }
                Cmp::Ge => {
                    row[slack_start + s] = -F::one();
                    s += 1;
                }
                Cmp::Eq => {}
            }
            let mut b = c.rhs.clone();
            if b.is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
                b = -b;
            }
            rows.push(row);
            rhs.push(b);
        }
        for (i, row) in rows.iter_mut().enumerate() {
            row[art_start + i] = F::one();
        }
        let mut basis: Vec<usize> = (0..m).map(|i| art_start + i).collect();

        // phase 1: minimize the sum of artificials == maximize -sum
        let mut cost1 = vec![F::zero(); total];
        for i in 0..m {
            cost1[art_start + i] = -F::one();
        }
        let mut tab = Tableau { rows, rhs, basis: &mut basis, allowed: total };
        if !tab.run(&cost1) {
            unreachable!("phase one is bounded");
        }
        let phase1: F = tab.objective_value(&cost1);
        if !phase1.is_zero() {
            return LpOutcome::Infeasible;
        }
        // drive artificials out of the basis where possible
        for i in 0..m {
            if tab.basis[i] >= art_start {
                if let Some(j) = (0..art_start).find(|&j| !tab.rows[i][j].is_zero()) {
                    tab.pivot(i, j);
                }
            }
        }
        tab.allowed = art_start;

        let mut cost2 = vec![F::zero(); total];
        for (j, c) in objective.iter().enumerate() {
            let (p, n) = var_cols[j];
            cost2[p] = c.clone();
            if let Some(n) = n {
                cost2[n] = -c.clone();
            }
        }
        if !tab.run(&cost2) {
            return LpOutcome::Unbounded;
        }
        let value = tab.objective_value(&cost2);
        let mut raw = vec![F::zero(); total];
        for (i, &b) in tab.basis.iter().enumerate() {
            raw[b] = tab.rhs[i].clone();
        }
        let point = var_cols
            .iter()
            .map(|&(p, n)| match n {
                Some(n) => raw[p].clone() - raw[n].clone(),
                None => raw[p].clone(),
            })
            .collect();
        LpOutcome::Optimal { value, point }
    }
}

struct Tableau<'a, F> {
    rows: Vec<Vec<F>>,
    rhs: Vec<F>,
    basis: &'a mut Vec<usize>,
    /// columns with index >= allowed may not enter the basis
    allowed: usize,
}

impl<F: Field> Tableau<'_, F> {
    fn objective_value(&self, cost: &[F]) -> F {
        self.basis.iter().zip(&self.rhs).fold(F::zero(), |acc, (&b, r)| acc + cost[b].clone() * r.clone())
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = F::one() / self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        self.rhs[r] = self.rhs[r].clone() * inv;
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for j in 0..self.rows[i].len() {
                let v = self.rows[r][j].clone();
                if !v.is_zero() {
                    self.rows[i][j] = self.rows[i][j].clone() - f.clone() * v;
                }
            }
            self.rhs[i] = self.rhs[i].clone() - f * self.rhs[r].clone();
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost` from the current basic feasible solution.
    /// Returns false if unbounded.
    fn run(&mut self, cost: &[F]) -> bool {
        loop {
            // reduced cost of column j: cost_j - sum_i cost_{b_i} a_ij
            let mut entering = None;
            for j in 0..self.allowed {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut rc = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !self.rows[i][j].is_zero() && !cost[b].is_zero() {
                        rc = rc - cost[b].clone() * self.rows[i][j].clone();
                    }
                }
                if rc.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else { return true };
            let mut leave: Option<(usize, F)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if a.is_positive() {
                    let ratio = self.rhs[i].clone() / a.clone();
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else { return false };
            self.pivot(r, c);
        }
    }
}
