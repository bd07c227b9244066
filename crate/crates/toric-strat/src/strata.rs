//! Exact enumeration of the cells of the periodic arrangement `{a_ρ·w ∈ Z}`
//! on `R^c / Z^c`.
//!
//! Pick `c` independent functionals `A` with the smallest `|det A|`. The
//! half-open parallelotopes `{r ≤ A w < r + 1}` for `r` running over coset
//! representatives of `Z^c / A Z^c` form a fundamental domain, and every cell
//! of the arrangement lies in exactly one such translate. Inside each
//! parallelotope we branch ray by ray on "at an integer level" or "strictly
//! between two levels", carrying an exact V-representation of the closure of
//! the cell built so far. Every branch is nonempty by construction.

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use toric_core::lattice::{self, IntMatrix};
use toric_core::{linalg, DivisorClass, Int, PicGroup, Rat, SupportFunction};

use crate::error::{Result, StratError};
use crate::polytope::{TightSet, VPolytope};
use crate::torus::ExitTorus;

/// One torus cell, described at its canonical lift (sample in `[0,1)^c`).
#[derive(Clone, Debug)]
pub struct Stratum {
    pub id: usize,
    pub dim: usize,
    pub sample: Vec<Rat>,
    /// Per ray: `2k` when `a_ρ·w = k` on the cell, `2k+1` when
    /// `k < a_ρ·w < k+1`; inactive rays carry `0`.
    pub codes: Vec<Int>,
    /// Rays whose hyperplane contains the cell.
    pub active: Vec<usize>,
    pub bundle: DivisorClass,
    pub support: SupportFunction,
    /// Closure of the canonical lift.
    pub closure: VPolytope,
}

impl Stratum {
    /// Equalities `a_ρ·w = k` satisfied on the canonical lift.
    pub fn lift_constraints(&self) -> Vec<(usize, Int)> {
        self.active.iter().map(|&r| (r, self.codes[r].div_floor(&Int::from(2)))).collect()
    }

    /// Strict bands `k < a_ρ·w < k+1` of the canonical lift, for rays with a
    /// nonzero functional that do not contain the cell.
    pub fn bands(&self) -> Vec<(usize, Int)> {
        (0..self.codes.len())
            .filter(|&r| self.codes[r].is_odd())
            .map(|r| (r, self.codes[r].div_floor(&Int::from(2))))
            .collect()
    }
}

pub fn code_of(v: &Rat) -> Int {
    if v.is_integer() {
        v.to_integer() * Int::from(2)
    } else {
        v.floor().to_integer() * Int::from(2) + Int::one()
    }
}

/// `⌈code/2⌉`: the value of `bF` on the ray.
pub fn ceil_half(code: &Int) -> Int {
    (code + Int::one()).div_floor(&Int::from(2))
}

fn to_rat_rows(m: &[Vec<Int>]) -> Vec<Vec<Rat>> {
    m.iter().map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect()).collect()
}

/// Chooses `c` independent active functionals with minimal `|det|`.
fn choose_frame(t: &ExitTorus, active: &[usize]) -> Option<Vec<usize>> {
    let c = t.codim;
    let mut best: Option<(Int, Vec<usize>)> = None;
    let mut idx: Vec<usize> = (0..c).collect();
    if active.len() < c {
        return None;
    }
    loop {
        let rows: Vec<Vec<Int>> = idx.iter().map(|&i| t.ray_functionals[active[i]].clone()).collect();
        let d = lattice::determinant(&IntMatrix::from_rows(rows, c)).abs();
        if !d.is_zero() && best.as_ref().map_or(true, |(b, _)| d < *b) {
            best = Some((d, idx.iter().map(|&i| active[i]).collect()));
        }
        // next combination
        let mut k = c;
        loop {
            if k == 0 {
                return best.map(|(_, v)| v);
            }
            k -= 1;
            if idx[k] < active.len() - c + k {
                idx[k] += 1;
                for j in k + 1..c {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

struct Enumerator {
    functionals: Vec<Vec<Rat>>,
    order: Vec<usize>,
    found: Vec<(Vec<Int>, VPolytope)>,
}

impl Enumerator {
    fn dfs(&mut self, step: usize, poly: VPolytope, codes: &mut Vec<Int>) {
        if step == self.order.len() {
            self.found.push((codes.clone(), poly));
            return;
        }
        let r = self.order[step];
        let a = self.functionals[r].clone();
        let (lo, hi) = poly.range(&a);
        if lo == hi {
            codes[r] = code_of(&lo);
            self.dfs(step + 1, poly, codes);
            return;
        }
        let first = lo.floor().to_integer();
        let last = hi.ceil().to_integer();
        let mut j = first;
        while j < last {
            let jq = Rat::from_integer(j.clone());
            let j1 = Rat::from_integer(&j + Int::one());
            // open band (j, j+1)
            let blo = if jq > lo { jq.clone() } else { lo.clone() };
            let bhi = if j1 < hi { j1.clone() } else { hi.clone() };
            let sub = poly.slice(&a, &blo, &bhi);
            codes[r] = &j * Int::from(2) + Int::one();
            self.dfs(step + 1, sub, codes);
            // the plane at j+1, if strictly inside
            if j1 < hi {
                let sub = poly.slice(&a, &j1, &j1);
                codes[r] = (&j + Int::one()) * Int::from(2);
                self.dfs(step + 1, sub, codes);
            }
            j += Int::one();
        }
    }
}

/// All cells of `S^φ`, ordered by dimension (descending) and then by
/// canonical sample.
pub fn enumerate_strata(t: &ExitTorus, codim_bound: usize) -> Result<Vec<Stratum>> {
    let c = t.codim;
    if c > codim_bound {
        return Err(StratError::CodimLimit { codim: c, bound: codim_bound });
    }
    let n = t.num_rays();
    let pic = PicGroup::of(&t.fan);
    if c == 0 {
        let support = SupportFunction::zero(n);
        return Ok(vec![Stratum {
            id: 0,
            dim: 0,
            sample: vec![],
            codes: vec![Int::zero(); n],
            active: vec![],
            bundle: pic.class_of_support(&support),
            support,
            closure: VPolytope::new(vec![vec![]], vec![TightSet::default()], 0, 0),
        }]);
    }
    let active = t.active_rays();
    let functionals = to_rat_rows(&t.ray_functionals);
    let rank = linalg::rank(&active.iter().map(|&r| functionals[r].clone()).collect::<Vec<_>>(), c);
    if rank < c {
        return Err(StratError::FunctionalsDoNotSpan { rank, codim: c });
    }
    let frame = choose_frame(t, &active).expect("spanning functionals contain a frame");
    let a_int = IntMatrix::from_rows(frame.iter().map(|&r| t.ray_functionals[r].clone()).collect(), c);
    let a_rat: Vec<Vec<Rat>> = frame.iter().map(|&r| functionals[r].clone()).collect();
    let reps = lattice::cokernel_representatives(&a_int).expect("frame has full rank");
    let order: Vec<usize> = active.iter().copied().filter(|r| !frame.contains(r)).collect();
    let mut en = Enumerator { functionals: functionals.clone(), order, found: Vec::new() };

    for rep in &reps {
        // parallelotope vertices A^{-1}(r + ε)
        let mut verts = Vec::with_capacity(1 << c);
        let mut tights = Vec::with_capacity(1 << c);
        for eps in 0u32..(1 << c) {
            let rhs: Vec<Rat> =
                (0..c).map(|i| Rat::from_integer(rep[i].clone() + Int::from((eps >> i & 1) as i64))).collect();
            verts.push(linalg::solve(&a_rat, c, &rhs).expect("invertible frame"));
            let mut ts = TightSet::default();
            for i in 0..c {
                ts.insert(2 * i + (eps >> i & 1) as usize);
            }
            tights.push(ts);
        }
        let cube = VPolytope::new(verts, tights, c, 2 * c);
        for s in 0u32..(1 << c) {
            let idx: Vec<usize> = (0..(1u32 << c)).filter(|e| e & s == 0).map(|e| e as usize).collect();
            let face = cube.face(&idx, c - s.count_ones() as usize);
            let mut codes = vec![Int::zero(); n];
            for (i, &r) in frame.iter().enumerate() {
                codes[r] = &rep[i] * Int::from(2) + if s >> i & 1 == 1 { Int::zero() } else { Int::one() };
            }
            en.dfs(0, face, &mut codes);
        }
    }

    let mut strata: Vec<Stratum> = Vec::with_capacity(en.found.len());
    let mut seen: HashMap<Vec<Int>, usize> = HashMap::new();
    for (codes, poly) in en.found {
        let sample = poly.lex_midpoint();
        let z: Vec<Int> = sample.iter().map(|x| -x.floor().to_integer()).collect();
        let zq: Vec<Rat> = z.iter().map(|x| Rat::from_integer(x.clone())).collect();
        let sample: Vec<Rat> = sample.iter().zip(&zq).map(|(a, b)| a + b).collect();
        let codes: Vec<Int> = (0..n)
            .map(|r| {
                if t.inactive_rays.contains(&r) {
                    Int::zero()
                } else {
                    &codes[r] + lattice::dot(&t.ray_functionals[r], &z) * Int::from(2)
                }
            })
            .collect();
        let closure = poly.translate(&zq);
        let active_here: Vec<usize> =
            active.iter().copied().filter(|&r| codes[r].is_even()).collect();
        let support = SupportFunction::new(
            (0..n).map(|r| if t.inactive_rays.contains(&r) { Int::zero() } else { ceil_half(&codes[r]) }).collect(),
        );
        let bundle = pic.class_of_support(&support);
        let dim = poly.dim;
        let prev = seen.insert(codes.clone(), strata.len());
        assert!(prev.is_none(), "cell enumerated twice");
        strata.push(Stratum { id: 0, dim, sample, codes, active: active_here, bundle, support, closure });
    }
    strata.sort_by(|a, b| b.dim.cmp(&a.dim).then_with(|| a.sample.cmp(&b.sample)));
    for (i, s) in strata.iter_mut().enumerate() {
        s.id = i;
    }
    Ok(strata)
}

/// Ensures rational sample coordinates compare exactly (used in tests).
pub fn is_in_unit_box(sample: &[Rat]) -> bool {
    sample.iter().all(|x| !x.is_negative() && *x < Rat::one())
}
