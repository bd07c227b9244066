//! Randomized fiber checks: the complex specialized at a rational point.

use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric_core::lattice::{self, IntMatrix};
use toric_core::{smooth_stacky_chart_cover, Int, Rat};
use toric_morse::homology_ranks;

use crate::complex::AugmentedComplex;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct FiberViolation {
    pub trial: usize,
    pub chart: Vec<usize>,
    pub point: Vec<Rat>,
    pub on_y: bool,
    pub homology: BTreeMap<i64, usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiberReport {
    pub trials: usize,
    pub on_y_trials: usize,
    pub codim: usize,
    pub violations: Vec<FiberViolation>,
}

impl FiberReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Uniform rational with numerator and denominator in `[1, 997]` and a
/// random sign.
pub fn random_rational(rng: &mut impl Rng) -> Rat {
    let n = Int::from(rng.gen_range(1..=997i64));
    let d = Int::from(rng.gen_range(1..=997i64));
    let r = Rat::new(n, d);
    if rng.gen_bool(0.5) {
        -r
    } else {
        r
    }
}

/// `x^e` for an integer exponent of either sign (`x ≠ 0`).
fn int_power(x: &Rat, e: &Int) -> Rat {
    let power = num_traits::pow(x.clone(), e.abs().to_usize().expect("exponent fits in usize"));
    if e.is_negative() {
        power.recip()
    } else {
        power
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Off `Y` the specialized complex must be exact. At a point of `Y` its
/// homology is `Tor_i(O_Y, k(y))`, of dimension `C(c, i)` for a smooth
/// substack of codimension `c`; in particular `H_0` is one-dimensional.
/// The first tenth of the trials are forced onto `Y` by parametrizing its
/// torus; the remaining points are uniform and classified exactly.
pub fn fiber_exactness_check(c: &AugmentedComplex, trials: usize, seed: u64) -> Result<FiberReport> {
    let fan = &c.complex.fan;
    let charts = smooth_stacky_chart_cover(fan)?;
    let torus = toric_strat::exit_torus(&c.target)?;
    let codim = torus.codim;
    let n = fan.num_rays();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let forced = trials / 10;
    let mut violations = Vec::new();
    let mut on_y_trials = 0;
    for trial in 0..trials {
        let chart = &charts[trial % charts.len()].cone;
        let mut point = vec![Rat::from_integer(Int::from(1)); n];
        if trial < forced {
            // x = Π_j t_j^{v_j} over a basis v_j of {v : Σ_ρ v_ρ a_ρ = 0}
            let a_t: Vec<Vec<Int>> =
                (0..codim).map(|i| chart.iter().map(|&r| torus.ray_functionals[r][i].clone()).collect()).collect();
            let kernel = lattice::kernel_saturated_basis(&IntMatrix::from_rows(a_t, chart.len()));
            for v in &kernel {
                let t = random_rational(&mut rng);
                for (pos, &r) in chart.iter().enumerate() {
                    let e = &v[pos];
                    point[r] *= int_power(&t, e);
                }
            }
        } else {
            for &r in chart {
                point[r] = random_rational(&mut rng);
            }
        }
        let on_y = (0..codim).all(|i| {
            let mut prod = Rat::from_integer(Int::from(1));
            for (r, x) in point.iter().enumerate() {
                let e = &torus.ray_functionals[r][i];
                prod *= int_power(x, e);
            }
            prod == Rat::from_integer(Int::from(1))
        });
        if on_y {
            on_y_trials += 1;
        }
        let homology = homology_ranks(&c.complex.specialize(&point));
        let ok = homology.iter().all(|(&k, &h)| {
            if on_y {
                k >= 0 && h == binomial(codim, k as usize)
            } else {
                h == 0
            }
        });
        let ok = ok && (!on_y || homology.get(&0) == Some(&1));
        if !ok {
            violations.push(FiberViolation { trial, chart: chart.clone(), point, on_y, homology });
        }
    }
    Ok(FiberReport { trials, on_y_trials, codim, violations })
}
