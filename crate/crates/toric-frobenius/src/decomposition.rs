//! `(F_ℓ)_* O(D) = ⊕_{[m] ∈ M/ℓM} O(Σ_ρ ⌊(a_ρ − ⟨m, u_ρ⟩)/ℓ⌋ D_ρ)`.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::ToPrimitive;
use toric_core::lattice::{self, IntMatrix};
use toric_core::{smooth_stacky_chart_cover, DivisorClass, Int, StackyFan};

use crate::error::{FrobeniusError, Result};
use crate::pic::PicCoordinates;

/// Number of rounds of multiples of the arrangement period used by
/// [`frob_set`].
pub const FROB_SET_ROUNDS: u64 = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobDecomposition {
    pub ell: u64,
    pub source: DivisorClass,
    /// Summand classes with their multiplicities `μ(E, D)`.
    pub summands: BTreeMap<DivisorClass, u64>,
}

impl FrobDecomposition {
    /// `Σ μ`, which equals `ℓ^{dim N}`.
    pub fn total_rank(&self) -> u64 {
        self.summands.values().sum()
    }

    pub fn contains(&self, class: &DivisorClass) -> bool {
        self.summands.contains_key(class)
    }

    pub fn multiplicity(&self, class: &DivisorClass) -> u64 {
        self.summands.get(class).copied().unwrap_or(0)
    }
}

pub(crate) fn check_smooth_variety(fan: &StackyFan) -> Result<()> {
    if !fan.is_variety() {
        return Err(FrobeniusError::NotVariety);
    }
    smooth_stacky_chart_cover(fan)?;
    Ok(())
}

fn small(v: &[Int]) -> Result<Vec<i64>> {
    v.iter().map(|x| x.to_i64().ok_or(FrobeniusError::Overflow)).collect()
}

/// Floor vectors of every `m ∈ {0, …, ℓ−1}^n`, aggregated by Pic coordinates.
fn floor_classes(rays: &[Vec<i64>], a: &[i64], ell: i64, dim: usize, coords: &PicCoordinates) -> BTreeMap<Vec<i64>, u64> {
    let mut out: BTreeMap<Vec<i64>, u64> = BTreeMap::new();
    let mut m = vec![0i64; dim];
    let mut floors = vec![0i64; rays.len()];
    loop {
        for (f, (u, &ar)) in floors.iter_mut().zip(rays.iter().zip(a)) {
            let pairing: i64 = u.iter().zip(&m).map(|(x, y)| x * y).sum();
            *f = Integer::div_floor(&(ar - pairing), &ell);
        }
        *out.entry(coords.coords_i64(&floors)).or_insert(0) += 1;
        // odometer
        let mut i = 0;
        loop {
            if i == dim {
                return out;
            }
            m[i] += 1;
            if m[i] < ell {
                break;
            }
            m[i] = 0;
            i += 1;
        }
    }
}

/// The summands of the Frobenius pushforward of `O(D)`, `D = Σ d_ρ D_ρ`.
pub fn frob_pushforward(fan: &StackyFan, d: &[Int], ell: u64) -> Result<FrobDecomposition> {
    check_smooth_variety(fan)?;
    if ell == 0 {
        return Err(FrobeniusError::InvalidEll);
    }
    let coords = PicCoordinates::standard(fan)?;
    let rays: Vec<Vec<i64>> = fan.rays().iter().map(|r| small(r)).collect::<Result<_>>()?;
    let a = small(d)?;
    let ell_i = i64::try_from(ell).map_err(|_| FrobeniusError::Overflow)?;
    let agg = floor_classes(&rays, &a, ell_i, fan.rank_n(), &coords);
    let summands = agg
        .into_iter()
        .map(|(c, mu)| (coords.class_of(&c.into_iter().map(Int::from).collect::<Vec<_>>()), mu))
        .collect();
    Ok(FrobDecomposition { ell, source: coords.pic().canonical(d), summands })
}

/// `lcm` of `|det|` over the nonsingular maximal minors of the ray matrix:
/// every vertex of the arrangement `⟨m, u_ρ⟩ ∈ Z` has denominator dividing it.
pub fn arrangement_period(fan: &StackyFan) -> u64 {
    let n = fan.rank_n();
    let rays = fan.rays();
    let mut l = 1u64;
    let mut subset: Vec<usize> = (0..n).collect();
    if n == 0 || rays.len() < n {
        return 1;
    }
    loop {
        let m = IntMatrix::from_rows(subset.iter().map(|&r| rays[r].clone()).collect(), n);
        let det = lattice::determinant(&m);
        if let Some(d) = det.abs_u64() {
            if d != 0 {
                l = l.lcm(&d);
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return l;
            }
            i -= 1;
            if subset[i] < rays.len() - n + i {
                break;
            }
        }
        subset[i] += 1;
        for j in i + 1..n {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

trait AbsU64 {
    fn abs_u64(&self) -> Option<u64>;
}

impl AbsU64 for Int {
    fn abs_u64(&self) -> Option<u64> {
        num_traits::Signed::abs(self).to_u64()
    }
}

/// `Frob(D)` up to a finite horizon, with the data needed to judge
/// saturation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobSet {
    pub classes: BTreeSet<DivisorClass>,
    /// `L · lcm(1, …, n+1)` with `L` the arrangement period: for `D = 0`,
    /// `Frob_ℓ(0)` at this `ℓ` already is all of `Frob(0)`.
    pub period: u64,
    /// Every `ℓ` that was enumerated, in order.
    pub ells: Vec<u64>,
    /// Whether the last two rounds added no new class.
    pub stable: bool,
}

impl FrobSet {
    pub fn horizon(&self) -> u64 {
        self.ells.last().copied().unwrap_or(0)
    }
}

/// Union of `Frob_ℓ(D)` over `ℓ = 1, …, P` and `ℓ = 2P, …, rounds·P`, where
/// `P` is [`FrobSet::period`].
pub fn frob_set(fan: &StackyFan, d: &[Int], rounds: u64) -> Result<FrobSet> {
    check_smooth_variety(fan)?;
    let n = fan.rank_n() as u64;
    let period = arrangement_period(fan) * (1..=n + 1).fold(1u64, |acc, k| acc.lcm(&k));
    let mut ells: Vec<u64> = (1..=period).collect();
    ells.extend((2..=rounds.max(1)).map(|k| k * period));
    let mut classes = BTreeSet::new();
    let mut added = Vec::with_capacity(ells.len());
    for &ell in &ells {
        let before = classes.len();
        classes.extend(frob_pushforward(fan, d, ell)?.summands.into_keys());
        added.push(classes.len() - before);
    }
    let stable = added.len() >= 2 && added[added.len() - 2..].iter().all(|&a| a == 0);
    Ok(FrobSet { classes, period, ells, stable })
}
