//! Obstructions to generation by Frobenius pushforwards coming from linear
//! inclusions.

use toric_core::{DivisorClass, Int, StackyFan};

use crate::cohomology::line_bundle_cohomology;
use crate::decomposition::frob_pushforward;
use crate::error::Result;
use crate::linear::{linear_inclusions, LinearInclusion};

/// `dim Hom^•(O_Y, (F_ℓ)_* O(D))` computed summand by summand, against
/// `ℓ^k · dim Hom^•(O_Y, O(D))` with `k = dim X − dim Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityCheck {
    pub ell: u64,
    pub k: usize,
    pub lhs: u64,
    pub rhs: u64,
}

impl MultiplicityCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InclusionVerdict {
    pub inclusion: LinearInclusion,
    /// `φ^* D` on `Y`.
    pub pulled_back: Vec<Int>,
    /// `dim H^i(O_Y(φ^* D))`.
    pub cohomology: Vec<u64>,
    pub witness: Option<(usize, Vec<Int>)>,
    pub multiplicity: MultiplicityCheck,
}

impl InclusionVerdict {
    /// `Hom^•(O_Y, O(D)) ≠ 0`.
    pub fn nonzero(&self) -> bool {
        self.cohomology.iter().any(|&h| h > 0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenerationReport {
    pub divisor: Vec<Int>,
    pub class: DivisorClass,
    pub verdicts: Vec<InclusionVerdict>,
}

impl GenerationReport {
    /// Whether no linear inclusion obstructs generation.
    pub fn unobstructed(&self) -> bool {
        self.verdicts.iter().all(InclusionVerdict::nonzero)
    }

    pub fn obstructions(&self) -> impl Iterator<Item = &InclusionVerdict> {
        self.verdicts.iter().filter(|v| !v.nonzero())
    }

    pub fn multiplicities_hold(&self) -> bool {
        self.verdicts.iter().all(|v| v.multiplicity.holds())
    }
}

fn hom_dim(inc: &LinearInclusion, d: &[Int]) -> Result<u64> {
    Ok(line_bundle_cohomology(&inc.fan, &inc.pullback(d), None)?.total())
}

/// Checks the `ℓ^k` identity for one inclusion.
pub fn multiplicity_check(fan: &StackyFan, inc: &LinearInclusion, d: &[Int], ell: u64) -> Result<MultiplicityCheck> {
    let k = fan.rank_n() - inc.rank;
    let decomposition = frob_pushforward(fan, d, ell)?;
    let mut lhs = 0u64;
    for (e, mu) in &decomposition.summands {
        lhs += mu * hom_dim(inc, &e.coefficients)?;
    }
    let rhs = ell.pow(k as u32) * hom_dim(inc, d)?;
    Ok(MultiplicityCheck { ell, k, lhs, rhs })
}

/// One verdict per linear inclusion, each with the multiplicity identity
/// checked at the given `ℓ`.
pub fn generation_report(fan: &StackyFan, d: &[Int], ell: u64) -> Result<GenerationReport> {
    let mut verdicts = Vec::new();
    for inc in linear_inclusions(fan, fan.rank_n())? {
        let pulled_back = inc.pullback(d);
        let c = line_bundle_cohomology(&inc.fan, &pulled_back, None)?;
        let multiplicity = multiplicity_check(fan, &inc, d, ell)?;
        verdicts.push(InclusionVerdict { pulled_back, cohomology: c.dims, witness: c.witness, multiplicity, inclusion: inc });
    }
    Ok(GenerationReport { divisor: d.to_vec(), class: toric_core::PicGroup::of(fan).canonical(d), verdicts })
}
