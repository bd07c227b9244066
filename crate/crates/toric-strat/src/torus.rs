//! The exit torus `T^φ = ker(M_X,R/M_X → M_Y,R/M_Y)` in saturated coordinates.

use num_traits::Zero;
use toric_core::lattice::{self, IntMatrix};
use toric_core::{Int, Rat, StackyFan, StackyMorphism, SupportFunction};

use crate::error::{Result, StratError};

/// Default bound on the codimension accepted by the enumerator.
pub const DEFAULT_CODIM_BOUND: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExitTorus {
    /// Ambient fan `Σ_X`.
    pub fan: StackyFan,
    pub codim: usize,
    /// Saturated basis `b_1..b_c` of `ker(φ*)` in `M_X`.
    pub basis: Vec<Vec<Int>>,
    /// Row `a_ρ` with `a_ρ[i] = ⟨b_i, β u_ρ⟩`, one per ray.
    pub ray_functionals: Vec<Vec<Int>>,
    pub inactive_rays: Vec<usize>,
}

impl ExitTorus {
    pub fn active_rays(&self) -> Vec<usize> {
        (0..self.ray_functionals.len()).filter(|r| !self.inactive_rays.contains(r)).collect()
    }

    pub fn num_rays(&self) -> usize {
        self.ray_functionals.len()
    }

    /// The point `Σ w_i b_i ∈ M_R`.
    pub fn to_character(&self, w: &[Rat]) -> Vec<Rat> {
        let n = self.fan.rank_n();
        (0..n)
            .map(|k| {
                self.basis.iter().zip(w).fold(Rat::zero(), |acc, (b, x)| acc + x * Rat::from_integer(b[k].clone()))
            })
            .collect()
    }

    /// `a_ρ · w` for every ray.
    pub fn evaluate(&self, w: &[Rat]) -> Vec<Rat> {
        self.ray_functionals
            .iter()
            .map(|a| a.iter().zip(w).fold(Rat::zero(), |acc, (x, y)| acc + Rat::from_integer(x.clone()) * y))
            .collect()
    }
}

/// Builds `T^φ` for an immersion of a closed substack.
pub fn exit_torus(phi: &StackyMorphism) -> Result<ExitTorus> {
    if !phi.classify().immersion {
        return Err(StratError::NotImmersion);
    }
    let coker = lattice::cokernel_structure(phi.phi());
    if !coker.torsion.is_empty() {
        return Err(StratError::TorsionCokernel(coker.torsion.iter().map(|t| t.to_string()).collect()));
    }
    Ok(exit_torus_unchecked(phi.target(), phi.phi()))
}

/// `T^φ` from the ambient fan and the lattice map `φ: N_Y → N_X` alone.
pub fn exit_torus_unchecked(fan: &StackyFan, phi: &IntMatrix<Int>) -> ExitTorus {
    let basis = lattice::kernel_saturated_basis(&phi.transpose());
    let ray_functionals: Vec<Vec<Int>> =
        fan.beta_rays().iter().map(|bu| basis.iter().map(|b| lattice::dot(b, bu)).collect()).collect();
    let inactive_rays =
        (0..ray_functionals.len()).filter(|&r| ray_functionals[r].iter().all(|x| x.is_zero())).collect();
    ExitTorus { fan: fan.clone(), codim: basis.len(), basis, ray_functionals, inactive_rays }
}

/// `bF(m)(u_ρ) = ⌈⟨m, β u_ρ⟩⌉` for `m ∈ M_R`.
pub fn bondal_support(fan: &StackyFan, m: &[Rat]) -> SupportFunction {
    let values = fan
        .beta_rays()
        .iter()
        .map(|bu| {
            let v = bu.iter().zip(m).fold(Rat::zero(), |acc, (x, y)| acc + Rat::from_integer(x.clone()) * y);
            v.ceil().to_integer()
        })
        .collect();
    SupportFunction::new(values)
}
