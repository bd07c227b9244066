//! Stratifications of exit tori by toric hyperplanes, Thomsen collections and
//! exit-path quivers.

pub mod error;
pub mod polytope;
pub mod quiver;
pub mod strata;
pub mod torus;

use std::collections::BTreeSet;

use serde_json::{json, Value};
use toric_core::json::{int_to_json, rat_to_json, vec_to_json};
use toric_core::{DivisorClass, StackyFan, StackyMorphism};

pub use error::{Result, StratError};
pub use quiver::{exit_path_quiver, ExitEdge, ExitPathQuiver};
pub use strata::{enumerate_strata, Stratum};
pub use torus::{bondal_support, exit_torus, ExitTorus, DEFAULT_CODIM_BOUND};

/// Exit torus, strata and quiver of an immersion, computed together.
#[derive(Clone, Debug)]
pub struct Stratification {
    pub torus: ExitTorus,
    pub quiver: ExitPathQuiver,
}

impl Stratification {
    pub fn of(phi: &StackyMorphism, codim_bound: usize) -> Result<Self> {
        let torus = exit_torus(phi)?;
        Self::of_torus(torus, codim_bound)
    }

    pub fn of_torus(torus: ExitTorus, codim_bound: usize) -> Result<Self> {
        let strata = enumerate_strata(&torus, codim_bound)?;
        let quiver = exit_path_quiver(&torus, strata);
        Ok(Stratification { torus, quiver })
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.quiver.strata
    }

    pub fn to_json(&self) -> Value {
        let strata: Vec<Value> = self
            .quiver
            .strata
            .iter()
            .map(|s| {
                json!({
                    "id": s.id,
                    "dim": s.dim,
                    "sample": s.sample.iter().map(rat_to_json).collect::<Vec<_>>(),
                    "active": s.active,
                    "bundle": vec_to_json(&s.bundle.coefficients),
                    "support": vec_to_json(&s.support.values),
                })
            })
            .collect();
        let edges: Vec<Value> = self
            .quiver
            .edges
            .iter()
            .map(|e| {
                json!({
                    "src": e.src,
                    "dst": e.dst,
                    "exponent": vec_to_json(&e.exponent),
                    "sign": e.sign,
                    "dst_lift_translation": vec_to_json(&e.dst_lift_translation),
                })
            })
            .collect();
        json!({
            "codim": self.torus.codim,
            "basis": self.torus.basis.iter().map(|b| vec_to_json(b)).collect::<Vec<_>>(),
            "ray_functionals": self.torus.ray_functionals.iter().map(|a| a.iter().map(int_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "identity_stratum": self.quiver.identity_stratum,
            "strata": strata,
            "edges": edges,
        })
    }
}

/// The Thomsen collection: classes of `bF` over all strata of the Bondal
/// stratification of `M_R/M`.
pub fn thomsen_collection(fan: &StackyFan, codim_bound: usize) -> Result<BTreeSet<DivisorClass>> {
    let point = StackyMorphism::identity_point(fan);
    let torus = torus::exit_torus_unchecked(fan, point.phi());
    let strata = enumerate_strata(&torus, codim_bound)?;
    Ok(strata.into_iter().map(|s| s.bundle).collect())
}
