//! Line-bundle resolutions `C_•(S^φ, O^φ)` of toric substacks: assembly,
//! products, restriction to charts up to homotopy, quotient functoriality,
//! and exact or randomized verification.

pub mod complex;
pub mod error;
pub mod fiber;
pub mod iso;
pub mod json;
pub mod koszul;
pub mod quotient;
pub mod restrict;

pub use complex::{
    alternating_rank_sum, augmentation_is_cocycle, build_resolution, check_d_squared, check_homogeneity,
    check_thomsen_membership, complex_of_stratification, diagonal_resolution, tensor_resolutions, AugmentedComplex,
    LineBundleComplex,
};
pub use error::{ResolutionError, Result};
pub use fiber::{fiber_exactness_check, FiberReport, FiberViolation};
pub use iso::{find_signed_isomorphism, isomorphic_up_to_units, SignedIso};
pub use json::ComplexFile;
pub use koszul::{chart_local_model, koszul_compare, koszul_complex};
pub use quotient::{
    free_locus_quotient, iflat_extend_complex, orbit_lattice, pullback_along_torus_quotient,
    pullback_torus_quotient_check, pushforward_finite_quotient_complex, resolve_through_torus_quotient,
    split_components, torus_quotient_fan, TorusQuotientPipeline,
};
pub use restrict::{restrict_to_chart, restrict_to_cone, ChartRestriction};
