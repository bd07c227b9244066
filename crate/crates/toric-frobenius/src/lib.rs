//! Toric Frobenius pushforwards of line bundles, the zonotope in the real
//! Picard group, line bundle cohomology and the obstructions to generation
//! coming from linear inclusions. Everything here assumes a smooth toric
//! variety (`β = id`) with free Picard group.

pub mod cohomology;
pub mod decomposition;
pub mod error;
pub mod json;
pub mod linear;
pub mod pic;
pub mod report;
pub mod zonotope;

pub use cohomology::{cohomology_nonvanishing, line_bundle_cohomology, support_box, CohomologyReport, DegreeBox};
pub use decomposition::{arrangement_period, frob_pushforward, frob_set, FrobDecomposition, FrobSet, FROB_SET_ROUNDS};
pub use error::{FrobeniusError, Result};
pub use linear::{linear_inclusions, LinearInclusion};
pub use pic::PicCoordinates;
pub use report::{generation_report, multiplicity_check, GenerationReport, InclusionVerdict, MultiplicityCheck};
pub use zonotope::{Facet, Zonotope};

/// The zonotope of `fan` in the standard Pic coordinates.
pub fn zonotope_vertices(fan: &toric_core::StackyFan) -> Result<(PicCoordinates, Zonotope)> {
    let coords = PicCoordinates::standard(fan)?;
    let z = Zonotope::of(&coords);
    Ok((coords, z))
}
