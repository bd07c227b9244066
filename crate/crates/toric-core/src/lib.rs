//! Exact lattice algebra for toric stacks: integer normal forms, stacky fans
//! and their morphisms, support functions and divisor classes.
//!
//! The lattice routines in [`lattice`] are generic over any exact integer type
//! implementing [`lattice::LatticeScalar`]; everything at the fan level is fixed
//! to arbitrary-precision integers through the aliases below.

pub mod error;
pub mod fan;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod lp;
pub mod morphism;
pub mod poly;
pub mod support;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Integer scalar used for all fan-level data.
pub type Int = BigInt;
/// Rational scalar used for real-lattice computations.
pub type Rat = BigRational;
/// A linear map between lattices (dense, row-major).
pub type LatticeMap = lattice::IntMatrix<Int>;

pub use error::{CoreError, Result};
pub use fan::{product_stacky_fan, standard, star_subdivision, validate_stacky_fan, RawFan, StackyFan, ValidationReport};
pub use lattice::{smith_normal_form, IntMatrix, LatticeScalar};
pub use morphism::{product_morphism, smooth_stacky_chart_cover, sublattice_immersion, Classification, StackyMorphism};
pub use poly::{MonomialSection, Poly};
pub use support::{
    delta_beta_contains, divisor_of_support, pic_canonical_form, pullback_support,
    pushforward_support_finite_quotient, DivisorClass, PicGroup, SupportFunction,
};

/// Shorthand for building an [`Int`] from a machine integer.
pub fn int(x: i64) -> Int {
    Int::from(x)
}

/// Shorthand for an integral [`Rat`].
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Converts a vector of machine integers.
pub fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

/// Result of [`cokernel_decomposition`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CokernelDecomposition {
    pub free_rank: usize,
    pub torsion: Vec<Int>,
    pub representatives: Vec<Vec<Int>>,
}

/// Structure and (finite) representatives of `coker(A)`.
pub fn cokernel_decomposition(a: &LatticeMap) -> Result<CokernelDecomposition> {
    let s = lattice::cokernel_structure(a);
    let reps = lattice::cokernel_representatives(a).ok_or(CoreError::RepresentativesInfinite(s.free_rank))?;
    Ok(CokernelDecomposition { free_rank: s.free_rank, torsion: s.torsion, representatives: reps })
}
