use thiserror::Error;
use toric_core::CoreError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrobeniusError {
    #[error("Pic has torsion {0:?}; real Picard space computations need a free group")]
    PicNotFree(Vec<String>),

    #[error("the given rays do not form a basis of Pic")]
    NotAPicBasis,

    #[error("point lies outside the zonotope")]
    PointOutsideZ,

    #[error("degree box is too small: cohomology can occur in [{needed_lower:?}, {needed_upper:?}]")]
    BoxTooSmall { needed_lower: Vec<String>, needed_upper: Vec<String> },

    #[error("fan is not complete")]
    NotComplete,

    #[error("expected a toric variety (β = id)")]
    NotVariety,

    #[error("Frobenius degree must be at least 1")]
    InvalidEll,

    #[error("lattice data exceed the 64-bit enumeration range")]
    Overflow,

    #[error(transparent)]
    Core(#[from] CoreError),
}

impl FrobeniusError {
    pub fn code(&self) -> &'static str {
        match self {
            FrobeniusError::PicNotFree(_) => "PIC_NOT_FREE",
            FrobeniusError::NotAPicBasis => "NOT_A_PIC_BASIS",
            FrobeniusError::PointOutsideZ => "POINT_OUTSIDE_Z",
            FrobeniusError::BoxTooSmall { .. } => "BOX_TOO_SMALL",
            FrobeniusError::NotComplete => "NOT_COMPLETE",
            FrobeniusError::NotVariety => "NOT_VARIETY",
            FrobeniusError::InvalidEll => "INVALID_ELL",
            FrobeniusError::Overflow => "OVERFLOW",
            FrobeniusError::Core(e) => e.code(),
        }
    }
}

pub type Result<T, E = FrobeniusError> = std::result::Result<T, E>;
