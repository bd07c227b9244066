use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("cokernel has free rank {0}; representatives are infinite")]
    RepresentativesInfinite(usize),

    #[error("diagram does not commute: beta_target * Phi != phi * beta_source")]
    IncompatibleDiagram,

    #[error("maximal cone {cone:?} is not smooth")]
    NotSmoothlyCovered { cone: Vec<usize> },

    #[error("image of ray {ray} lies outside the support of the target fan")]
    RayImageOutsideSupport { ray: usize },

    #[error("morphism is not a finite quotient")]
    NotFiniteQuotient,

    #[error("invalid stacky fan: {0}")]
    InvalidFan(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl CoreError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            CoreError::RepresentativesInfinite(_) => "REPRESENTATIVES_INFINITE",
            CoreError::IncompatibleDiagram => "INCOMPATIBLE_DIAGRAM",
            CoreError::NotSmoothlyCovered { .. } => "NOT_SMOOTHLY_COVERED",
            CoreError::RayImageOutsideSupport { .. } => "RAY_IMAGE_OUTSIDE_SUPPORT",
            CoreError::NotFiniteQuotient => "NOT_FINITE_QUOTIENT",
            CoreError::InvalidFan(_) => "INVALID_FAN",
            CoreError::InvalidMorphism(_) => "INVALID_MORPHISM",
            CoreError::Parse(_) => "PARSE",
        }
    }
}

pub type Result<T, E = CoreError> = std::result::Result<T, E>;
