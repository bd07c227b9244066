use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorseError {
    #[error("edge {edge} has no orientation sign")]
    MissingOrientation { edge: usize },

    #[error("ray {0} has a zero functional on the exit torus")]
    RayInactive(usize),

    #[error("matched edge {edge} carries a non-invertible value")]
    MatchingNotRespecting { edge: usize },

    #[error("edge set is not an acyclic partial matching")]
    InvalidMatching,

    #[error("edge {edge} does not drop the level by exactly one")]
    InvalidQuiver { edge: usize },
}

impl MorseError {
    pub fn code(&self) -> &'static str {
        match self {
            MorseError::MissingOrientation { .. } => "MISSING_ORIENTATION",
            MorseError::RayInactive(_) => "RAY_INACTIVE",
            MorseError::MatchingNotRespecting { .. } => "MATCHING_NOT_RESPECTING",
            MorseError::InvalidMatching => "INVALID_MATCHING",
            MorseError::InvalidQuiver { .. } => "INVALID_QUIVER",
        }
    }
}

pub type Result<T, E = MorseError> = std::result::Result<T, E>;
