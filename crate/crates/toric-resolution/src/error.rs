use thiserror::Error;
use toric_core::CoreError;
use toric_morse::MorseError;
use toric_strat::StratError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResolutionError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error(transparent)]
    Strat(#[from] StratError),

    #[error(transparent)]
    Morse(#[from] MorseError),

    #[error("chart has no Koszul local model: {0}")]
    NoLocalModel(String),

    #[error("open inclusion misses ray {ray}, whose image under beta is nonzero")]
    NotEquivCodim2 { ray: usize },

    #[error("entry ({row}, {col}) of d_{degree} is not homogeneous")]
    Inhomogeneous { degree: i64, row: usize, col: usize },

    #[error("sublattice does not define a torus acting on the substack: {0}")]
    InvalidAction(String),

    #[error("reduced complex does not match the stratification of the smaller fan after removing ray {ray}")]
    RestrictionMismatch { ray: usize },

    #[error("malformed complex file: {0}")]
    Parse(String),
}

impl ResolutionError {
    pub fn code(&self) -> &'static str {
        match self {
            ResolutionError::Core(e) => e.code(),
            ResolutionError::Strat(e) => e.code(),
            ResolutionError::Morse(e) => e.code(),
            ResolutionError::NoLocalModel(_) => "NO_LOCAL_MODEL",
            ResolutionError::NotEquivCodim2 { .. } => "NOT_EQUIV_CODIM_2",
            ResolutionError::Inhomogeneous { .. } => "INHOMOGENEOUS_ENTRY",
            ResolutionError::InvalidAction(_) => "INVALID_ACTION",
            ResolutionError::RestrictionMismatch { .. } => "RESTRICTION_MISMATCH",
            ResolutionError::Parse(_) => "PARSE",
        }
    }
}

pub type Result<T, E = ResolutionError> = std::result::Result<T, E>;
