use thiserror::Error;
use toric_core::CoreError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StratError {
    #[error("morphism is not an immersion of a closed substack")]
    NotImmersion,

    #[error("coker(phi) has torsion {0:?}")]
    TorsionCokernel(Vec<String>),

    #[error("codimension {codim} exceeds the configured bound {bound}")]
    CodimLimit { codim: usize, bound: usize },

    #[error("ray functionals span only a rank-{rank} subspace of the {codim}-dimensional exit torus")]
    FunctionalsDoNotSpan { rank: usize, codim: usize },

    #[error(transparent)]
    Core(#[from] CoreError),
}

impl StratError {
    pub fn code(&self) -> &'static str {
        match self {
            StratError::NotImmersion => "NOT_IMMERSION",
            StratError::TorsionCokernel(_) => "TORSION_COKERNEL",
            StratError::CodimLimit { .. } => "CODIM_LIMIT",
            StratError::FunctionalsDoNotSpan { .. } => "FUNCTIONALS_DO_NOT_SPAN",
            StratError::Core(e) => e.code(),
        }
    }
}

pub type Result<T, E = StratError> = std::result::Result<T, E>;
