//! Algebraic discrete Morse theory for sheaf-valued oriented quivers: the
//! cellular complex of a quiver sheaf, acyclic matchings, gradient flow
//! lines and Morse reduction with explicit homotopy data.

pub mod error;
pub mod matching;
pub mod matrix;
pub mod quiver;
pub mod reduce;

pub use error::{MorseError, Result};
pub use matching::{gradient_flow_lines, rho_positive_matching, validate_acyclic_matching, AcyclicMatching, FlowLine};
pub use matrix::{homology_ranks, ChainComplex, Coefficient, GradedMap, HomotopyCheck, HomotopyData, SparseMatrix};
pub use quiver::{exit_path_sheaf, sheaf_complex, MorseQuiver, QuiverEdge, QuiverSheaf};
pub use reduce::{morse_reduce, MorseReductionResult};
