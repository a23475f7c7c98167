//! Exact linear algebra over symbolic entries.

mod elim;
mod matrix;
mod rational;

use thiserror::Error;

pub use elim::{
    adjugate_with, determinant, determinant_with, echelon, echelon_with, generic_rank, generic_rank_with,
    inverse, inverse_with, kernel, kernel_with, pfaffian, pfaffian_with_limit, primitive_vector,
    rank_with, schur_complement, schur_complement_with, Echelon, GenericRank, PFAFFIAN_LIMIT,
};
pub use matrix::SymMatrix;
pub use rational::RatMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("leading block is singular")]
    SingularBlock,
    #[error("degenerate stratum: cannot decide whether pivot `{pivot}` vanishes")]
    DegenerateStratum { pivot: String },
    #[error("matrix is not antisymmetric at ({row}, {col})")]
    NotAntisymmetric { row: usize, col: usize },
    #[error("Pfaffian of odd dimension {0}")]
    OddDimension(usize),
    #[error("dimension {n} exceeds the limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("sampling budget exhausted without a regular point")]
    SamplingExhausted,
    #[error("internal error: {0}")]
    Internal(String),
}
