//! The reduction engine: first-order lift, pre-symplectic form and the
//! bordering loop.

mod constraints;
mod lift;
mod reduce;
mod state;
mod system;

use thiserror::Error;

pub use constraints::{consistency_constraints, Candidate, Constraint, Verdict};
pub use lift::first_order_lift;
pub use reduce::{
    border, reduce, BorderingPolicy, MatrixStatus, ReduceOptions, ReductionReport, TraceEvent,
    DEPENDENT_CONSTRAINT_MESSAGE, NULL_CONSTRAINT_MESSAGE,
};
pub use state::{presymplectic_form, SymplecticState};
pub use system::{velocity_name, Dynamics, Mode, SystemDefinition, SystemError};

use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error(transparent)]
    Definition(#[from] SystemError),
    #[error("kinetic term is not quadratic in the velocities (Hessian entry `{0}`)")]
    NotQuadratic(String),
    #[error("iteration cap of {0} bordering events exceeded")]
    IterationCap(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
