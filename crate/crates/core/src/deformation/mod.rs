//! The six-node diagram of fundamental groups attached to a classified Morse
//! function, its finite instantiations and their verification.

mod diagram;
mod leaves;
mod report;
mod theta;
mod verify;

pub use diagram::{
    build_diagram_f0, build_diagram_f1, garside_element, Arrow, BlockShape, Diagram, DiagramShape, GarsideData,
};
pub use leaves::{LeafAssignments, LeafPair, LeafSpec};
pub use report::{build_report, ArrowReport, Parameters, Report};
pub use theta::{theta_splitting_check, SplitReport};
pub use verify::{instantiate_and_verify, CheckResult, CheckStatus, Verification};

use thiserror::Error;

use crate::algebra::AlgebraError;

pub const DEFAULT_TRUNC: u32 = 4;

#[derive(Debug, Error)]
pub enum DeformationError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("cylinder decomposition has no classes")]
    EmptyDecomposition,
    #[error("Garside element is not central: {0}")]
    NonCentralGarside(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid leaf table: {0}")]
    Leaves(String),
}
