use thiserror::Error;

use crate::algebra::AlgebraError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("momentum is identically zero")]
    ZeroMomentum,
    #[error("propagator atom vanishes identically for legs {0:?}")]
    DegenerateAtom(Vec<usize>),
    #[error("no admissible kinematic point after {0} attempts")]
    ExhaustedRetries(usize),
    #[error("{what} = {value} exceeds the enumeration cutoff {cutoff}")]
    CutoffExceeded {
        what: &'static str,
        value: usize,
        cutoff: usize,
    },
    #[error("`{dividend}` is not divisible by `{divisor}`")]
    NotDivisible { dividend: String, divisor: String },
    #[error("b_{n} depends on kinematics: `{first}` vs `{second}`")]
    KinematicsDependence {
        n: usize,
        first: String,
        second: String,
    },
    #[error("incompatible partitions: {0}")]
    IncompatiblePartitions(String),
    #[error("modular lift did not stabilize: {0}")]
    LiftFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
