use thiserror::Error;

use crate::lattice::DivisorClass;

/// Everything that can go wrong in the toolkit.
///
/// Variants are grouped roughly by the module that raises them. None of them
/// signal a failed *check*; a check that does not hold is reported as a value.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("class {0} is not ample in the model cone")]
    NotAmple(DivisorClass),
    #[error("class {0} is not effective in the model cone")]
    NotEffective(DivisorClass),
    #[error("wall bound c must be positive, got {0}")]
    NonPositiveBound(i64),

    #[error("rank must be positive to take a slope")]
    ZeroRank,
    #[error("negative rank {0}")]
    NegativeRank(i64),
    #[error("ch2 parity violated: c1^2 - 2 ch2 = {0} is odd")]
    Ch2Parity(i64),
    #[error("unsupported Chern character shape: {0}")]
    UnsupportedShape(String),
    #[error("(r, k) = ({r}, {k}) outside the range r, k >= 2")]
    OutOfRange { r: i64, k: i64 },

    #[error("{0} is not a prime greater than 3")]
    BadCharacteristic(u64),
    #[error("singular curve: discriminant vanishes mod {0}")]
    SingularCurve(u64),
    #[error("point ({x}, {y}) is not on the curve")]
    OffCurve { x: u64, y: u64 },
    #[error("empty fibre bundle class")]
    EmptyBundle,
    #[error("Atiyah block rank must be at least 1")]
    ZeroBlockRank,

    #[error("degree sum {got} differs from g - 1 = {expected}")]
    DegreeSum { expected: i64, got: i64 },
    #[error("marked points must avoid the nodes of the spectral curve")]
    MarkedPointOnNode,
    #[error("extension class vanishes on some factor")]
    ZeroExtensionComponent,
    #[error("component {index} has degree {degree} < 0")]
    NegativeDegree { index: usize, degree: i64 },
    #[error("component {index}: genus {got} does not match class genus {expected}")]
    GenusMismatch {
        index: usize,
        expected: i64,
        got: i64,
    },

    #[error("invalid sheaf model: {0}")]
    InvalidModel(String),
    #[error("model is not reduced")]
    NotReduced,

    #[error("operation is only defined on the abelian product surface")]
    RequiresAbelian,
}

pub type Result<T> = std::result::Result<T, Error>;
