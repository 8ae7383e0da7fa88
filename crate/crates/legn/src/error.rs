//! Error type shared by the whole kernel.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("weight systems differ: ({0},{1}) vs ({2},{3})")]
    WeightMismatch(u32, u32, u32, u32),
    #[error("division requires a unit divisor (nonzero constant term)")]
    NonUnitDivisor,
    #[error("substituted series must vanish at the origin")]
    NotLocal,
    #[error("k-th root requires constant term 1")]
    RootOfNonUnit,
    #[error("compositional inverse requires order exactly 1 with nonzero leading coefficient")]
    NotInvertibleOrder,
    #[error("series order {found:?} does not match expected {expected}")]
    BadOrder { expected: u32, found: Option<u32> },
    #[error("exponent support has gcd {0} > 1: not a primitive branch")]
    NotPrimitive(u32),
    #[error("truncation window too small: {0}")]
    TruncationTooSmall(String),
    #[error("not semi-quasi-homogeneous of type ({k},{n}): {reason}")]
    NotSemiQuasiHomogeneous { k: u32, n: u32, reason: String },
    #[error("data outside the admissible transformation group: {0}")]
    NotInGroupJ(String),
    #[error("degenerate Jacobian: the contact divisor is not a unit")]
    DegenerateJacobian,
    #[error("pullback certificate failed: {0}")]
    NotContact(String),
    #[error("transported parametrization is not a Legendrian image: {0}")]
    NotLegendrianImage(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("monomial weight {0} is not above k*n = {1}")]
    BelowConductorRegion(u64, u64),
    #[error("valuation {0} below the conductor {1}")]
    BelowConductor(u32, u32),
    #[error("deformation changes the topological type: defect at weight {0} <= k*n")]
    NotEquisingular(u64),
    #[error("reduction failed: {0}")]
    ReductionFailed(String),
    #[error("no exact rational scaling: {0}")]
    ScaleNotRational(String),
    #[error("malformed input: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
