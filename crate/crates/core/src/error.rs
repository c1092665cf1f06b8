use thiserror::Error;

/// Rejection reasons for an input sequence `(a_1, ..., a_m)`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("a telescopic sequence needs at least two entries, got {0}")]
    TooShort(usize),
    #[error("entry a_{index} = {value} is smaller than 2")]
    EntryTooSmall { index: usize, value: u32 },
    #[error("gcd of the sequence is {0}, expected 1")]
    NotCoprime(u32),
    #[error("telescopic condition fails at index {index}: {value} is not in the scaled semigroup of its predecessors")]
    NotTelescopic { index: usize, value: u32 },
}

/// Failures raised by the expansion pipeline.
///
/// Apart from [`Error::Invalid`] and [`Error::TruncationExceeded`], every
/// variant names an internal invariant that the algebra guarantees; seeing
/// one means a bug upstream or an inconsistent user override.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Invalid(#[from] ValidationError),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("series truncation exceeded: coefficient {requested} requested, valid through {valid}")]
    TruncationExceeded { requested: i64, valid: i64 },
    #[error("series is not a unit: {0}")]
    NotAUnit(String),
    #[error("exact division left a nonzero remainder: {0}")]
    NonzeroRemainder(String),
    #[error("det D = {found}, expected {expected}")]
    DeterminantMismatch { found: i64, expected: i64 },
    #[error("leading term of det G_{k} mismatch: {detail}")]
    LeadingMismatch { k: usize, detail: String },
    #[error("residual at order {order} is not in Z[lambda]")]
    ResidualNotInZLambda { order: usize },
    #[error("leading coefficient of omega_{index} is not 1: {detail}")]
    LeadingCoefficientNotOne { index: usize, detail: String },
    #[error("integrality violation in {what}")]
    IntegralityViolation { what: String },
    #[error("homogeneity violation in {what}")]
    HomogeneityViolation { what: String },
    #[error("symmetry violation in {what}")]
    SymmetryViolation { what: String },
    #[error("coefficient window exceeded: {0}")]
    WindowExceeded(String),
    #[error("determinant for partition {partition:?} did not stabilize")]
    StabilizationFailure { partition: Vec<u32> },
    #[error("lowest-weight part of sigma differs from the Schur term: {0}")]
    LeadingTermMismatch(String),
    #[error("sigma depends on the choice of local parameter: {0}")]
    GaugeDependence(String),
    #[error("gauge identity dx_1/det G_1 = (-1)^(k-1) dx_k/det G_k fails for k = {k}")]
    GaugeIdentity { k: usize },
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
