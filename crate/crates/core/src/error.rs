use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("domain error in `{subexpr}`: {reason}")]
    Domain { subexpr: String, reason: String },

    #[error("non-finite value from `{subexpr}`")]
    NonFinite { subexpr: String },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: String,
        expected: usize,
        found: usize,
    },

    #[error("invalid chart `{chart}`: {reason}")]
    InvalidChart { chart: String, reason: String },

    #[error("metric is singular (condition number {condition:.3e})")]
    SingularMetric { condition: f64 },

    #[error("metric is not positive definite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("metric is not symmetric (residual {residual:.3e})")]
    NotSymmetric { residual: f64 },

    #[error("point {point:?} lies outside the domain of `{chart}`")]
    OutsideDomain { chart: String, point: Vec<f64> },

    #[error("image {image:?} lies outside the domain of `{chart}`")]
    ImageOutsideDomain { chart: String, image: Vec<f64> },

    #[error("frame is rank deficient: vector {index} depends on the preceding ones")]
    RankDeficient { index: usize },

    #[error("almost-contact structures need odd dimension, got {dim}")]
    DimensionParity { dim: usize },

    #[error("degenerate least-squares fit (condition number {condition:.3e})")]
    DegenerateFit { condition: f64 },

    #[error("geodesic left the domain at s = {s}")]
    DomainExit { s: f64, point: Vec<f64> },

    #[error("step too large: speed drifted by {drift:.3e} (relative)")]
    StepTooLarge { drift: f64 },

    #[error("vector is not orthogonal to range π* (residual {residual:.3e})")]
    NotOrthogonal { residual: f64 },

    #[error("structure lives on `{structure}` but the map lands in `{codomain}`")]
    StructureMismatch { structure: String, codomain: String },

    #[error("the {which} distribution is empty")]
    EmptyDistribution { which: String },

    #[error("π*Z = BU has no solution on (ker π*)⊥ (residual {residual:.3e})")]
    UndefinedLift { residual: f64 },

    #[error("declared frame disagrees with the computed decomposition (residual {residual:.3e})")]
    FrameMismatch { residual: f64 },

    #[error("range π* is unknown at s = {s}: the curve is {distance:.3e} away from the lifted image")]
    OffImage { s: f64, distance: f64 },

    #[error("velocity vanished along the trace at s = {s}")]
    DegenerateVelocity { s: f64 },

    #[error("invalid argument: {0}")]
    Invalid(String),
}
