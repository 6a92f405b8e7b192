use thiserror::Error;

/// Errors produced by the form calculus, the SDP engine and the checkers built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("bad exponent {exponent:?}: expected {n} non-negative entries summing to {degree}")]
    BadExponent {
        exponent: Vec<i64>,
        n: usize,
        degree: u32,
    },
    #[error("non-finite coefficient")]
    NonFinite,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("wrong arity: form of degree {degree} needs {degree} points, got {got}")]
    WrongArity { degree: u32, got: usize },
    #[error("operation requires an even degree, got {0}")]
    OddDegree(u32),
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: u32, right: u32 },
    #[error("operator degree {op} exceeds form degree {form}")]
    DegreeExceeds { op: u32, form: u32 },
    #[error("operation requires a bivariate form, got n = {0}")]
    NotBivariate(usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is not symmetric (asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("solver failure: {0}")]
    SolverFailure(String),
    #[error("form takes a negative value {value:e} at certificate point {index}")]
    NegativeEvaluation { index: usize, value: f64 },
    #[error("negative input {0:e}")]
    NegativeInput(f64),
    #[error("configuration generation failed after {0} attempts")]
    GenerationFailed(usize),
    #[error("degree parameter d = {0} must be even and at least 4")]
    DOdd(u32),
    #[error("constructed form failed the convexity SDP (t* = {0:e})")]
    ConvexityRefutation(f64),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
