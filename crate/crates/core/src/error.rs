use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} elements, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("not a bijection: value {value} appears more than once")]
    NotBijection { value: usize },

    #[error("value {value} out of range 1..={max}")]
    ValueOutOfRange { value: usize, max: usize },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("invalid dimension {d}: {reason}")]
    InvalidDimension { d: usize, reason: &'static str },

    #[error("entangling power is undefined for d = 1")]
    DegenerateDimension,

    #[error("budget exceeded: {what} (pass an explicit override to force)")]
    BudgetExceeded { what: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("matrix is not unitary (max |U^dagger U - I| = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("state is not normalized (norm = {norm})")]
    UnnormalizedState { norm: f64 },

    #[error("invalid density matrix: {reason}")]
    InvalidDensityMatrix { reason: String },

    #[error("invalid bipartition: {reason}")]
    InvalidCut { reason: String },

    #[error("at least {min} samples are required, got {got}")]
    InsufficientSamples { min: usize, got: usize },

    #[error("parameters must satisfy |c3| <= c2 <= c1 <= pi/4 (got c1={c1}, c2={c2}, c3={c3})")]
    ParameterOrderViolation { c1: f64, c2: f64, c3: f64 },

    #[error("not a Latin square: {reason}")]
    NotLatin { reason: String },

    #[error("Latin squares are not orthogonal: pair ({0}, {1}) repeats")]
    NotOrthogonal(usize, usize),

    #[error("no orthogonal Latin square pair construction for order {d}: {reason}")]
    UnsupportedOrder { d: usize, reason: String },

    #[error("integer overflow: {what}")]
    Overflow { what: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
