use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("field mismatch: operands live over different fields")]
    FieldMismatch,

    #[error("dimension {0} outside supported range 2..=64")]
    DimensionOutOfRange(usize),

    #[error("zero vector has no direction")]
    ZeroVector,

    #[error("vector is not unit length (norm {0})")]
    NotUnit(f64),

    #[error("rank deficient input (residual {residual:.3e})")]
    RankDeficient { residual: f64 },

    #[error("{op}: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("{op} requires the {expected} field")]
    WrongField { op: &'static str, expected: &'static str },

    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("bisection did not reach tolerance after {0} iterations")]
    NoConvergence(usize),

    #[error("sample is not angle-consistent: pair ({i}, {j}) off by {defect:.3e}")]
    AngleInconsistent { i: usize, j: usize, defect: f64 },

    #[error("cannot decide linearity: {0}")]
    Undecidable(String),

    #[error("resolution {resolution} too coarse for tolerance {tolerance}")]
    ResolutionTooCoarse { resolution: usize, tolerance: f64 },

    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },

    #[error("invalid angle literal {0:?}")]
    AngleLiteral(String),

    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain { op, detail: detail.into() }
}
