use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum JsrError {
    #[error("matrix set must contain at least one matrix")]
    EmptySet,

    #[error("matrix {index} has a non-finite entry")]
    NonFiniteEntry { index: usize },

    #[error("product enumeration needs {count} products, above the cap of {cap}")]
    EnumerationCap { count: u128, cap: u64 },

    #[error("product length must be at least 1")]
    ZeroLength,

    #[error("grid mismatch: {left} nodes vs {right} nodes")]
    GridMismatch { left: usize, right: usize },

    #[error("operation needs an even node count, got {0}")]
    OddNodeCount(usize),

    #[error("gauge values must be positive and finite (node {index} = {value})")]
    InvalidGauge { index: usize, value: f64 },

    #[error("gauge needs at least one node")]
    EmptyGauge,

    #[error("averaging inputs must be positive, got t = {t}, s = {s}")]
    NonPositiveMean { t: f64, s: f64 },

    #[error("matrix set is reducible: common invariant line through ({}, {})", .direction[0], .direction[1])]
    Reducible { direction: [f64; 2] },

    #[error("switch counting needs at least two matrices")]
    SingleMatrix,

    #[error("invalid run configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = JsrError> = std::result::Result<T, E>;
