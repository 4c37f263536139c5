//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by geometric constructions, objectives and file formats.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point is not interior: margin {margin:.3e} below required {required:.3e}")]
    NotInterior { margin: f64, required: f64 },

    #[error("ray does not leave the region (no bounding constraint hit)")]
    UnboundedRay,

    #[error("need at least {required} points, got {got}")]
    TooFewPoints { required: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    #[error("halfspace intersection is unbounded")]
    Unbounded,

    #[error("halfspace intersection is empty or lower-dimensional")]
    EmptyIntersection,

    #[error("part {0} is empty (degenerate apex placement)")]
    EmptyPart(usize),

    #[error("objective evaluation failed: {0}")]
    Objective(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
