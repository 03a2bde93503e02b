//! Error types shared by the whole crate.

use thiserror::Error;

/// Everything that can go wrong while parsing, framing, or verifying.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input does not span enough directions (Gram determinant at or below
    /// the degeneracy threshold, or a subspace of dimension < 2 where a
    /// 2-plane is required).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A vector or matrix has the wrong length for the ambient/tangent space.
    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    DimensionMismatch {
        expected: usize,
        got: usize,
        context: String,
    },

    /// The holomorphic factor dimension must be even.
    #[error("parity error: n1 = {n1} must be even")]
    ParityError { n1: usize },

    /// Evaluation left the domain of a primitive (log of a non-positive
    /// value, sqrt of a negative, division by zero) or a chart point lies
    /// outside the declared coordinate box.
    #[error("domain error: {0}")]
    DomainError(String),

    /// The warping function is not positive at the evaluation point.
    #[error("non-positive warp: f = {f}")]
    NonPositiveWarp { f: f64 },

    /// The Jacobian of the chart is rank deficient at the point.
    #[error("not an immersion: smallest singular value {sigma_min:.3e} <= {threshold:.3e}")]
    NotImmersed { sigma_min: f64, threshold: f64 },

    /// No frame split satisfies the CR residual tests at the point.
    #[error("CR structure violated: {0}")]
    CRViolation(String),

    /// The normal frame cannot be rotated into the required gauge.
    #[error("gauge error: {0}")]
    GaugeError(String),

    /// A normal or tangent index is out of range.
    #[error("index error: {0}")]
    IndexError(String),

    /// Expression parsing failed.
    #[error("parse error at position {pos}: expected {}, found {found}", expected.join(" | "))]
    ParseError {
        pos: usize,
        expected: Vec<String>,
        found: String,
    },

    /// The expression references a variable that was not declared.
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },

    /// A scenario file is malformed; `path` points at the offending field.
    #[error("config error at `{path}`: {message}")]
    ConfigError { path: String, message: String },
}

impl Error {
    pub fn dim(expected: usize, got: usize, context: impl Into<String>) -> Self {
        Error::DimensionMismatch {
            expected,
            got,
            context: context.into(),
        }
    }

    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::ConfigError {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
