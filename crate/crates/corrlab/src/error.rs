//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A numeric input was NaN or infinite where a finite value is required.
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    /// A parameter violated its domain (named field, human-readable reason).
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Matrix dimensions incompatible with the requested operation.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A matrix required to be Hermitian deviates beyond tolerance.
    #[error("matrix not Hermitian: max deviation {deviation:.3e} exceeds {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },

    /// An eigenvalue fell below the PSD clipping tolerance; the correlation
    /// approximation that produced the matrix is broken.
    #[error("matrix not positive semidefinite: min eigenvalue {min_eigenvalue:.3e} (lambda_max {lambda_max:.3e})")]
    NotPsd { min_eigenvalue: f64, lambda_max: f64 },

    /// Adaptive quadrature could not reach the requested tolerance.
    #[error("quadrature did not converge: achieved {achieved:.3e}, requested {requested:.3e}")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },

    /// Input that makes the requested quantity undefined (e.g. an all-zero
    /// channel matrix for SINR).
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),

    /// Config file could not be parsed; carries the 1-based line number.
    #[error("config parse error at line {line}: {msg}")]
    ConfigParse { line: usize, msg: String },

    /// Config parsed but a field failed validation.
    #[error("config validation error in field `{field}`: {msg}")]
    ConfigValidation { field: String, msg: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
