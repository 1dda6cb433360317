use thiserror::Error;

/// Errors raised by the symbolic engine and the metric pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An exact-mode computation met a real-valued exponent offset.
    #[error("mode mismatch: {0}")]
    ModeMismatch(String),

    /// Evaluation outside the region where real powers of φ and ψ are defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid model parameter (exponent p, Yin parameter a, dimensions).
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("tangent vector must be non-zero")]
    ZeroVector,

    /// A finite-difference stencil could not be fitted inside the domain.
    #[error("stencil does not fit inside the domain: {0}")]
    Margin(String),

    #[error("denominator is identically zero")]
    ZeroDenominator,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
