use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series or integral diverges at the requested point.
    #[error("divergence: {0}")]
    Divergence(String),

    /// The chemical potential lies on the wrong side of the mean-field threshold.
    #[error("branch error: {0}")]
    Branch(String),

    /// A maximizer or root was not contained in the supplied bracket.
    #[error("bracket error: {0}")]
    Bracket(String),

    /// Quadrature or iteration failed to reach the requested accuracy.
    #[error("accuracy error: {0}")]
    Accuracy(String),

    /// A potential profile is not integrable.
    #[error("integrability error: {0}")]
    Integrability(String),

    /// A potential fails the positive-type certification.
    #[error("potential rejected: {0}")]
    NotPositiveType(String),

    /// Particle-number truncation does not meet the tail criterion.
    #[error("truncation error: tail weight too large at n_max = {n_max}, try n_max >= {suggested}")]
    Truncation { n_max: usize, suggested: usize },

    /// The mode set selected by the energy cutoff is empty.
    #[error("cutoff error: {0}")]
    Cutoff(String),

    /// A required parameter was not supplied.
    #[error("missing parameter: {0}")]
    MissingParameter(String),

    /// Malformed input text (potential tables, specs).
    #[error("parse error: {0}")]
    Parse(String),

    /// Arithmetic left the representable range.
    #[error("numeric error: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! ensure {
    ($cond:expr, $variant:ident, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::$variant(format!($($arg)+)));
        }
    };
}
pub(crate) use ensure;
