use thiserror::Error;

/// Everything that can go wrong in an evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    #[error("domain: {0}")]
    Domain(String),
    /// Gamma evaluated at (or numerically at) a non-positive integer.
    #[error("pole: gamma has a pole at {0}")]
    Pole(f64),
    /// Inputs valid but outside the regime a branch claims accuracy in.
    #[error("regime: {0}")]
    Regime(String),
    /// Result not representable in the working format.
    #[error("range: {0}")]
    Range(String),
    #[error("convergence: {0}")]
    Convergence(String),
    /// Cancellation left too few significant digits.
    #[error("cancellation: {0}")]
    Cancellation(String),
    #[error("quadrature: {0}")]
    Quadrature(String),
    /// Two independent methods disagree beyond tolerance.
    #[error("disagreement: {0}")]
    Disagreement(String),
    /// Numerical differentiation or interpolation is ill-conditioned.
    #[error("conditioning: {0}")]
    Conditioning(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    /// The reference evaluation failed; wraps the cause.
    #[error("oracle: {0}")]
    Oracle(Box<Error>),
}

impl Error {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Pole(_) => "pole",
            Error::Regime(_) => "regime",
            Error::Range(_) => "range",
            Error::Convergence(_) => "convergence",
            Error::Cancellation(_) => "cancellation",
            Error::Quadrature(_) => "quadrature",
            Error::Disagreement(_) => "disagreement",
            Error::Conditioning(_) => "conditioning",
            Error::InsufficientData(_) => "insufficient-data",
            Error::Oracle(_) => "oracle",
        }
    }

    /// True for errors caused by the caller's inputs rather than by a
    /// numerical failure.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Pole(_) | Error::Regime(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn regime(msg: impl Into<String>) -> Error {
    Error::Regime(msg.into())
}
