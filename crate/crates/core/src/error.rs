use thiserror::Error;

/// Errors produced by the closed-form evaluators, the Fock oracle and the
/// sweep driver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The vacuum (α = 0, ξ = 0, n̄ = 0) has zero mean photon number, so the
    /// normalised coherence is not defined.
    #[error("undefined coherence: mean photon number vanishes (vacuum state)")]
    UndefinedCoherence,

    #[error("squeeze phase of the state ({state}) does not match the phase implied by c ({flow})")]
    PhaseMismatch { state: f64, flow: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
