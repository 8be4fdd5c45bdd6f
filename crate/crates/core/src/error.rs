use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("closed forms require resonance, got omega = {omega} and Omega = {big_omega}")]
    NonResonant { omega: f64, big_omega: f64 },

    #[error("Fock cutoff {n_max} too small: tail mass {tail_mass:e} exceeds {limit:e} (need at least {required})")]
    CutoffTooSmall {
        n_max: usize,
        required: usize,
        tail_mass: f64,
        limit: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("not a valid density matrix: {0}")]
    InvalidDensity(String),

    #[error("value not representable in f64: {0}")]
    Overflow(String),

    #[error("quadrature radius {radius} does not cover the support (need {required})")]
    QuadratureSupport { radius: f64, required: f64 },

    #[error("revival time undefined for a field with zero mean photon number")]
    UndefinedRevival,

    #[error("grid of {points} points exceeds the budget of {budget}; reduce axis counts by a factor of {factor:.1}")]
    GridBudget {
        points: usize,
        budget: usize,
        factor: f64,
    },

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidArgument {
        name,
        reason: reason.into(),
    }
}
