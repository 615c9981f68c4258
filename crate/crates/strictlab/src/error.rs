use thiserror::Error;

/// Crate-wide error type.
///
/// The variants follow the failure modes of the lab: domain errors (an
/// argument lies outside the represented space or the operator's domain),
/// validation errors (an object violates a declared invariant), precondition
/// errors (a check was invoked before its premise was established), and
/// horizon failures (a finite search exhausted its budget without a verdict).
#[derive(Debug, Error)]
pub enum Error {
    /// An argument refers to a point, function, or index outside the
    /// represented space or domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A constructed object violates one of its declared invariants.
    #[error("validation error: {0}")]
    Validation(String),

    /// A check was run before its stated premise held.
    #[error("precondition error: {0}")]
    Precondition(String),

    /// The requested operation is not available on this semigroup backend.
    #[error("unsupported backend: {0}")]
    UnsupportedBackend(String),

    /// A compact-containment search exhausted the exhaustion without
    /// certifying; carries the best attained Wilson lower bound.
    #[error("containment search failed at horizon: best K_{best_index} attained lower bound {best_lower_bound:.6} < required {required:.6}")]
    ContainmentHorizon {
        best_index: usize,
        best_lower_bound: f64,
        required: f64,
    },

    /// A cutoff iteration did not stabilize within the allowed index range.
    #[error("cutoff iteration failed at horizon m={last_index}: residual {last_residual:.3e} > tol {tol:.3e}")]
    CutoffHorizon {
        last_index: usize,
        last_residual: f64,
        tol: f64,
    },

    /// Not enough Monte Carlo samples for the normal approximation.
    #[error("insufficient samples: need at least {needed}, have {have}")]
    InsufficientSamples { needed: usize, have: usize },

    /// Configuration file failed to parse or validate.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
