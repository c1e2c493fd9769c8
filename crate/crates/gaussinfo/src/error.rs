//! Error type shared by all modules.

use thiserror::Error;

/// Failure modes of the numerical routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A matrix that must be (semi)definite is not, or a Cholesky /
    /// eigenvalue check failed.
    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),

    /// A covariance matrix violates the uncertainty bound: some symplectic
    /// eigenvalue of sigma/hbar falls below 1/2 beyond tolerance.
    #[error("unphysical state: min symplectic eigenvalue {min_nu} < 1/2")]
    UnphysicalState { min_nu: f64 },

    /// Empty, duplicated, or out-of-range subsystem selection.
    #[error("invalid subsystem: {0}")]
    InvalidSubsystem(String),

    /// The environment block C of a reduction cannot be inverted.
    #[error("environment block is singular")]
    SingularEnvironmentBlock,

    /// An intermediate quantity left its mathematically guaranteed range
    /// by more than round-off tolerance.
    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),

    /// Malformed input that is not a definiteness or subsystem problem.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Perturbation theory is undefined: the requested eigenstate is
    /// degenerate with another level within the gap tolerance.
    #[error("level {level} is degenerate: smallest gap {gap:e}")]
    DegenerateLevel { level: usize, gap: f64 },

    /// Successive quadrature refinements did not settle.
    #[error("quadrature not converged: refinement delta {delta:e}")]
    QuadratureNotConverged { delta: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
