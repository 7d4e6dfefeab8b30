//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failures reported by the numeric kernels and the physics layers built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A drift matrix has an eigenvalue with non-negative real part.
    #[error("drift matrix is not Hurwitz: max real part of its eigenvalues is {max_re:e}")]
    UnstableDrift { max_re: f64 },
    /// A linear system could not be solved reliably.
    #[error("singular linear system: {0}")]
    SingularSystem(String),
    /// An iterative method ran out of iterations.
    #[error("no convergence: {0}")]
    NoConvergence(String),
    /// A matrix expected to be Hermitian is not.
    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    /// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
    #[error("quadrature tolerance not met: estimated error {estimate:e} exceeds target {target:e}")]
    ToleranceNotMet { estimate: f64, target: f64 },
    /// A root bracket does not enclose a sign change.
    #[error("no sign change over the bracket [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
    /// Matrix or vector dimensions are incompatible.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// A matrix expected to be positive definite is not.
    #[error("matrix is not positive definite (min eigenvalue {min_eig:e})")]
    NotPositiveDefinite { min_eig: f64 },
    /// A TGCP pair violates complete positivity.
    #[error("channel violates complete positivity (min eigenvalue {min_eig:e})")]
    InvalidChannel { min_eig: f64 },
    /// The resolvent of a GCP map is singular.
    #[error("singular resolvent in general Gaussian map")]
    SingularResolvent,
    /// The discriminant in the partially transposed spectrum formula is negative.
    #[error("negative discriminant {0:e}: input is not a physical covariance matrix")]
    NegativeDiscriminant(f64),
    /// A symmetric two-mode state was required.
    #[error("state is not symmetric: det A = {det_a}, det B = {det_b}")]
    NotSymmetric { det_a: f64, det_b: f64 },
    /// The covariance matrix is singular.
    #[error("singular covariance matrix")]
    SingularCm,
    /// The covariance matrix violates the uncertainty principle.
    #[error("unphysical covariance matrix (min eigenvalue of V + iΩ is {min_eig:e})")]
    Unphysical { min_eig: f64 },
    /// An argument lies outside the domain of a formula.
    #[error("domain error: {0}")]
    DomainError(String),
    /// The state is not entangled so no quantum advantage is available.
    #[error("state is not entangled (ν = {nu})")]
    NotEntangled { nu: f64 },
    /// A root that must exist was not found.
    #[error("no root found: {0}")]
    NoRoot(String),
    /// The steady-state fixed point iteration did not converge.
    #[error("steady-state fixed point diverged after {iterations} iterations")]
    FixedPointDiverged { iterations: usize },
    /// A physical input that must be positive is not.
    #[error("non-positive input: {0}")]
    NonPositiveInput(String),
    /// A set of filters is not orthonormal.
    #[error("filters {i} and {j} overlap by {overlap:e}")]
    NotOrthogonal { i: usize, j: usize, overlap: f64 },
    /// More than one partially transposed symplectic eigenvalue lies below one.
    #[error("{count} partially transposed symplectic eigenvalues lie below one")]
    MultipleSubunitEigenvalues { count: usize },
    /// A covariance-matrix file could not be parsed.
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
