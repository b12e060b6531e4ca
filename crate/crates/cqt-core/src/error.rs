//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by state construction, channel application and solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max |A - A†| entry = {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue = {min_eigenvalue:.3e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("trace = {trace} but expected 1")]
    NotUnitTrace { trace: f64 },

    #[error("vector norm = {norm} but expected 1")]
    NotNormalized { norm: f64 },

    #[error("Bloch vector has norm {norm}, expected a unit vector")]
    NotUnitBloch { norm: f64 },

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("cannot trace out all subsystems")]
    EmptyKeepSet,

    #[error("invalid qubit index {index} for a {n_qubits}-qubit state")]
    InvalidQubitIndex { index: usize, n_qubits: usize },

    #[error("POVM solver did not certify gap <= {tol:.3e} within {iterations} iterations (best gap {gap:.3e})")]
    NotConverged {
        tol: f64,
        iterations: usize,
        gap: f64,
        /// Best feasible iterate found before giving up.
        best: Box<crate::povm::SolveResult>,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
