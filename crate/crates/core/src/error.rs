use thiserror::Error;

use crate::solver::JacobiTrace;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid covariance matrix: {0}")]
    InvalidCovariance(String),

    #[error("incompatible spectra: {0}")]
    IncompatibleSpectra(String),

    #[error("infeasible redistribution: {0}")]
    InfeasibleRedistribution(String),

    #[error("couplings are not balanced: k_x = {kx}, k_p = {kp}")]
    NotBalanced { kx: f64, kp: f64 },

    #[error("unphysical global spectrum: smallest value {0} is below 1")]
    UnphysicalGlobalSpectrum(f64),

    #[error("modes {i} and {j} are correlated before a pair step: {detail}")]
    CorrelatedPair { i: usize, j: usize, detail: String },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// The Jacobi iteration ran out of sweeps; the partial trace is kept.
    #[error("pairwise diagonalization did not converge within {sweeps} sweeps")]
    NonConvergence {
        sweeps: usize,
        trace: Box<JacobiTrace>,
    },
}
