//! Compatibility of local and global spectra for n-mode Gaussian states.
//!
//! A zero-mean Gaussian state of `n` bosonic modes is described by its
//! `2n x 2n` covariance matrix in the ordering `q1, p1, ..., qn, pn`. Its
//! *global* spectral parameters are the symplectic eigenvalues `kappa`, and
//! its *local* spectral parameters are `m_j = sqrt(det V_jj)` for the
//! diagonal `2 x 2` blocks. The crate decides when a pair `(kappa, m)` can
//! belong to the same state and, when it can, builds one explicitly as a
//! product of two-mode beam splitters and squeezers.
//!
//! Module map:
//!
//! * [`symplectic`]: the symplectic form, elementary two-mode generators,
//!   local normal form, physicality checks and seeded random states.
//! * [`spectra`]: symplectic spectrum, Williamson factorization, the
//!   dominance test and thermal eigenvalue lists.
//! * [`two_mode`]: two-mode standard form, invariants, the coupling solver
//!   and redistribution parameters.
//! * [`solver`]: pairwise symplectic Jacobi diagonalization and the staged
//!   synthesis of a state with prescribed spectra.

// `!(x > y)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
mod linalg;
pub mod solver;
pub mod spectra;
pub mod symplectic;
pub mod two_mode;

pub use error::{Error, Result};
pub use solver::{
    jacobi_decompose, synthesize, verify, JacobiOutcome, JacobiStep, JacobiTrace, StepParameter,
    SynthesisOutcome, SynthesisStep, SynthesisTrace, VerifyReport,
};
pub use spectra::{
    dominates, symplectic_spectrum, thermal_eigenvalues, williamson, DominanceCertificate,
    SpectralVector, ThermalEigenvalue, WilliamsonFactorization,
};
pub use symplectic::{
    beam_splitter_pair, check_physical, is_symplectic, local_normal_form, random_state,
    squeezer_pair, symplectic_form, CovarianceMatrix, LocalNormalForm, RandomState, SymplecticForm,
    SymplecticMatrix,
};
pub use two_mode::{
    bs_param, diagonalize_balanced, pair_factor, reconstruct_two_mode, solve_couplings, sq_param,
    standard_form, two_mode_invariants, BalancedDiagonalization, GeneratorKind, StandardForm,
    TwoModeStandardForm,
};

/// Default absolute tolerance on symmetry and symplecticity residuals.
pub const DEFAULT_TOL: f64 = 1e-10;
