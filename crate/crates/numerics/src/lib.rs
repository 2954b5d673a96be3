//! Dense numerical kernels shared across the workspace.
//!
//! Everything here operates on small fixed-size or short `Vec`-backed
//! problems (3x3 eigensystems, a handful of fit parameters), so the
//! implementations favour robustness and determinism over asymptotic
//! speed.

pub mod format;
pub mod hermitian;
pub mod jacobi;
pub mod linfit;
pub mod lm;
pub mod neldermead;

pub use format::format_exp9;
pub use hermitian::{eigen_hermitian_3x3, eigenvalues_hermitian_3x3, CMat3};
pub use jacobi::eigen_symmetric_3x3;
pub use linfit::{linear_fit, LinearFit};
pub use lm::{levenberg_marquardt, LmFit, LmOptions};
pub use neldermead::{nelder_mead, NelderMeadOptions, NelderMeadResult};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("eigensolver did not converge after {sweeps} sweeps")]
    EigenNotConverged { sweeps: usize },
    #[error("least-squares fit did not converge after {iterations} iterations")]
    FitNotConverged { iterations: usize },
    #[error("normal equations are singular")]
    SingularSystem,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
