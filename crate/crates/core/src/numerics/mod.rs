//! Special functions, quadrature, the tridiagonal solver and a
//! finite-difference helper shared by the pricing modules.

mod quad;
mod special;
mod tridiag;

use thiserror::Error;

pub use quad::{integrate, integrate_pieces, DEFAULT_MAX_SUBDIVISIONS};
pub use special::{erf, erfc, erfcx, gaussian_window, mills_ratio, normal_cdf, normal_pdf};
pub use tridiag::{thomas_solve, thomas_solve_with, Tridiag};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("quadrature did not converge (estimate {estimate}, error {error})")]
    NonConvergence { estimate: f64, error: f64 },
    #[error("integration bounds must be sorted")]
    InvalidInterval,
    #[error("pivot {pivot:e} at row {row} is below the singularity threshold")]
    SingularPivot { row: usize, pivot: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Symmetric difference quotient `(f(x+h) - f(x-h)) / 2h`.
pub fn central_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}
