//! Error types shared across the crate.

use num_complex::Complex64;
use thiserror::Error;

/// Diagnostic payload for a (near-)singular signal/idler coefficient matrix.
///
/// A vanishing determinant marks the onset of parametric instability, so the
/// solver reports the operating point instead of returning NaN amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct Instability {
    /// Determinant of the coefficient matrix at the failing point.
    pub determinant: Complex64,
    /// Condition number estimate of the coefficient matrix.
    pub condition: f64,
    /// Probe detuning at which the solve failed (rate units).
    pub detuning: f64,
}

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("invalid lattice: {0}")]
    Lattice(String),

    #[error("dimension mismatch: expected {expected}, got {got} ({what})")]
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "scattering solve near instability at detuning {:.6e}: |det| = {:.6e}, cond = {:.3e}",
        .0.detuning, .0.determinant.norm(), .0.condition
    )]
    Instability(Instability),

    #[error("eigensolver failed to converge (condition number {condition:.3e})")]
    EigenFailure { condition: f64 },

    #[error("fit did not converge: {0}")]
    Unconverged(String),

    #[error("invalid measurement set: {0}")]
    Measurement(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
