//! Periodic grids, Fourier analysis/synthesis and the diagonal multipliers
//! (derivative, fractional Laplacian) acting on truncated Fourier series.

mod field;
mod grid;
mod ops;
mod transform;

pub use field::SpectralField;
pub use grid::PeriodicGrid;
pub use ops::{
    dealias, dealias_cutoff, derivative_x, frac_laplacian, frac_laplacian_symbol, product, projection_error,
    sobolev_norm, SobolevExponent,
};
pub use transform::{analyze, analyze_samples, project, synthesize};
pub(crate) use transform::{from_physical, to_physical};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("dimension mismatch: expected {expected} values, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },
    #[error("coefficients are not Hermitian symmetric (relative defect {defect:.3e})")]
    Symmetry { defect: f64 },
    #[error("fields live on different grids")]
    GridMismatch,
}

/// Relative Hermitian defect tolerated by [`synthesize`].
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;
