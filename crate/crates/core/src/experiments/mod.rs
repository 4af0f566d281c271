//! Convergence tables and zero-dispersion sweeps built on the solver and the
//! reference solutions.

mod convergence;
mod output;
mod zdl;

pub use convergence::{convergence_study, ConvergenceRow, Setup, StudyOptions};
pub use output::{format_f64, write_convergence_csv, write_sweep_csv};
pub use zdl::{zdl_sweep, EpsSweepRow, ReferenceKind, ZdlConfig, ZdlReference};

use thiserror::Error;

use crate::reference::ReferenceError;
use crate::solver::{RunError, SolverError};
use crate::spectral::{synthesize, SpectralError, SpectralField};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid argument `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },
    #[error("reference: {0}")]
    Reference(#[from] ReferenceError),
    #[error("solver: {0}")]
    Solver(#[from] SolverError),
    #[error("solver: {0}")]
    Run(#[from] Box<RunError>),
    #[error("spectral: {0}")]
    Spectral(#[from] SpectralError),
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
}

/// Observed order `(ln E₁ − ln E₂)/(ln N₂ − ln N₁)`; positive when the error
/// decreases with `N`.
pub fn rate(e1: f64, e2: f64, n1: usize, n2: usize) -> Result<f64, ExperimentError> {
    if !(e1 > 0.0 && e2 > 0.0) {
        return Err(ExperimentError::Parameter { name: "error", reason: format!("need positive errors, got {e1}, {e2}") });
    }
    if n1 == 0 || n2 == 0 || n1 == n2 {
        return Err(ExperimentError::Parameter {
            name: "n",
            reason: format!("need distinct positive mode counts, got {n1}, {n2}"),
        });
    }
    Ok((e1.ln() - e2.ln()) / ((n2 as f64).ln() - (n1 as f64).ln()))
}

/// `max |u_num(x_j) − u_ref(x_j)|` over the collocation points `x_j` that lie in `window`.
pub fn sup_error(u_num: &SpectralField, u_ref: impl Fn(f64) -> f64, window: [f64; 2]) -> Result<f64, ExperimentError> {
    let grid = u_num.grid();
    let l = grid.half_length();
    let [a, b] = window;
    if !(a <= b && a >= -l && b <= l) {
        return Err(ExperimentError::Parameter {
            name: "window",
            reason: format!("[{a}, {b}] is not a sub-interval of [{}, {l}]", -l),
        });
    }
    let values = synthesize(u_num)?;
    Ok(grid
        .points()
        .iter()
        .zip(&values)
        .filter(|(&x, _)| x >= a && x <= b)
        .map(|(&x, &v)| (v - u_ref(x)).abs())
        .fold(0.0, f64::max))
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Result<f64, ExperimentError> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(ExperimentError::Parameter { name: "data", reason: "need at least two paired points".into() });
    }
    if x.iter().chain(y).any(|v| !(*v > 0.0)) {
        return Err(ExperimentError::Parameter { name: "data", reason: "values must be positive".into() });
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(ExperimentError::Parameter { name: "data", reason: "abscissae coincide".into() });
    }
    Ok(sxy / sxx)
}
