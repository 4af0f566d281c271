//! Time integration of the Fourier-Galerkin system
//!
//! ```text
//! d/dt û(k) = −(λ/2) iκ (û∗û)(k) + i ε² κ|κ|^α û(k),   |k| ≤ N
//! ```
//!
//! by Crank-Nicolson with an inner fixed-point iteration that treats the
//! dispersive term exactly per mode, plus a classical RK4 integrator used as
//! an independent oracle.

mod cn;
mod params;
mod rk4;
mod run;

pub use cn::{cfl_max_dt, cn_step, nonlinear_flux, semi_discrete_rhs, CrankNicolson, StepDiagnostics};
pub use params::{ModelParams, ParamIssue, SolverConfig};
pub use rk4::{rk4_integrate, rk4_step, RK4_STABILITY_LIMIT};
pub use run::{run, run_field, RunError, Snapshot, Trajectory};

use thiserror::Error;

use crate::spectral::SpectralError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("invalid parameters: {}", format_issues(.0))]
    InvalidParameters(Vec<ParamIssue>),
    #[error("time step {dt:.6e} exceeds the {kind} limit {limit:.6e}")]
    StepSize {
        dt: f64,
        limit: f64,
        kind: &'static str,
    },
    #[error(
        "fixed-point iteration did not converge in {iterations} sweeps (last increment {:.3e})",
        residuals.last().copied().unwrap_or(f64::NAN)
    )]
    Divergence {
        iterations: usize,
        residuals: Vec<f64>,
    },
    #[error("non-finite state at t = {time}")]
    NonFinite { time: f64 },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

fn format_issues(issues: &[ParamIssue]) -> String {
    issues
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
