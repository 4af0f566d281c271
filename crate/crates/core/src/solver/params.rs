use std::fmt;

use serde::{Deserialize, Serialize};

use super::SolverError;

/// A single validation failure, naming the offending field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamIssue {
    pub field: String,
    pub message: String,
}

impl ParamIssue {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ParamIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Coefficients of `u_t + λ u u_x − ε² D^α u_x = 0` on `[−L, L)`.
///
/// `λ = 6` is the classical KdV normalization, `λ = 1` the one used for
/// the soliton and sine-datum examples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub alpha: f64,
    pub eps: f64,
    pub lambda: f64,
    pub half_length: f64,
}

impl ModelParams {
    pub fn new(alpha: f64, eps: f64, lambda: f64, half_length: f64) -> Result<Self, SolverError> {
        let p = Self {
            alpha,
            eps,
            lambda,
            half_length,
        };
        p.validate()?;
        Ok(p)
    }

    /// Every violated constraint. `λ = 0` is accepted: the linear flow is a
    /// useful exact test case.
    pub fn issues(&self) -> Vec<ParamIssue> {
        let mut out = Vec::new();
        if !(1.0..=2.0).contains(&self.alpha) {
            out.push(ParamIssue::new("alpha", format!("must lie in [1, 2], got {}", self.alpha)));
        }
        if !(self.eps.is_finite() && self.eps > 0.0) {
            out.push(ParamIssue::new("eps", format!("must be positive, got {}", self.eps)));
        }
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            out.push(ParamIssue::new(
                "lambda",
                format!("must be non-negative, got {}", self.lambda),
            ));
        }
        if !(self.half_length.is_finite() && self.half_length > 0.0) {
            out.push(ParamIssue::new(
                "half_length",
                format!("must be positive, got {}", self.half_length),
            ));
        }
        out
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let issues = self.issues();
        if issues.is_empty() {
            Ok(())
        } else {
            Err(SolverError::InvalidParameters(issues))
        }
    }

    /// Linear symbol `ε² κ|κ|^α`: mode `k` evolves as `i·dispersion(κ)·û`
    /// under the dispersive part alone.
    pub fn dispersion(&self, kappa: f64) -> f64 {
        self.eps * self.eps * kappa * crate::spectral::frac_laplacian_symbol(kappa, self.alpha)
    }
}

/// Discretization and inner-iteration controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub n_modes: usize,
    pub dt: f64,
    pub t_final: f64,
    /// Stop the fixed-point loop once `‖v^{ℓ+1} − v^ℓ‖ ≤ fp_tolerance·‖Uⁿ‖`.
    pub fp_tolerance: f64,
    pub fp_max_iters: usize,
    /// Contraction target `ζ ∈ (0, 1)` of the step-size condition.
    pub zeta: f64,
    /// Abort (instead of warn) when `Δt` exceeds [`super::cfl_max_dt`].
    pub enforce_cfl: bool,
}

impl SolverConfig {
    pub const DEFAULT_FP_TOLERANCE: f64 = 1e-12;
    pub const DEFAULT_FP_MAX_ITERS: usize = 100;
    pub const DEFAULT_ZETA: f64 = 0.5;

    pub fn new(n_modes: usize, dt: f64, t_final: f64) -> Self {
        Self {
            n_modes,
            dt,
            t_final,
            fp_tolerance: Self::DEFAULT_FP_TOLERANCE,
            fp_max_iters: Self::DEFAULT_FP_MAX_ITERS,
            zeta: Self::DEFAULT_ZETA,
            enforce_cfl: false,
        }
    }

    /// `η = (8 − ζ)/(1 − ζ)`.
    pub fn eta(&self) -> f64 {
        (8.0 - self.zeta) / (1.0 - self.zeta)
    }

    pub fn issues(&self) -> Vec<ParamIssue> {
        let mut out = Vec::new();
        if self.n_modes == 0 {
            out.push(ParamIssue::new("n_modes", "must be at least 1"));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            out.push(ParamIssue::new("dt", format!("must be positive, got {}", self.dt)));
        }
        if !(self.t_final.is_finite() && self.t_final >= 0.0) {
            out.push(ParamIssue::new(
                "t_final",
                format!("must be non-negative, got {}", self.t_final),
            ));
        }
        if !(self.fp_tolerance.is_finite() && self.fp_tolerance > 0.0) {
            out.push(ParamIssue::new(
                "fp_tolerance",
                format!("must be positive, got {}", self.fp_tolerance),
            ));
        }
        if self.fp_max_iters == 0 {
            out.push(ParamIssue::new("fp_max_iters", "must be at least 1"));
        }
        if !(self.zeta > 0.0 && self.zeta < 1.0) {
            out.push(ParamIssue::new("zeta", format!("must lie in (0, 1), got {}", self.zeta)));
        }
        out
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let issues = self.issues();
        if issues.is_empty() {
            Ok(())
        } else {
            Err(SolverError::InvalidParameters(issues))
        }
    }
}
