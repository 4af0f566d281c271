use serde::{Deserialize, Serialize};

use super::{ModelParams, SolverConfig, SolverError};
use crate::spectral::{derivative_x, from_physical, sobolev_norm, to_physical, SobolevExponent, SpectralField};
use crate::Complex;

/// Galerkin flux `P_N(λ u u_x) = (λ/2) ∂_x P_N(u²)`, with `u²` formed on the
/// padded collocation grid so the truncated convolution is exact.
pub fn nonlinear_flux(u: &SpectralField, lambda: f64) -> SpectralField {
    if lambda == 0.0 {
        return SpectralField::zeros(*u.grid());
    }
    let phys = to_physical(u);
    let sq: Vec<f64> = phys.iter().map(|v| v * v).collect();
    let mut flux = derivative_x(&from_physical(&sq, u.grid()));
    for c in flux.coefficients_mut() {
        *c *= 0.5 * lambda;
    }
    flux
}

/// Right-hand side of the semi-discrete system,
/// `−P_N(λ u u_x) + ε² ∂_x D^α u`.
pub fn semi_discrete_rhs(u: &SpectralField, p: &ModelParams) -> SpectralField {
    let flux = nonlinear_flux(u, p.lambda);
    let grid = *u.grid();
    SpectralField::from_fn(grid, |k| {
        let kappa = grid.wavenumber(k);
        Complex::new(0.0, p.dispersion(kappa)) * u.coeff(k) - flux.coeff(k)
    })
}

/// `Δt_max = ζ / (λ N η ‖u‖_{1+α})`; infinite when `u = 0` or `λ = 0`.
pub fn cfl_max_dt(u: &SpectralField, p: &ModelParams, c: &SolverConfig) -> f64 {
    let norm = sobolev_norm(u, SobolevExponent::new(1.0 + p.alpha).unwrap_or(SobolevExponent::L2));
    let denom = p.lambda * c.n_modes as f64 * c.eta() * norm;
    if denom == 0.0 {
        f64::INFINITY
    } else {
        c.zeta / denom
    }
}

/// Convergence record of one Crank-Nicolson step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepDiagnostics {
    /// Time at the end of the step.
    pub time: f64,
    pub dt: f64,
    /// Number of fixed-point sweeps performed.
    pub iterations: usize,
    /// `‖v^{ℓ+1} − v^ℓ‖` (coefficient `ℓ²`) for every sweep.
    pub increments: Vec<f64>,
    /// Physical `L²` norm of the new state.
    pub l2_norm: f64,
}

impl StepDiagnostics {
    /// Increment of the final sweep.
    pub fn residual(&self) -> f64 {
        self.increments.last().copied().unwrap_or(0.0)
    }

    /// `‖δ(v^ℓ)‖ / ‖δ(v^{ℓ−1})‖` for `ℓ ≥ 1`.
    pub fn contraction_ratios(&self) -> Vec<f64> {
        self.increments
            .windows(2)
            .filter(|w| w[0] > 0.0)
            .map(|w| w[1] / w[0])
            .collect()
    }

    pub fn max_contraction(&self) -> Option<f64> {
        self.contraction_ratios().into_iter().reduce(f64::max)
    }
}

/// Crank-Nicolson stepper for a fixed model.
///
/// Each sweep freezes the flux at the midpoint `(Uⁿ + v^ℓ)/2` and solves
/// the remaining diagonal system exactly,
///
/// ```text
/// (1 − iΔt d(κ)/2) v̂^{ℓ+1} = (1 + iΔt d(κ)/2) ûⁿ − Δt F̂^ℓ,   d(κ) = ε²κ|κ|^α,
/// ```
///
/// starting from `v⁰ = Uⁿ`.
#[derive(Debug, Clone, Copy)]
pub struct CrankNicolson {
    pub params: ModelParams,
    pub tolerance: f64,
    pub max_iters: usize,
}

impl CrankNicolson {
    pub fn new(params: ModelParams, config: &SolverConfig) -> Self {
        Self {
            params,
            tolerance: config.fp_tolerance,
            max_iters: config.fp_max_iters,
        }
    }

    /// One step of size `dt` (negative `dt` steps backwards).
    pub fn step(
        &self,
        un: &SpectralField,
        dt: f64,
    ) -> Result<(SpectralField, StepDiagnostics), SolverError> {
        let grid = *un.grid();
        let n = grid.n_coefficients();
        let mut explicit = Vec::with_capacity(n);
        let mut implicit = Vec::with_capacity(n);
        for (k, c) in grid.modes().zip(un.coefficients()) {
            let z = Complex::new(0.0, 0.5 * dt * self.params.dispersion(grid.wavenumber(k)));
            explicit.push((1.0 + z) * c);
            implicit.push(1.0 / (1.0 - z));
        }

        let threshold = self.tolerance * un.coefficient_norm();
        let mut v = un.clone();
        let mut increments = Vec::new();
        loop {
            let mid = &(un + &v) * 0.5;
            let flux = nonlinear_flux(&mid, self.params.lambda);
            let mut delta = 0.0;
            for (i, (vk, fk)) in v
                .coefficients_mut()
                .iter_mut()
                .zip(flux.coefficients())
                .enumerate()
            {
                let next = implicit[i] * (explicit[i] - fk * dt);
                delta += (next - *vk).norm_sqr();
                *vk = next;
            }
            let delta = delta.sqrt();
            if !delta.is_finite() {
                return Err(SolverError::Divergence {
                    iterations: increments.len() + 1,
                    residuals: {
                        increments.push(delta);
                        increments
                    },
                });
            }
            increments.push(delta);
            if delta <= threshold {
                break;
            }
            if increments.len() >= self.max_iters {
                return Err(SolverError::Divergence {
                    iterations: increments.len(),
                    residuals: increments,
                });
            }
        }
        v.symmetrize();
        let diag = StepDiagnostics {
            time: f64::NAN,
            dt,
            iterations: increments.len(),
            increments,
            l2_norm: v.l2_norm(),
        };
        Ok((v, diag))
    }
}

/// One Crank-Nicolson step of size `c.dt` from `u_n`.
///
/// With `c.enforce_cfl` a step larger than [`cfl_max_dt`] is refused;
/// otherwise it is logged and taken.
pub fn cn_step(
    u_n: &SpectralField,
    p: &ModelParams,
    c: &SolverConfig,
) -> Result<(SpectralField, StepDiagnostics), SolverError> {
    p.validate()?;
    c.validate()?;
    let limit = cfl_max_dt(u_n, p, c);
    if c.dt > limit {
        if c.enforce_cfl {
            return Err(SolverError::StepSize {
                dt: c.dt,
                limit,
                kind: "CFL",
            });
        }
        log::warn!("dt = {:.3e} exceeds the CFL bound {:.3e}", c.dt, limit);
    }
    let (u, mut diag) = CrankNicolson::new(*p, c).step(u_n, c.dt)?;
    diag.time = c.dt;
    Ok((u, diag))
}
