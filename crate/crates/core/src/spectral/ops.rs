use serde::{Deserialize, Serialize};

use super::transform::{from_physical, to_physical};
use super::{analyze_samples, SpectralError, SpectralField};
use crate::Complex;

/// Exponent `r ≥ 0` of the periodic Sobolev norm `‖·‖_r`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct SobolevExponent(f64);

impl SobolevExponent {
    pub fn new(r: f64) -> Result<Self, SpectralError> {
        if r.is_finite() && r >= 0.0 {
            Ok(Self(r))
        } else {
            Err(SpectralError::Parameter {
                name: "r",
                reason: format!("Sobolev exponent must be finite and non-negative, got {r}"),
            })
        }
    }

    pub const L2: Self = Self(0.0);

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `|κ|^α` with the convention `0^0 = 1`.
pub fn frac_laplacian_symbol(kappa: f64, alpha: f64) -> f64 {
    if alpha == 0.0 {
        1.0
    } else {
        kappa.abs().powf(alpha)
    }
}

/// Fractional Laplacian `D^α`: multiplies mode `k` by `|κ(k)|^α`.
pub fn frac_laplacian(field: &SpectralField, alpha: f64) -> Result<SpectralField, SpectralError> {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(SpectralError::Parameter {
            name: "alpha",
            reason: format!("must be finite and non-negative, got {alpha}"),
        });
    }
    Ok(field.map_modes(|_, kappa| Complex::new(frac_laplacian_symbol(kappa, alpha), 0.0)))
}

/// Spatial derivative: multiplies mode `k` by `iκ(k)`.
pub fn derivative_x(field: &SpectralField) -> SpectralField {
    field.map_modes(|_, kappa| Complex::new(0.0, kappa))
}

/// `‖f‖_r = (Σ (1+κ²)^r |f̂(k)|²)^{1/2}` (no `2L` factor; `r = 0` is the
/// coefficient `ℓ²` norm).
pub fn sobolev_norm(field: &SpectralField, r: SobolevExponent) -> f64 {
    let grid = field.grid();
    grid.modes()
        .zip(field.coefficients())
        .map(|(k, c)| {
            let kappa = grid.wavenumber(k);
            (1.0 + kappa * kappa).powf(r.0) * c.norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
}

/// Largest mode kept by the 2/3 rule, `⌊2N/3⌋`.
pub fn dealias_cutoff(n_modes: usize) -> usize {
    2 * n_modes / 3
}

/// 2/3-rule filter: zeroes every mode with `|k| > ⌊2N/3⌋`.
pub fn dealias(field: &SpectralField) -> SpectralField {
    let cut = dealias_cutoff(field.n_modes()) as i64;
    field.map_modes(|k, _| {
        if k.abs() > cut {
            Complex::new(0.0, 0.0)
        } else {
            Complex::new(1.0, 0.0)
        }
    })
}

/// Truncated product `P_N(uv)` evaluated by pointwise multiplication on the
/// collocation grid.
///
/// The result is the exact Galerkin projection of the product whenever the
/// grid carries more than `3N` points (true for [`super::PeriodicGrid::new`]);
/// on coarser grids the high modes of `uv` alias back into the band.
pub fn product(u: &SpectralField, v: &SpectralField) -> Result<SpectralField, SpectralError> {
    if u.grid() != v.grid() {
        return Err(SpectralError::GridMismatch);
    }
    let a = to_physical(u);
    let b = to_physical(v);
    let prod: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
    Ok(from_physical(&prod, u.grid()))
}

/// `‖f − P_N f‖` measured in `(2L)^{1/2}·‖·‖_r`, for uniform samples of `f`
/// on `[−L, L)`; `r = 0` gives the physical `L²` error.
pub fn projection_error(
    samples: &[f64],
    half_length: f64,
    n_small: usize,
    r: SobolevExponent,
) -> Result<f64, SpectralError> {
    let resolved = (samples.len().saturating_sub(1)) / 2;
    if n_small >= resolved {
        return Err(SpectralError::Parameter {
            name: "n_small",
            reason: format!("{n_small} must be below the sample resolution {resolved}"),
        });
    }
    let full = analyze_samples(samples, half_length, resolved)?;
    let grid = full.grid();
    let tail: f64 = grid
        .modes()
        .zip(full.coefficients())
        .filter(|(k, _)| k.unsigned_abs() as usize > n_small)
        .map(|(k, c)| {
            let kappa = grid.wavenumber(k);
            (1.0 + kappa * kappa).powf(r.0) * c.norm_sqr()
        })
        .sum();
    Ok((grid.period() * tail).sqrt())
}
