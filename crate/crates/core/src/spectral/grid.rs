use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::SpectralError;

/// Uniform collocation grid on `[−L, L)` carrying the modes `k = −N..=N`.
///
/// Mode `k` has physical wavenumber `κ(k) = kπ/L`, so `L = π` recovers the
/// integer wavenumbers of the `2π`-periodic setting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodicGrid {
    n_modes: usize,
    half_length: f64,
    n_points: usize,
}

impl PeriodicGrid {
    /// Grid with `n_points = 2(2N+1)` rounded up to a 5-smooth FFT size.
    ///
    /// `4N+2 > 3N` points make quadratic products alias-free after
    /// truncation and cubic integrands exactly integrable.
    pub fn new(n_modes: usize, half_length: f64) -> Result<Self, SpectralError> {
        Self::with_points(n_modes, half_length, fast_len(2 * (2 * n_modes + 1)))
    }

    /// Grid with an explicit number of collocation points (`≥ 2N+1`).
    pub fn with_points(
        n_modes: usize,
        half_length: f64,
        n_points: usize,
    ) -> Result<Self, SpectralError> {
        if n_modes == 0 {
            return Err(SpectralError::Parameter {
                name: "n_modes",
                reason: "must be at least 1".into(),
            });
        }
        if !(half_length.is_finite() && half_length > 0.0) {
            return Err(SpectralError::Parameter {
                name: "half_length",
                reason: format!("must be positive and finite, got {half_length}"),
            });
        }
        if n_points < 2 * n_modes + 1 {
            return Err(SpectralError::Parameter {
                name: "n_points",
                reason: format!("{n_points} < 2N+1 = {}", 2 * n_modes + 1),
            });
        }
        Ok(Self {
            n_modes,
            half_length,
            n_points,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Number of stored coefficients, `2N+1`.
    pub fn n_coefficients(&self) -> usize {
        2 * self.n_modes + 1
    }

    /// Period `2L`.
    pub fn period(&self) -> f64 {
        2.0 * self.half_length
    }

    pub fn spacing(&self) -> f64 {
        self.period() / self.n_points as f64
    }

    /// `κ(k) = kπ/L`.
    pub fn wavenumber(&self, k: i64) -> f64 {
        k as f64 * PI / self.half_length
    }

    /// Largest retained wavenumber `Nπ/L`.
    pub fn max_wavenumber(&self) -> f64 {
        self.wavenumber(self.n_modes as i64)
    }

    /// Mode numbers `−N..=N` in storage order.
    pub fn modes(&self) -> impl Iterator<Item = i64> {
        let n = self.n_modes as i64;
        -n..=n
    }

    /// Collocation points `x_j = −L + j·2L/M`.
    pub fn points(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.n_points)
            .map(|j| -self.half_length + j as f64 * h)
            .collect()
    }

    /// Same domain with a different truncation, default padding.
    pub fn with_modes(&self, n_modes: usize) -> Result<Self, SpectralError> {
        Self::new(n_modes, self.half_length)
    }

    pub(crate) fn same_space(&self, other: &Self) -> bool {
        self.n_modes == other.n_modes && self.half_length == other.half_length
    }
}

/// Smallest integer `≥ n` whose only prime factors are 2, 3 and 5.
pub(crate) fn fast_len(n: usize) -> usize {
    let mut m = n.max(1);
    loop {
        let mut r = m;
        for p in [2, 3, 5] {
            while r.is_multiple_of(p) {
                r /= p;
            }
        }
        if r == 1 {
            return m;
        }
        m += 1;
    }
}
