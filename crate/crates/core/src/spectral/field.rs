use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use super::{PeriodicGrid, SpectralError};
use crate::Complex;

/// Truncated Fourier series `u(x) = Σ_{|k|≤N} û(k) e^{iκ(k)x}` of a real
/// periodic function.
///
/// Coefficients are stored for `k = −N..=N` at index `k + N`. Real fields
/// satisfy `û(−k) = conj(û(k))`; [`SpectralField::symmetrize`] projects onto
/// that subspace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralField {
    grid: PeriodicGrid,
    coeffs: Vec<Complex>,
}

impl SpectralField {
    pub fn zeros(grid: PeriodicGrid) -> Self {
        Self {
            grid,
            coeffs: vec![Complex::new(0.0, 0.0); grid.n_coefficients()],
        }
    }

    pub fn from_coefficients(
        grid: PeriodicGrid,
        coeffs: Vec<Complex>,
    ) -> Result<Self, SpectralError> {
        if coeffs.len() != grid.n_coefficients() {
            return Err(SpectralError::Dimension {
                expected: grid.n_coefficients(),
                got: coeffs.len(),
            });
        }
        Ok(Self { grid, coeffs })
    }

    /// Builds a field from a closure `k ↦ û(k)`.
    pub fn from_fn(grid: PeriodicGrid, mut f: impl FnMut(i64) -> Complex) -> Self {
        let coeffs = grid.modes().map(&mut f).collect();
        Self { grid, coeffs }
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn n_modes(&self) -> usize {
        self.grid.n_modes()
    }

    pub fn coefficients(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn coefficients_mut(&mut self) -> &mut [Complex] {
        &mut self.coeffs
    }

    pub fn into_coefficients(self) -> Vec<Complex> {
        self.coeffs
    }

    fn index(&self, k: i64) -> Option<usize> {
        let n = self.grid.n_modes() as i64;
        (-n..=n).contains(&k).then(|| (k + n) as usize)
    }

    /// `û(k)`, zero outside the retained band.
    pub fn coeff(&self, k: i64) -> Complex {
        self.index(k)
            .map(|i| self.coeffs[i])
            .unwrap_or_else(|| Complex::new(0.0, 0.0))
    }

    /// Sets `û(k)`; modes outside the band are ignored.
    pub fn set(&mut self, k: i64, value: Complex) {
        if let Some(i) = self.index(k) {
            self.coeffs[i] = value;
        }
    }

    /// Sets the Hermitian pair `û(k) = c`, `û(−k) = conj(c)`.
    pub fn set_pair(&mut self, k: i64, value: Complex) {
        self.set(k, value);
        self.set(-k, value.conj());
        if k == 0 {
            self.set(0, Complex::new(value.re, 0.0));
        }
    }

    /// Applies a diagonal multiplier `û(k) ↦ m(k, κ(k)) û(k)`.
    pub fn map_modes(&self, mut m: impl FnMut(i64, f64) -> Complex) -> Self {
        let grid = self.grid;
        let coeffs = grid
            .modes()
            .zip(&self.coeffs)
            .map(|(k, c)| m(k, grid.wavenumber(k)) * c)
            .collect();
        Self { grid, coeffs }
    }

    /// `max_k |û(−k) − conj(û(k))|` relative to `max_k |û(k)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.grid.n_modes();
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let worst = (0..=n)
            .map(|k| (self.coeffs[n - k] - self.coeffs[n + k].conj()).norm())
            .fold(0.0, f64::max);
        worst / scale
    }

    /// Projects onto real fields: `û(k) ← (û(k) + conj(û(−k)))/2`.
    pub fn symmetrize(&mut self) {
        let n = self.grid.n_modes();
        self.coeffs[n].im = 0.0;
        for k in 1..=n {
            let avg = (self.coeffs[n + k] + self.coeffs[n - k].conj()) * 0.5;
            self.coeffs[n + k] = avg;
            self.coeffs[n - k] = avg.conj();
        }
    }

    /// Coefficient-space `ℓ²` norm `(Σ|û(k)|²)^{1/2}`.
    pub fn coefficient_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Physical `L²(−L, L)` norm; Parseval gives `(2L)^{1/2}` times the
    /// coefficient norm.
    pub fn l2_norm(&self) -> f64 {
        self.grid.period().sqrt() * self.coefficient_norm()
    }

    /// Physical inner product `(u, v) = ∫ u v̄ dx = 2L Σ û(k) conj(v̂(k))`.
    pub fn inner(&self, other: &Self) -> Result<Complex, SpectralError> {
        if !self.grid.same_space(&other.grid) {
            return Err(SpectralError::GridMismatch);
        }
        let s: Complex = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b.conj())
            .sum();
        Ok(s * self.grid.period())
    }

    /// Physical `L²` distance; fields of different truncation are compared
    /// by zero-padding the coarser one.
    pub fn l2_distance(&self, other: &Self) -> Result<f64, SpectralError> {
        if self.grid.half_length() != other.grid.half_length() {
            return Err(SpectralError::GridMismatch);
        }
        let n = self.n_modes().max(other.n_modes()) as i64;
        let sum: f64 = (-n..=n)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm_sqr())
            .sum();
        Ok((self.grid.period() * sum).sqrt())
    }

    /// Same coefficients on a grid with `n_modes` modes (truncating or
    /// zero-padding).
    pub fn resized(&self, n_modes: usize) -> Result<Self, SpectralError> {
        let grid = self.grid.with_modes(n_modes)?;
        Ok(Self::from_fn(grid, |k| self.coeff(k)))
    }

    /// Point evaluation of the trigonometric polynomial (real part).
    pub fn evaluate(&self, x: f64) -> f64 {
        let n = self.grid.n_modes() as i64;
        let mut acc = self.coeff(0).re;
        for k in 1..=n {
            let kx = self.grid.wavenumber(k) * x;
            let e = Complex::new(kx.cos(), kx.sin());
            acc += 2.0 * (self.coeff(k) * e).re;
        }
        acc
    }

    /// Maximum coefficient modulus difference, used for exact comparisons.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let n = self.n_modes().max(other.n_modes()) as i64;
        (-n..=n)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }

    pub(crate) fn zip_with(&self, other: &Self, f: impl Fn(Complex, Complex) -> Complex) -> Self {
        assert!(
            self.grid.same_space(&other.grid),
            "combining fields on different grids"
        );
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self {
            grid: self.grid,
            coeffs,
        }
    }
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: Self) -> SpectralField {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: Self) -> SpectralField {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: f64) -> SpectralField {
        SpectralField {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|c| c * rhs).collect(),
        }
    }
}
