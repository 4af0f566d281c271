use std::cell::RefCell;
use std::sync::Arc;

use rustfft::{Fft, FftDirection, FftPlanner};

use super::{PeriodicGrid, SpectralError, SpectralField, HERMITIAN_TOLERANCE};
use crate::Complex;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft(len, direction))
}

/// `(−1)^k`: the phase of `e^{−iκ(k)x₀}` at the left endpoint `x₀ = −L`.
fn endpoint_sign(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Discrete Fourier coefficients of uniform samples on `[−L, L)`, truncated
/// to `|k| ≤ n_modes` (the projection `P_N` of the trigonometric
/// interpolant). Any sample count `≥ 2·n_modes + 1` is accepted.
pub fn analyze_samples(
    samples: &[f64],
    half_length: f64,
    n_modes: usize,
) -> Result<SpectralField, SpectralError> {
    let m = samples.len();
    let grid = PeriodicGrid::with_points(n_modes, half_length, m)?;
    Ok(analyze_on(samples, grid))
}

/// Forward transform of samples taken at `grid.points()`.
pub fn analyze(samples: &[f64], grid: &PeriodicGrid) -> Result<SpectralField, SpectralError> {
    if samples.len() != grid.n_points() {
        return Err(SpectralError::Dimension {
            expected: grid.n_points(),
            got: samples.len(),
        });
    }
    Ok(analyze_on(samples, *grid))
}

fn analyze_on(samples: &[f64], grid: PeriodicGrid) -> SpectralField {
    let m = samples.len();
    let mut buf: Vec<Complex> = samples.iter().map(|&s| Complex::new(s, 0.0)).collect();
    plan(m, FftDirection::Forward).process(&mut buf);
    let scale = 1.0 / m as f64;
    let mut field = SpectralField::from_fn(grid, |k| {
        buf[k.rem_euclid(m as i64) as usize] * (endpoint_sign(k) * scale)
    });
    field.symmetrize();
    field
}

/// `P_N f` for a function evaluated at the collocation points of `grid`.
pub fn project(f: impl Fn(f64) -> f64, grid: &PeriodicGrid) -> SpectralField {
    let samples: Vec<f64> = grid.points().into_iter().map(f).collect();
    analyze_on(&samples, *grid)
}

/// Samples of the real field at `grid.points()`.
pub fn synthesize(field: &SpectralField) -> Result<Vec<f64>, SpectralError> {
    let defect = field.hermitian_defect();
    if defect > HERMITIAN_TOLERANCE {
        return Err(SpectralError::Symmetry { defect });
    }
    Ok(to_physical(field))
}

pub(crate) fn to_physical(field: &SpectralField) -> Vec<f64> {
    let grid = field.grid();
    let m = grid.n_points();
    let mut buf = vec![Complex::new(0.0, 0.0); m];
    for (k, c) in grid.modes().zip(field.coefficients()) {
        buf[k.rem_euclid(m as i64) as usize] = c * endpoint_sign(k);
    }
    plan(m, FftDirection::Inverse).process(&mut buf);
    buf.into_iter().map(|c| c.re).collect()
}

/// Inverse of [`to_physical`] for samples on `grid` (no length check).
pub(crate) fn from_physical(samples: &[f64], grid: &PeriodicGrid) -> SpectralField {
    debug_assert_eq!(samples.len(), grid.n_points());
    analyze_on(samples, *grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid(n: usize) -> PeriodicGrid {
        PeriodicGrid::new(n, PI).unwrap()
    }

    #[test]
    fn cosine_has_half_weights() {
        let g = grid(8);
        let s: Vec<f64> = g.points().iter().map(|x| x.cos()).collect();
        let f = analyze(&s, &g).unwrap();
        for k in g.modes() {
            let expect = if k.abs() == 1 { 0.5 } else { 0.0 };
            assert!((f.coeff(k) - Complex::new(expect, 0.0)).norm() <= 1e-12, "k={k}");
        }
    }

    #[test]
    fn constant_maps_to_mean_mode() {
        let g = grid(5);
        let f = analyze(&vec![1.0; g.n_points()], &g).unwrap();
        assert!((f.coeff(0) - Complex::new(1.0, 0.0)).norm() < 1e-15);
        assert!(f.coefficients().iter().enumerate().all(|(i, c)| i == 5 || c.norm() < 1e-15));
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let g = grid(4);
        let err = analyze(&[0.0; 3], &g).unwrap_err();
        assert!(matches!(err, SpectralError::Dimension { .. }));
    }

    #[test]
    fn synthesize_constant_and_cosine() {
        let g = grid(6);
        let mut f = SpectralField::zeros(g);
        f.set(0, Complex::new(2.5, 0.0));
        assert!(synthesize(&f).unwrap().iter().all(|v| (v - 2.5).abs() < 1e-15));
        let mut f = SpectralField::zeros(g);
        f.set_pair(1, Complex::new(0.5, 0.0));
        let s = synthesize(&f).unwrap();
        for (x, v) in g.points().iter().zip(s) {
            assert!((v - x.cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn broken_symmetry_is_rejected() {
        let mut f = SpectralField::zeros(grid(4));
        f.set(2, Complex::new(1.0, 0.0));
        assert!(matches!(synthesize(&f), Err(SpectralError::Symmetry { .. })));
    }

    #[test]
    fn odd_half_length_round_trip() {
        let g = PeriodicGrid::new(12, 15.0).unwrap();
        let s: Vec<f64> = g
            .points()
            .iter()
            .map(|x| (2.0 * PI * x / 30.0).sin() + 0.3 * (6.0 * PI * x / 30.0).cos())
            .collect();
        let f = analyze(&s, &g).unwrap();
        assert!((f.coeff(1) - Complex::new(0.0, -0.5)).norm() < 1e-13);
        assert!((f.coeff(3) - Complex::new(0.15, 0.0)).norm() < 1e-13);
        let back = synthesize(&f).unwrap();
        for (a, b) in s.iter().zip(back) {
            assert!((a - b).abs() < 1e-13);
        }
    }
}
