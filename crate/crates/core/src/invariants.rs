//! Mass, momentum and energy of a spectral field, and their normalized
//! time series over a trajectory.
//!
//! For `u_t + λ u u_x − ε² D^α u_x = 0` the conserved quantities are
//!
//! ```text
//! M = ∫ u dx,   P = ∫ u² dx,   H = ∫ ε² (D^{α/2} u)² − (λ/3) u³ dx .
//! ```
//!
//! `λ = 6` gives `ε²(D^{α/2}u)² − 2u³`, and `λ = 1, ε = 1` gives
//! `(D^{α/2}u)² − u³/3`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::solver::{ModelParams, Trajectory};
use crate::spectral::{frac_laplacian_symbol, to_physical, SpectralField};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InvariantsError {
    #[error("trajectory has no snapshots")]
    EmptyTrajectory,
}

/// `∫ u dx = 2L·Re û(0)`.
pub fn mass(u: &SpectralField) -> f64 {
    u.grid().period() * u.coeff(0).re
}

/// `∫ u² dx`, by Parseval.
pub fn momentum(u: &SpectralField) -> f64 {
    u.l2_norm().powi(2)
}

/// The two parts of the energy: `(∫ ε²(D^{α/2}u)², ∫ u³)`.
fn energy_parts(u: &SpectralField, p: &ModelParams) -> (f64, f64) {
    let grid = u.grid();
    let dispersive: f64 = grid
        .modes()
        .zip(u.coefficients())
        .map(|(k, c)| frac_laplacian_symbol(grid.wavenumber(k), p.alpha) * c.norm_sqr())
        .sum::<f64>()
        * grid.period()
        * p.eps
        * p.eps;
    // Trapezoid rule on > 3N points integrates the degree-3N cubic exactly.
    let phys = to_physical(u);
    let cubic = phys.iter().map(|v| v * v * v).sum::<f64>() * grid.spacing();
    (dispersive, cubic)
}

/// `H = ∫ ε²(D^{α/2}u)² − (λ/3)u³ dx`.
pub fn energy(u: &SpectralField, p: &ModelParams) -> f64 {
    let (dispersive, cubic) = energy_parts(u, p);
    dispersive - p.lambda / 3.0 * cubic
}

/// Whether a channel is divided by its initial value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Normalized,
    /// The initial value vanishes; the raw quantity is reported and the
    /// drift is absolute.
    Unnormalized,
}

/// Normalized invariants `I¹ = M/M₀`, `I² = ‖u‖/‖u₀‖`, `I³ = H/H₀`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub times: Vec<f64>,
    pub i1: Vec<f64>,
    pub i2: Vec<f64>,
    pub i3: Vec<f64>,
    pub channels: [Channel; 3],
    /// `max |Iⁱ − 1|`, or `max |Qⁱ − Qⁱ₀|` for unnormalized channels.
    pub max_drift: [f64; 3],
}

impl InvariantReport {
    pub fn series(&self, i: usize) -> &[f64] {
        match i {
            0 => &self.i1,
            1 => &self.i2,
            2 => &self.i3,
            _ => panic!("invariant index {i} out of range"),
        }
    }

    pub fn final_values(&self) -> [f64; 3] {
        [
            *self.i1.last().unwrap_or(&f64::NAN),
            *self.i2.last().unwrap_or(&f64::NAN),
            *self.i3.last().unwrap_or(&f64::NAN),
        ]
    }
}

const ZERO_RELATIVE: f64 = 1e-12;

fn normalize(raw: &[f64], zero_scale: f64) -> (Vec<f64>, Channel, f64) {
    let q0 = raw[0];
    if q0.abs() <= ZERO_RELATIVE * zero_scale || q0 == 0.0 {
        let drift = raw.iter().map(|q| (q - q0).abs()).fold(0.0, f64::max);
        (raw.to_vec(), Channel::Unnormalized, drift)
    } else {
        let series: Vec<f64> = raw.iter().map(|q| q / q0).collect();
        let drift = series.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
        (series, Channel::Normalized, drift)
    }
}

/// Invariant series over all snapshots, normalized by the first snapshot.
pub fn report(traj: &Trajectory, p: &ModelParams) -> Result<InvariantReport, InvariantsError> {
    report_fields(traj.snapshots.iter().map(|s| (s.time, &s.field)), p)
}

/// Same as [`report`] for an arbitrary sequence of `(time, field)` pairs.
pub fn report_fields<'a>(
    fields: impl IntoIterator<Item = (f64, &'a SpectralField)>,
    p: &ModelParams,
) -> Result<InvariantReport, InvariantsError> {
    let mut times = Vec::new();
    let mut masses = Vec::new();
    let mut norms = Vec::new();
    let mut energies = Vec::new();
    let mut scales = None;
    for (t, u) in fields {
        let (dispersive, cubic) = energy_parts(u, p);
        if scales.is_none() {
            let cubic_scale = p.lambda / 3.0 * cubic.abs();
            scales = Some((
                u.grid().period().sqrt() * u.l2_norm(),
                u.l2_norm(),
                dispersive.abs() + cubic_scale,
            ));
        }
        times.push(t);
        masses.push(mass(u));
        norms.push(u.l2_norm());
        energies.push(dispersive - p.lambda / 3.0 * cubic);
    }
    let (mass_scale, norm_scale, energy_scale) = scales.ok_or(InvariantsError::EmptyTrajectory)?;
    let (i1, c1, d1) = normalize(&masses, mass_scale);
    let (i2, c2, d2) = normalize(&norms, norm_scale);
    let (i3, c3, d3) = normalize(&energies, energy_scale);
    Ok(InvariantReport {
        times,
        i1,
        i2,
        i3,
        channels: [c1, c2, c3],
        max_drift: [d1, d2, d3],
    })
}
