use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{rate, ExperimentError};
use crate::invariants;
use crate::reference::{kdv_one_soliton, BoSoliton};
use crate::solver::{run_field, ModelParams, SolverConfig};
use crate::spectral::{project, PeriodicGrid, SpectralField};

/// The three standard convergence problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Setup {
    /// α = 1.999 against the exact KdV soliton, `L = 15`, `T = 2`.
    KdvSoliton,
    /// α = 1.01 against the periodic Benjamin-Ono wave (`c = 0.25`), `L = 15`, `T = 20`.
    BoSoliton,
    /// α = 1.5, `u₀ = 0.5 sin x` on `[−π, π)`, `T = 2`, against a finer run.
    FracSine,
}

const BO_SPEED: f64 = 0.25;

impl Setup {
    pub const ALL: [Setup; 3] = [Setup::KdvSoliton, Setup::BoSoliton, Setup::FracSine];

    pub fn name(self) -> &'static str {
        match self {
            Setup::KdvSoliton => "kdv-soliton",
            Setup::BoSoliton => "bo-soliton",
            Setup::FracSine => "frac-sine",
        }
    }

    pub fn params(self) -> ModelParams {
        let (alpha, l) = match self {
            Setup::KdvSoliton => (1.999, 15.0),
            Setup::BoSoliton => (1.01, 15.0),
            Setup::FracSine => (1.5, std::f64::consts::PI),
        };
        ModelParams { alpha, eps: 1.0, lambda: 1.0, half_length: l }
    }

    pub fn t_final(self) -> f64 {
        match self {
            Setup::BoSoliton => 20.0,
            _ => 2.0,
        }
    }

    fn bo_wave(self) -> BoSoliton {
        BoSoliton::new(BO_SPEED, self.params().half_length).expect("c·L > π")
    }

    pub fn initial(self, x: f64) -> f64 {
        self.exact(x, 0.0).unwrap_or_else(|| 0.5 * x.sin())
    }

    /// Closed-form solution, when the setup has one.
    pub fn exact(self, x: f64, t: f64) -> Option<f64> {
        match self {
            Setup::KdvSoliton => Some(kdv_one_soliton(x, t)),
            Setup::BoSoliton => Some(self.bo_wave().eval(x, t)),
            Setup::FracSine => None,
        }
    }

    pub fn project_initial(self, n_modes: usize) -> Result<SpectralField, ExperimentError> {
        let grid = PeriodicGrid::new(n_modes, self.params().half_length)?;
        Ok(project(|x| self.initial(x), &grid))
    }

    /// `Δt = 1/(N ‖u₀‖_∞)`, with the sup taken over the collocation points.
    pub fn time_step(self, n_modes: usize) -> Result<f64, ExperimentError> {
        let grid = PeriodicGrid::new(n_modes, self.params().half_length)?;
        let sup = grid.points().iter().map(|&x| self.initial(x).abs()).fold(0.0, f64::max);
        Ok(1.0 / (n_modes as f64 * sup))
    }
}

impl fmt::Display for Setup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Setup {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Setup::ALL.into_iter().find(|v| v.name() == s).ok_or_else(|| {
            let names: Vec<_> = Setup::ALL.iter().map(|v| v.name()).collect();
            format!("unknown setup `{s}` (expected one of {})", names.join(", "))
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StudyOptions {
    /// Modes of the self-reference run; defaults to 8× the largest requested `N`.
    pub reference_modes: Option<usize>,
    /// Overrides the setup's final time.
    pub t_final: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n_modes: usize,
    pub dt: f64,
    /// L² distance to the reference at the final time.
    pub error: Option<f64>,
    /// Order against the previous row.
    pub rate: Option<f64>,
    /// Final normalized invariants `I¹, I², I³`.
    pub invariants: Option<[f64; 3]>,
    pub failure: Option<String>,
}

/// Runs `setup` at each `N` in `n_list` (sorted ascending) and fills error,
/// rate and final invariants. A failed run is reported in its row.
pub fn convergence_study(
    setup: Setup,
    n_list: &[usize],
    options: &StudyOptions,
) -> Result<Vec<ConvergenceRow>, ExperimentError> {
    if n_list.is_empty() {
        return Err(ExperimentError::Parameter { name: "n_list", reason: "no mode counts given".into() });
    }
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let p = setup.params();
    let t_final = options.t_final.unwrap_or(setup.t_final());
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(ExperimentError::Parameter { name: "t_final", reason: format!("got {t_final}") });
    }
    let reference_modes = match setup {
        Setup::FracSine => {
            let largest = *ns.last().expect("non-empty");
            let r = options.reference_modes.unwrap_or(8 * largest);
            if r <= largest {
                return Err(ExperimentError::Parameter {
                    name: "reference_modes",
                    reason: format!("{r} must exceed the largest N = {largest}"),
                });
            }
            Some(r)
        }
        _ => None,
    };

    let solve = |n: usize| -> Result<(f64, SpectralField, [f64; 3]), String> {
        let dt = setup.time_step(n).map_err(|e| e.to_string())?;
        let u0 = setup.project_initial(n).map_err(|e| e.to_string())?;
        let cfg = SolverConfig::new(n, dt, t_final);
        let traj = run_field(u0, &p, &cfg, &[]).map_err(|e| e.to_string())?;
        let rep = invariants::report(&traj, &p).map_err(|e| e.to_string())?;
        Ok((dt, traj.last().field.clone(), rep.final_values()))
    };

    let mut jobs: Vec<usize> = ns.clone();
    jobs.extend(reference_modes);
    let mut results: Vec<_> = jobs.par_iter().map(|&n| solve(n)).collect();

    let reference = match reference_modes {
        Some(r) => Some(results.pop().expect("reference job").map_err(|e| ExperimentError::Parameter {
            name: "reference",
            reason: format!("reference run at N = {r} failed: {e}"),
        })?),
        None => None,
    };

    let mut rows = Vec::with_capacity(ns.len());
    for (&n, res) in ns.iter().zip(results) {
        let row = match res {
            Ok((dt, u, inv)) => {
                let err = match &reference {
                    Some((_, r, _)) => u.l2_distance(r)?,
                    None => {
                        let exact = project(|x| setup.exact(x, t_final).expect("closed form"), u.grid());
                        u.l2_distance(&exact)?
                    }
                };
                ConvergenceRow { n_modes: n, dt, error: Some(err), rate: None, invariants: Some(inv), failure: None }
            }
            Err(msg) => ConvergenceRow {
                n_modes: n,
                dt: setup.time_step(n).unwrap_or(f64::NAN),
                error: None,
                rate: None,
                invariants: None,
                failure: Some(msg),
            },
        };
        rows.push(row);
    }
    for i in 1..rows.len() {
        if let (Some(e1), Some(e2)) = (rows[i - 1].error, rows[i].error) {
            rows[i].rate = rate(e1, e2, rows[i - 1].n_modes, rows[i].n_modes).ok();
        }
    }
    Ok(rows)
}
