use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{cfl_max_dt, CrankNicolson, ModelParams, ParamIssue, SolverConfig, SolverError, StepDiagnostics};
use crate::spectral::{analyze_samples, PeriodicGrid, SpectralField};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub time: f64,
    pub field: SpectralField,
}

/// Recorded states of a run together with per-step diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub snapshots: Vec<Snapshot>,
    pub steps: Vec<StepDiagnostics>,
}

impl Trajectory {
    pub fn initial(&self) -> &Snapshot {
        &self.snapshots[0]
    }

    pub fn last(&self) -> &Snapshot {
        self.snapshots.last().expect("trajectory always holds the initial state")
    }

    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.time).collect()
    }
}

/// A failed run: the error and everything computed before it.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("run aborted at t = {time}: {source}")]
pub struct RunError {
    pub time: f64,
    #[source]
    pub source: SolverError,
    pub partial: Box<Trajectory>,
}

impl RunError {
    fn before_start(source: SolverError) -> Self {
        Self {
            time: 0.0,
            source,
            partial: Box::new(Trajectory {
                snapshots: Vec::new(),
                steps: Vec::new(),
            }),
        }
    }
}

/// Step sizes from 0 to `t_final`: full steps of `dt` and a final step
/// shortened to land on `t_final` exactly.
pub(crate) fn step_sizes(dt: f64, t_final: f64) -> Vec<f64> {
    if t_final <= 0.0 {
        return Vec::new();
    }
    let n = ((t_final / dt) - 1e-9).ceil().max(1.0) as usize;
    let mut out = vec![dt; n];
    out[n - 1] = t_final - (n - 1) as f64 * dt;
    out
}

/// Integrates `P_N u₀` (from uniform samples of `u₀` on `[−L, L)`) to
/// `c.t_final`.
pub fn run(
    u0_samples: &[f64],
    p: &ModelParams,
    c: &SolverConfig,
    snapshot_times: &[f64],
) -> Result<Trajectory, RunError> {
    p.validate().map_err(RunError::before_start)?;
    c.validate().map_err(RunError::before_start)?;
    let u0 = analyze_samples(u0_samples, p.half_length, c.n_modes)
        .map_err(|e| RunError::before_start(e.into()))?;
    let grid = PeriodicGrid::new(c.n_modes, p.half_length)
        .map_err(|e| RunError::before_start(e.into()))?;
    let u0 = SpectralField::from_fn(grid, |k| u0.coeff(k));
    run_field(u0, p, c, snapshot_times)
}

/// Integrates from an already projected initial field.
///
/// Snapshots are recorded at `t = 0`, at `t_final`, and at the completed
/// step nearest to each requested time.
pub fn run_field(
    u0: SpectralField,
    p: &ModelParams,
    c: &SolverConfig,
    snapshot_times: &[f64],
) -> Result<Trajectory, RunError> {
    p.validate().map_err(RunError::before_start)?;
    c.validate().map_err(RunError::before_start)?;
    let mut issues = Vec::new();
    if u0.n_modes() != c.n_modes {
        issues.push(ParamIssue::new(
            "n_modes",
            format!("initial field has {} modes, config {}", u0.n_modes(), c.n_modes),
        ));
    }
    if u0.grid().half_length() != p.half_length {
        issues.push(ParamIssue::new("half_length", "initial field lives on another domain"));
    }
    if let Some(t) = snapshot_times
        .iter()
        .find(|&&t| !(t.is_finite() && (0.0..=c.t_final).contains(&t)))
    {
        issues.push(ParamIssue::new(
            "snapshot_times",
            format!("{t} lies outside [0, {}]", c.t_final),
        ));
    }
    if !issues.is_empty() {
        return Err(RunError::before_start(SolverError::InvalidParameters(issues)));
    }

    let steps = step_sizes(c.dt, c.t_final);
    let n_steps = steps.len();
    let mut record = vec![false; n_steps + 1];
    record[0] = true;
    record[n_steps] = true;
    for &t in snapshot_times {
        let idx = ((t / c.dt).round() as usize).min(n_steps);
        record[idx] = true;
    }

    let mut u = u0;
    u.symmetrize();
    let stepper = CrankNicolson::new(*p, c);
    let mut traj = Trajectory {
        snapshots: vec![Snapshot {
            time: 0.0,
            field: u.clone(),
        }],
        steps: Vec::with_capacity(n_steps),
    };
    let mut warned = false;
    let mut time = 0.0;
    for (n, &h) in steps.iter().enumerate() {
        let limit = cfl_max_dt(&u, p, c);
        if h > limit {
            if c.enforce_cfl {
                return Err(abort(traj, u, time, SolverError::StepSize { dt: h, limit, kind: "CFL" }));
            }
            if !warned {
                log::warn!("dt = {h:.3e} exceeds the CFL bound {limit:.3e} at t = {time}; continuing");
                warned = true;
            }
        }
        let (next, mut diag) = match stepper.step(&u, h) {
            Ok(r) => r,
            Err(e) => return Err(abort(traj, u, time, e)),
        };
        time = if n + 1 == n_steps {
            c.t_final
        } else {
            (n + 1) as f64 * c.dt
        };
        if !diag.l2_norm.is_finite() {
            return Err(abort(traj, u, time, SolverError::NonFinite { time }));
        }
        diag.time = time;
        traj.steps.push(diag);
        u = next;
        if record[n + 1] {
            traj.snapshots.push(Snapshot {
                time,
                field: u.clone(),
            });
        }
    }
    Ok(traj)
}

fn abort(mut traj: Trajectory, last: SpectralField, time: f64, source: SolverError) -> RunError {
    if traj.last().time < time {
        traj.snapshots.push(Snapshot { time, field: last });
    }
    RunError {
        time,
        source,
        partial: Box::new(traj),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::project;
    use crate::Complex;
    use std::f64::consts::PI;

    #[test]
    fn step_sizes_land_on_final_time() {
        assert!(step_sizes(0.1, 0.0).is_empty());
        let s = step_sizes(1.0 / 64.0, 2.0);
        assert_eq!(s.len(), 128);
        assert!(s.iter().all(|&h| h == 1.0 / 64.0));
        let s = step_sizes(0.3, 1.0);
        assert_eq!(s.len(), 4);
        assert!((s[3] - 0.1).abs() < 1e-15);
        assert!((s.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_final_time_returns_projection() {
        let p = ModelParams::new(1.5, 1.0, 1.0, PI).unwrap();
        let c = SolverConfig::new(16, 0.01, 0.0);
        let g = PeriodicGrid::new(16, PI).unwrap();
        let samples: Vec<f64> = g.points().iter().map(|x| 0.5 * x.sin()).collect();
        let t = run(&samples, &p, &c, &[]).unwrap();
        assert_eq!(t.snapshots.len(), 1);
        assert!(t.steps.is_empty());
        assert!((t.initial().field.coeff(1) - Complex::new(0.0, -0.25)).norm() < 1e-15);
    }

    #[test]
    fn snapshots_at_requested_times() {
        let p = ModelParams::new(1.5, 1.0, 1.0, PI).unwrap();
        let c = SolverConfig::new(16, 0.1, 1.0);
        let u0 = project(|x| 0.5 * x.sin(), &PeriodicGrid::new(16, PI).unwrap());
        let t = run_field(u0, &p, &c, &[0.5, 0.52, 0.96]).unwrap();
        let times = t.times();
        assert_eq!(times.len(), 3);
        assert!((times[1] - 0.5).abs() < 1e-12);
        assert_eq!(*times.last().unwrap(), 1.0);
        assert!(times.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(t.steps.len(), 10);
    }

    #[test]
    fn snapshot_outside_range_rejected() {
        let p = ModelParams::new(1.5, 1.0, 1.0, PI).unwrap();
        let c = SolverConfig::new(8, 0.1, 1.0);
        let u0 = SpectralField::zeros(PeriodicGrid::new(8, PI).unwrap());
        let err = run_field(u0, &p, &c, &[1.5]).unwrap_err();
        assert!(matches!(err.source, SolverError::InvalidParameters(_)));
    }

    #[test]
    fn failure_keeps_partial_trajectory() {
        let p = ModelParams::new(1.5, 1.0, 1.0, PI).unwrap();
        let mut c = SolverConfig::new(16, 0.05, 1.0);
        c.enforce_cfl = true;
        let u0 = project(|x| 0.5 * x.sin(), &PeriodicGrid::new(16, PI).unwrap());
        let err = run_field(u0, &p, &c, &[]).unwrap_err();
        assert!(matches!(err.source, SolverError::StepSize { .. }));
        assert_eq!(err.partial.snapshots.len(), 1);
    }

    #[test]
    fn linear_run_keeps_moduli() {
        let p = ModelParams::new(1.3, 0.7, 0.0, 2.0).unwrap();
        let c = SolverConfig::new(12, 0.01, 0.5);
        let g = PeriodicGrid::new(12, 2.0).unwrap();
        let u0 = project(|x| (-(x * x)).exp(), &g);
        let t = run_field(u0.clone(), &p, &c, &[0.1, 0.2, 0.3]).unwrap();
        for s in &t.snapshots {
            for k in g.modes() {
                assert!((s.field.coeff(k).norm() - u0.coeff(k).norm()).abs() < 1e-12);
            }
        }
    }
}
