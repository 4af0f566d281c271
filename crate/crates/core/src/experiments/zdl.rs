use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{sup_error, ExperimentError};
use crate::reference::{elliptic_asymptotic_u, BetaProfile, HopfSolver, ReferenceError};
use crate::solver::{run_field, ModelParams, SolverConfig};
use crate::spectral::{project, synthesize, PeriodicGrid, SpectralField};
use crate::Complex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceKind {
    Hopf,
    EllipticFile,
    Exact,
}

impl fmt::Display for ReferenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReferenceKind::Hopf => "hopf",
            ReferenceKind::EllipticFile => "elliptic-file",
            ReferenceKind::Exact => "exact",
        })
    }
}

/// What each run of a sweep is compared with.
#[derive(Debug, Clone, PartialEq)]
pub enum ZdlReference {
    /// Dispersionless characteristics; only valid before the break time.
    Hopf,
    /// Genus-one asymptotics from sampled branch points and a frozen phase `q`.
    /// The comparison window is the profile's range.
    EllipticFile { profile: BetaProfile, q: f64 },
    /// The exact linear evolution; requires `λ = 0`.
    Exact,
}

impl ZdlReference {
    pub fn kind(&self) -> ReferenceKind {
        match self {
            ZdlReference::Hopf => ReferenceKind::Hopf,
            ZdlReference::EllipticFile { .. } => ReferenceKind::EllipticFile,
            ZdlReference::Exact => ReferenceKind::Exact,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZdlConfig {
    pub n_modes: usize,
    /// Defaults to `1/(8N‖u₀‖_∞)`.
    pub dt: Option<f64>,
    pub t_eval: f64,
    /// Defaults to `[−L, L]`, or the β-profile range.
    pub window: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsSweepRow {
    pub eps: f64,
    pub sup_error: f64,
    pub t_eval: f64,
    pub reference_kind: ReferenceKind,
    pub n_modes: usize,
    pub dt: f64,
    /// Largest number of fixed-point sweeps taken in any step.
    pub max_iterations: usize,
}

/// One solver run per `ε` at fixed `N`, each scored by the sup error against
/// `reference` at `t_eval`. Rows follow the order of `eps_list`.
pub fn zdl_sweep<F>(
    u0: F,
    p_base: &ModelParams,
    eps_list: &[f64],
    cfg: &ZdlConfig,
    reference: &ZdlReference,
) -> Result<Vec<EpsSweepRow>, ExperimentError>
where
    F: Fn(f64) -> f64 + Sync,
{
    if let Some(e) = eps_list.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
        return Err(ExperimentError::Parameter { name: "eps", reason: format!("must be positive, got {e}") });
    }
    let l = p_base.half_length;
    let grid = PeriodicGrid::new(cfg.n_modes, l)?;
    let window = match (cfg.window, reference) {
        (Some(w), _) => w,
        (None, ZdlReference::EllipticFile { profile, .. }) => {
            let [a, b] = profile.window();
            [a.max(-l), b.min(l)]
        }
        (None, _) => [-l, l],
    };

    // Reference values that do not depend on ε are computed before any run.
    let hopf_values: Option<Vec<f64>> = match reference {
        ZdlReference::Hopf => {
            let h = HopfSolver::new(&u0, p_base.lambda, [-l, l])?;
            h.check_time(cfg.t_eval)?;
            let values = grid
                .points()
                .iter()
                .map(|&x| if x >= window[0] && x <= window[1] { h.solve(x, cfg.t_eval) } else { Ok(f64::NAN) })
                .collect::<Result<Vec<_>, ReferenceError>>()?;
            Some(values)
        }
        ZdlReference::Exact if p_base.lambda != 0.0 => {
            return Err(ExperimentError::Parameter {
                name: "reference",
                reason: format!("the exact linear reference needs λ = 0, got {}", p_base.lambda),
            });
        }
        _ => None,
    };

    let u0_field = project(&u0, &grid);
    let dt = match cfg.dt {
        Some(dt) => dt,
        None => {
            let sup = synthesize(&u0_field)?.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            1.0 / (8.0 * cfg.n_modes as f64 * sup.max(f64::MIN_POSITIVE))
        }
    };
    // Validate the shared configuration once, listing every problem.
    let probe = ModelParams { eps: eps_list.first().copied().unwrap_or(1.0), ..*p_base };
    probe.validate()?;
    SolverConfig::new(cfg.n_modes, dt, cfg.t_eval).validate()?;

    let points = grid.points();
    let lookup = |values: &[f64], x: f64| -> f64 {
        let j = points.partition_point(|&p| p < x);
        values[j]
    };

    eps_list
        .par_iter()
        .map(|&eps| {
            let p = ModelParams { eps, ..*p_base };
            let c = SolverConfig::new(cfg.n_modes, dt, cfg.t_eval);
            let traj = run_field(u0_field.clone(), &p, &c, &[]).map_err(Box::new)?;
            let u = &traj.last().field;
            let err = match reference {
                ZdlReference::Hopf => {
                    let values = hopf_values.as_deref().expect("computed above");
                    sup_error(u, |x| lookup(values, x), window)?
                }
                ZdlReference::Exact => {
                    let exact = linear_evolution(&u0_field, &p, cfg.t_eval);
                    let values = synthesize(&exact)?;
                    sup_error(u, |x| lookup(&values, x), window)?
                }
                ZdlReference::EllipticFile { profile, q } => {
                    let values = points
                        .iter()
                        .map(|&x| match profile.interpolate(x) {
                            Some(b) if x >= window[0] && x <= window[1] => {
                                elliptic_asymptotic_u(x, cfg.t_eval, eps, &b, *q)
                            }
                            _ => Ok(f64::NAN),
                        })
                        .collect::<Result<Vec<_>, ReferenceError>>()?;
                    sup_error(u, |x| lookup(&values, x), window)?
                }
            };
            Ok(EpsSweepRow {
                eps,
                sup_error: err,
                t_eval: cfg.t_eval,
                reference_kind: reference.kind(),
                n_modes: cfg.n_modes,
                dt,
                max_iterations: traj.steps.iter().map(|s| s.iterations).max().unwrap_or(0),
            })
        })
        .collect()
}

/// `û(k, t) = e^{i ε² κ|κ|^α t} û(k, 0)`, the solution when `λ = 0`.
fn linear_evolution(u0: &SpectralField, p: &ModelParams, t: f64) -> SpectralField {
    u0.map_modes(|_, kappa| Complex::from_polar(1.0, p.dispersion(kappa) * t))
}
