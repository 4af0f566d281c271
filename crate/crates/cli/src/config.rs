//! Layered configuration: built-in defaults, then a TOML file (or a previous
//! run's JSON manifest), then command-line flags.

use std::path::{Path, PathBuf};

use fkdv_core::solver::{ModelParams, SolverConfig};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::initial::InitialDatum;

macro_rules! layered {
    ($(#[$meta:meta])* pub struct $name:ident { $($field:ident : $ty:ty),* $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
        #[serde(default, deny_unknown_fields)]
        pub struct $name {
            $(#[serde(skip_serializing_if = "Option::is_none")] pub $field: Option<$ty>,)*
        }

        impl $name {
            /// Fields set in `top` win.
            pub fn layer(self, top: Self) -> Self {
                Self { $($field: top.$field.or(self.$field),)* }
            }
        }
    };
}

layered! {
    pub struct ModelSection { alpha: f64, eps: f64, lambda: f64, half_length: f64 }
}

layered! {
    pub struct SolverSection {
        n_modes: usize,
        dt: f64,
        t_final: f64,
        fp_tolerance: f64,
        fp_max_iters: usize,
        zeta: f64,
        enforce_cfl: bool,
    }
}

layered! {
    pub struct OutputSection { dir: PathBuf, snapshot_times: Vec<f64> }
}

layered! {
    pub struct ConvergeSection { setup: String, n_list: Vec<usize>, reference_modes: usize }
}

layered! {
    pub struct ZdlSection {
        eps_list: Vec<f64>,
        t_eval: f64,
        reference: String,
        beta_file: PathBuf,
        q: f64,
        f_minus: String,
        window: [f64; 2],
    }
}

layered! {
    pub struct ReferenceSection { solution: String, time: f64, points: usize }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub full: Option<bool>,
    pub model: ModelSection,
    pub solver: SolverSection,
    pub output: OutputSection,
    pub converge: ConvergeSection,
    pub zdl: ZdlSection,
    pub reference: ReferenceSection,
}

impl Config {
    pub fn layer(self, top: Config) -> Config {
        Config {
            initial: top.initial.or(self.initial),
            jobs: top.jobs.or(self.jobs),
            full: top.full.or(self.full),
            model: self.model.layer(top.model),
            solver: self.solver.layer(top.solver),
            output: self.output.layer(top.output),
            converge: self.converge.layer(top.converge),
            zdl: self.zdl.layer(top.zdl),
            reference: self.reference.layer(top.reference),
        }
    }

    /// Reads a TOML file, or the `config` object of a JSON manifest.
    pub fn load(path: &Path) -> Result<Config, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("config file {}: {e}", path.display())))?;
        let bad = |e: String| CliError::config(format!("config file {}: {e}", path.display()));
        if path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{') {
            let mut value: serde_json::Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
            let inner = match value.get_mut("config") {
                Some(c) => c.take(),
                None => value,
            };
            serde_json::from_value(inner).map_err(|e| bad(e.to_string()))
        } else {
            toml::from_str(&text).map_err(|e| bad(e.to_string()))
        }
    }

    pub fn is_full(&self) -> bool {
        self.full.unwrap_or(false)
    }
}

/// Defaults for `solve` and `invariants`: the fractional sine problem.
pub fn run_defaults() -> Config {
    Config {
        initial: Some("sine(0.5, 1)".into()),
        model: ModelSection {
            alpha: Some(1.5),
            eps: Some(1.0),
            lambda: Some(1.0),
            half_length: Some(std::f64::consts::PI),
        },
        solver: solver_defaults(128, 2.0),
        output: OutputSection { dir: Some("fkdv-out".into()), snapshot_times: Some(Vec::new()) },
        ..Config::default()
    }
}

fn solver_defaults(n_modes: usize, t_final: f64) -> SolverSection {
    SolverSection {
        n_modes: Some(n_modes),
        dt: None,
        t_final: Some(t_final),
        fp_tolerance: Some(SolverConfig::DEFAULT_FP_TOLERANCE),
        fp_max_iters: Some(SolverConfig::DEFAULT_FP_MAX_ITERS),
        zeta: Some(SolverConfig::DEFAULT_ZETA),
        enforce_cfl: Some(false),
    }
}

pub fn converge_defaults() -> Config {
    Config {
        output: OutputSection { dir: Some("fkdv-out".into()), snapshot_times: None },
        converge: ConvergeSection { setup: Some("frac-sine".into()), n_list: Some(vec![128, 256, 512]), reference_modes: None },
        ..Config::default()
    }
}

/// Desk-scale sweep; `full` selects the resolution and ε range of the published table.
pub fn zdl_defaults(full: bool) -> Config {
    let (n, eps) = if full {
        (1 << 16, vec![-1.0, -2.0, -2.5, -3.0, -3.5, -4.0])
    } else {
        (1 << 12, vec![-1.0, -1.5, -2.0, -2.5])
    };
    Config {
        initial: Some("sech2".into()),
        model: ModelSection { alpha: Some(1.999), eps: None, lambda: Some(6.0), half_length: Some(6.0) },
        solver: SolverSection { t_final: None, ..solver_defaults(n, 0.0) },
        output: OutputSection { dir: Some("fkdv-out".into()), snapshot_times: None },
        zdl: ZdlSection {
            eps_list: Some(eps.into_iter().map(|e: f64| 10f64.powf(e)).collect()),
            t_eval: Some(0.2),
            reference: Some("hopf".into()),
            ..ZdlSection::default()
        },
        ..Config::default()
    }
}

pub fn reference_defaults() -> Config {
    Config {
        initial: Some("sech2".into()),
        model: ModelSection { alpha: Some(2.0), eps: Some(1.0), lambda: Some(1.0), half_length: Some(15.0) },
        output: OutputSection { dir: Some("fkdv-out".into()), snapshot_times: None },
        reference: ReferenceSection { solution: Some("kdv-soliton".into()), time: Some(0.0), points: Some(1024) },
        ..Config::default()
    }
}

/// Collects validation problems so they can be reported together.
#[derive(Default)]
pub struct Issues(Vec<String>);

impl Issues {
    pub fn push(&mut self, msg: impl Into<String>) {
        self.0.push(msg.into());
    }

    pub fn extend(&mut self, msgs: impl IntoIterator<Item = String>) {
        self.0.extend(msgs);
    }

    pub fn require<T: Clone>(&mut self, value: &Option<T>, name: &str) -> Option<T> {
        if value.is_none() {
            self.push(format!("{name}: missing"));
        }
        value.clone()
    }

    pub fn finish(self) -> Result<(), CliError> {
        if self.0.is_empty() {
            Ok(())
        } else {
            Err(CliError::Config(self.0))
        }
    }
}

/// Model parameters, with every violated constraint recorded in `issues`.
pub fn model_params(cfg: &Config, issues: &mut Issues) -> ModelParams {
    let m = &cfg.model;
    let p = ModelParams {
        alpha: issues.require(&m.alpha, "model.alpha").unwrap_or(f64::NAN),
        eps: issues.require(&m.eps, "model.eps").unwrap_or(f64::NAN),
        lambda: issues.require(&m.lambda, "model.lambda").unwrap_or(f64::NAN),
        half_length: issues.require(&m.half_length, "model.half_length").unwrap_or(f64::NAN),
    };
    if m.alpha.is_some() && m.eps.is_some() && m.lambda.is_some() && m.half_length.is_some() {
        issues.extend(p.issues().into_iter().map(|i| format!("model.{}: {}", i.field, i.message)));
    }
    p
}

/// Solver settings; an unset `dt` is reported as `None` for the caller to fill.
pub fn solver_config(cfg: &Config, issues: &mut Issues) -> (SolverConfig, Option<f64>) {
    let s = &cfg.solver;
    let mut c = SolverConfig::new(
        issues.require(&s.n_modes, "solver.n_modes").unwrap_or(1),
        s.dt.unwrap_or(1.0),
        issues.require(&s.t_final, "solver.t_final").unwrap_or(0.0),
    );
    c.fp_tolerance = s.fp_tolerance.unwrap_or(c.fp_tolerance);
    c.fp_max_iters = s.fp_max_iters.unwrap_or(c.fp_max_iters);
    c.zeta = s.zeta.unwrap_or(c.zeta);
    c.enforce_cfl = s.enforce_cfl.unwrap_or(c.enforce_cfl);
    issues.extend(c.issues().into_iter().map(|i| format!("solver.{}: {}", i.field, i.message)));
    (c, s.dt)
}

pub fn initial_datum(cfg: &Config, half_length: f64, issues: &mut Issues) -> Option<InitialDatum> {
    let text = issues.require(&cfg.initial, "initial")?;
    match text.parse::<InitialDatum>() {
        Ok(d) => {
            if half_length.is_finite() && half_length > 0.0 {
                issues.extend(d.issues(half_length));
            }
            Some(d)
        }
        Err(e) => {
            issues.push(format!("initial: {e}"));
            None
        }
    }
}

pub fn jobs(cfg: &Config, env_cap: Option<&str>, issues: &mut Issues) -> usize {
    let default = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let mut n = match cfg.jobs {
        Some(0) => {
            issues.push("jobs: must be at least 1");
            1
        }
        Some(j) => j,
        None => default,
    };
    if let Some(cap) = env_cap {
        match cap.trim().parse::<usize>() {
            Ok(c) if c >= 1 => n = n.min(c),
            _ => issues.push(format!("FKDV_NUM_THREADS: expected a positive integer, got `{cap}`")),
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_override_defaults() {
        let file: Config = toml::from_str("[model]\nalpha = 1.2\neps = 0.5\n[solver]\nn_modes = 64\n").unwrap();
        let flags = Config { model: ModelSection { eps: Some(0.25), ..Default::default() }, ..Default::default() };
        let cfg = run_defaults().layer(file).layer(flags);
        assert_eq!(cfg.model.alpha, Some(1.2));
        assert_eq!(cfg.model.eps, Some(0.25));
        assert_eq!(cfg.model.lambda, Some(1.0));
        assert_eq!(cfg.solver.n_modes, Some(64));
        assert_eq!(cfg.solver.t_final, Some(2.0));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<Config>("[model]\nalfa = 1.2\n").is_err());
    }

    #[test]
    fn all_issues_reported_together() {
        let mut cfg = run_defaults();
        cfg.model.alpha = Some(3.0);
        cfg.solver.zeta = Some(1.5);
        cfg.initial = Some("gauss".into());
        let mut issues = Issues::default();
        model_params(&cfg, &mut issues);
        solver_config(&cfg, &mut issues);
        initial_datum(&cfg, 1.0, &mut issues);
        match issues.finish() {
            Err(CliError::Config(v)) => {
                assert_eq!(v.len(), 3, "{v:?}");
                assert!(v[0].starts_with("model.alpha") && v[1].starts_with("solver.zeta") && v[2].starts_with("initial"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn thread_cap_from_environment() {
        let cfg = Config { jobs: Some(8), ..Default::default() };
        let mut issues = Issues::default();
        assert_eq!(jobs(&cfg, Some("2"), &mut issues), 2);
        assert_eq!(jobs(&cfg, None, &mut issues), 8);
        jobs(&cfg, Some("zero"), &mut issues);
        assert!(issues.finish().is_err());
    }
}
