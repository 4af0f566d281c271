use std::path::PathBuf;

use fkdv_core::experiments::{
    convergence_study, loglog_slope, write_convergence_csv, write_sweep_csv, zdl_sweep, ConvergenceRow, EpsSweepRow,
    Setup, StudyOptions, ZdlConfig, ZdlReference,
};
use fkdv_core::invariants::{self, Channel, InvariantReport};
use fkdv_core::reference::{
    break_point, elliptic_asymptotic_u, q_phase, BetaProfile, BoSoliton, BreakPoint, HopfSolver, ReferenceError,
    kdv_one_soliton,
};
use fkdv_core::solver::{run_field, ModelParams, SolverConfig, StepDiagnostics};
use fkdv_core::spectral::{synthesize, SpectralField};
use serde::Serialize;

use crate::config::{self, Config, Issues};
use crate::error::CliError;
use crate::initial::InitialDatum;
use crate::output::{csv_table, Manifest, Outputs};

/// Everything a single run needs, validated.
struct RunPlan {
    config: Config,
    params: ModelParams,
    solver: SolverConfig,
    initial: InitialDatum,
    u0: SpectralField,
    snapshot_times: Vec<f64>,
    out_dir: PathBuf,
    jobs: usize,
}

impl RunPlan {
    fn resolve(mut cfg: Config, env_cap: Option<&str>) -> Result<Self, CliError> {
        let mut issues = Issues::default();
        let params = config::model_params(&cfg, &mut issues);
        let (mut solver, dt) = config::solver_config(&cfg, &mut issues);
        let initial = config::initial_datum(&cfg, params.half_length, &mut issues);
        let snapshot_times = cfg.output.snapshot_times.clone().unwrap_or_default();
        if let Some(t) = snapshot_times.iter().find(|t| !(t.is_finite() && **t >= 0.0 && **t <= solver.t_final)) {
            issues.push(format!("output.snapshot_times: {t} lies outside [0, {}]", solver.t_final));
        }
        let out_dir = issues.require(&cfg.output.dir, "output.dir");
        let jobs = config::jobs(&cfg, env_cap, &mut issues);
        issues.finish()?;
        let initial = initial.expect("validated");

        let u0 = initial.project(solver.n_modes, params.half_length)?;
        solver.dt = match dt {
            Some(dt) => dt,
            None => {
                let sup = sup_norm(&u0)?;
                if sup == 0.0 {
                    return Err(CliError::config("solver.dt: cannot default to 1/(N‖u₀‖∞) for zero initial data"));
                }
                1.0 / (solver.n_modes as f64 * sup)
            }
        };
        cfg.solver.dt = Some(solver.dt);
        Ok(Self { config: cfg, params, solver, initial, u0, snapshot_times, out_dir: out_dir.expect("validated"), jobs })
    }
}

fn sup_norm(u: &SpectralField) -> Result<f64, CliError> {
    Ok(synthesize(u).map_err(|e| CliError::numerical("spectral", e))?.iter().fold(0.0, |m, v| m.max(v.abs())))
}

pub fn init_pool(jobs: usize) {
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
        log::debug!("thread pool already initialized: {e}");
    }
}

fn invariants_csv(rep: &InvariantReport) -> Vec<u8> {
    csv_table(
        &["t", "I1", "I2", "I3"],
        (0..rep.times.len()).map(|i| vec![rep.times[i], rep.i1[i], rep.i2[i], rep.i3[i]]),
    )
}

fn steps_csv(steps: &[StepDiagnostics]) -> Vec<u8> {
    csv_table(
        &["t", "dt", "iterations", "residual", "l2_norm"],
        steps.iter().map(|s| vec![s.time, s.dt, s.iterations as f64, s.residual(), s.l2_norm]),
    )
}

#[derive(Serialize)]
struct SnapshotEntry {
    file: String,
    time: f64,
}

#[derive(Serialize)]
struct RunSummary {
    initial: String,
    dt: f64,
    steps: usize,
    max_iterations: usize,
    cfl_max_dt_initial: f64,
    channels: [Channel; 3],
    max_drift: [f64; 3],
    snapshots: Vec<SnapshotEntry>,
}

fn execute(plan: &RunPlan, every_step: bool) -> Result<(fkdv_core::Trajectory, InvariantReport), CliError> {
    init_pool(plan.jobs);
    let times: Vec<f64> = if every_step {
        let n = (plan.solver.t_final / plan.solver.dt).ceil() as usize;
        (0..=n).map(|i| (i as f64 * plan.solver.dt).min(plan.solver.t_final)).collect()
    } else {
        plan.snapshot_times.clone()
    };
    let traj = run_field(plan.u0.clone(), &plan.params, &plan.solver, &times).map_err(|e| {
        CliError::numerical("solver", format!("{e} ({} steps completed)", e.partial.steps.len()))
    })?;
    let rep = invariants::report(&traj, &plan.params).map_err(|e| CliError::numerical("invariants", e))?;
    Ok((traj, rep))
}

fn summary(plan: &RunPlan, traj: &fkdv_core::Trajectory, rep: &InvariantReport, snapshots: Vec<SnapshotEntry>) -> RunSummary {
    RunSummary {
        initial: plan.initial.to_string(),
        dt: plan.solver.dt,
        steps: traj.steps.len(),
        max_iterations: traj.steps.iter().map(|s| s.iterations).max().unwrap_or(0),
        cfl_max_dt_initial: fkdv_core::solver::cfl_max_dt(&plan.u0, &plan.params, &plan.solver),
        channels: rep.channels,
        max_drift: rep.max_drift,
        snapshots,
    }
}

fn print_drift(rep: &InvariantReport) {
    for (i, name) in ["I1", "I2", "I3"].iter().enumerate() {
        let kind = match rep.channels[i] {
            Channel::Normalized => "max |I-1|",
            Channel::Unnormalized => "max |Q-Q0| (unnormalized)",
        };
        println!("{name}: {kind} = {:.3e}", rep.max_drift[i]);
    }
}

pub fn solve(cfg: Config, env_cap: Option<&str>) -> Result<(), CliError> {
    let plan = RunPlan::resolve(cfg, env_cap)?;
    let (traj, rep) = execute(&plan, false)?;
    let mut out = Outputs::new(&plan.out_dir);
    let mut entries = Vec::new();
    for (i, snap) in traj.snapshots.iter().enumerate() {
        let name = format!("snapshot_{i:04}.csv");
        let values = synthesize(&snap.field).map_err(|e| CliError::numerical("spectral", e))?;
        let x = snap.field.grid().points();
        out.add(&name, csv_table(&["x", "u"], x.iter().zip(&values).map(|(x, u)| vec![*x, *u])));
        entries.push(SnapshotEntry { file: name, time: snap.time });
    }
    out.add("invariants.csv", invariants_csv(&rep));
    out.add("steps.csv", steps_csv(&traj.steps));
    let mut names = out.names();
    names.push("manifest.json".into());
    let manifest = Manifest::new("solve", &plan.config, names, summary(&plan, &traj, &rep, entries));
    out.add("manifest.json", manifest.to_bytes());
    out.commit()?;
    println!("{} steps to t = {}, {} snapshots in {}", traj.steps.len(), traj.last().time, traj.snapshots.len(), plan.out_dir.display());
    print_drift(&rep);
    Ok(())
}

pub fn invariants(cfg: Config, env_cap: Option<&str>) -> Result<(), CliError> {
    let plan = RunPlan::resolve(cfg, env_cap)?;
    let (traj, rep) = execute(&plan, true)?;
    let mut out = Outputs::new(&plan.out_dir);
    out.add("invariants.csv", invariants_csv(&rep));
    let names = vec!["invariants.csv".to_string(), "manifest.json".to_string()];
    let manifest = Manifest::new("invariants", &plan.config, names, summary(&plan, &traj, &rep, Vec::new()));
    out.add("manifest.json", manifest.to_bytes());
    out.commit()?;
    print_drift(&rep);
    Ok(())
}

pub fn converge(cfg: Config, env_cap: Option<&str>) -> Result<(), CliError> {
    let mut issues = Issues::default();
    let setup = issues.require(&cfg.converge.setup, "converge.setup").and_then(|s| {
        s.parse::<Setup>().map_err(|e| issues.push(format!("converge.setup: {e}"))).ok()
    });
    let n_list = issues.require(&cfg.converge.n_list, "converge.n_list").unwrap_or_default();
    if n_list.is_empty() || n_list.contains(&0) {
        issues.push("converge.n_list: need at least one positive mode count");
    }
    if let Some(t) = cfg.solver.t_final {
        if !(t.is_finite() && t >= 0.0) {
            issues.push(format!("solver.t_final: must be non-negative, got {t}"));
        }
    }
    let out_dir = issues.require(&cfg.output.dir, "output.dir");
    let jobs = config::jobs(&cfg, env_cap, &mut issues);
    issues.finish()?;
    let setup = setup.expect("validated");
    if cfg.model != Default::default() || cfg.initial.is_some() {
        log::warn!("converge uses the parameters and initial datum of setup `{setup}`; model/initial settings are ignored");
    }
    let reference_modes = match (cfg.converge.reference_modes, setup) {
        (Some(r), _) => Some(r),
        (None, Setup::FracSine) if cfg.is_full() => Some(1 << 16),
        _ => None,
    };
    init_pool(jobs);
    let options = StudyOptions { reference_modes, t_final: cfg.solver.t_final };
    let rows = convergence_study(setup, &n_list, &options)?;

    let mut table = Vec::new();
    write_convergence_csv(&rows, &mut table)?;
    let mut out = Outputs::new(out_dir.expect("validated"));
    out.add("convergence.csv", table);
    #[derive(Serialize)]
    struct Summary<'a> {
        setup: String,
        params: ModelParams,
        t_final: f64,
        reference_modes: Option<usize>,
        rows: &'a [ConvergenceRow],
    }
    let summary = Summary {
        setup: setup.to_string(),
        params: setup.params(),
        t_final: cfg.solver.t_final.unwrap_or(setup.t_final()),
        reference_modes: match setup {
            Setup::FracSine => Some(reference_modes.unwrap_or(8 * n_list.iter().max().copied().unwrap_or(0))),
            _ => None,
        },
        rows: &rows,
    };
    let names = vec!["convergence.csv".to_string(), "manifest.json".to_string()];
    out.add("manifest.json", Manifest::new("converge", &cfg, names, summary).to_bytes());
    out.commit()?;

    println!("{:>6}  {:>11}  {:>7}  {:>10}  {:>10}  {:>10}", "N", "E", "R", "I1", "I2", "I3");
    let fmt = |v: Option<f64>, w: usize| v.map(|v| format!("{v:>w$.3e}")).unwrap_or_else(|| format!("{:>w$}", "-"));
    for r in &rows {
        let inv = r.invariants.map(|v| v.map(Some)).unwrap_or([None; 3]);
        println!(
            "{:>6}  {}  {}  {}  {}  {}",
            r.n_modes,
            fmt(r.error, 11),
            r.rate.map(|v| format!("{v:>7.3}")).unwrap_or_else(|| format!("{:>7}", "-")),
            fmt(inv[0], 10),
            fmt(inv[1], 10),
            fmt(inv[2], 10)
        );
    }
    let failures: Vec<String> =
        rows.iter().filter_map(|r| r.failure.as_ref().map(|f| format!("N = {}: {f}", r.n_modes))).collect();
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::numerical("experiments", failures.join("; ")))
    }
}

fn break_time_hint(initial: &InitialDatum, lambda: f64) -> String {
    match initial {
        InitialDatum::Sech2 if lambda == 6.0 => " (t_c = √3/8 for −sech² data at λ = 6)".into(),
        InitialDatum::Sech2 => format!(" (t_c = 3√3/(4λ) for −sech² data, λ = {lambda})"),
        _ => String::new(),
    }
}

pub fn zdl(cfg: Config, env_cap: Option<&str>) -> Result<(), CliError> {
    let mut issues = Issues::default();
    let mut model = cfg.model.clone();
    model.eps = Some(model.eps.unwrap_or(1.0));
    let params = config::model_params(&Config { model, ..cfg.clone() }, &mut issues);
    let n_modes = issues.require(&cfg.solver.n_modes, "solver.n_modes").unwrap_or(1);
    if n_modes == 0 {
        issues.push("solver.n_modes: must be at least 1");
    }
    if let Some(dt) = cfg.solver.dt {
        if !(dt.is_finite() && dt > 0.0) {
            issues.push(format!("solver.dt: must be positive, got {dt}"));
        }
    }
    let eps_list = issues.require(&cfg.zdl.eps_list, "zdl.eps_list").unwrap_or_default();
    if eps_list.is_empty() {
        issues.push("zdl.eps_list: empty");
    }
    if let Some(e) = eps_list.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
        issues.push(format!("zdl.eps_list: values must be positive, got {e}"));
    }
    let t_eval = issues.require(&cfg.zdl.t_eval, "zdl.t_eval").unwrap_or(0.0);
    if !(t_eval.is_finite() && t_eval >= 0.0) {
        issues.push(format!("zdl.t_eval: must be non-negative, got {t_eval}"));
    }
    let initial = config::initial_datum(&cfg, params.half_length, &mut issues);
    let reference = match issues.require(&cfg.zdl.reference, "zdl.reference").as_deref() {
        Some("hopf") => Some(ZdlReference::Hopf),
        Some("exact") => Some(ZdlReference::Exact),
        Some("elliptic-file") => {
            if cfg.zdl.beta_file.is_none() {
                issues.push("zdl.beta_file: required by the elliptic-file reference");
            }
            if cfg.zdl.q.is_none() {
                issues.push("zdl.q: required by the elliptic-file reference");
            }
            match (&cfg.zdl.beta_file, cfg.zdl.q) {
                (Some(path), Some(q)) => match BetaProfile::read(path) {
                    Ok(profile) => Some(ZdlReference::EllipticFile { profile, q }),
                    Err(e) => {
                        issues.push(format!("zdl.beta_file: {}: {e}", path.display()));
                        None
                    }
                },
                _ => None,
            }
        }
        Some(other) => {
            issues.push(format!("zdl.reference: unknown `{other}` (expected hopf, elliptic-file or exact)"));
            None
        }
        None => None,
    };
    let out_dir = issues.require(&cfg.output.dir, "output.dir");
    let jobs = config::jobs(&cfg, env_cap, &mut issues);
    issues.finish()?;
    let (initial, reference) = (initial.expect("validated"), reference.expect("validated"));
    if cfg.model.eps.is_some() {
        log::warn!("zdl sweeps over zdl.eps_list; model.eps is ignored");
    }

    let u0 = initial.evaluator(n_modes, params.half_length)?;
    let zcfg = ZdlConfig { n_modes, dt: cfg.solver.dt, t_eval, window: cfg.zdl.window };
    init_pool(jobs);
    let rows = zdl_sweep(u0, &params, &eps_list, &zcfg, &reference).map_err(|e| match e {
        fkdv_core::experiments::ExperimentError::Reference(ReferenceError::Multivalued { t, t_c }) => CliError::config(format!(
            "reference: t_eval = {t} is at or past the break time t_c = {t_c:.12}{}; the Hopf reference is multivalued there",
            break_time_hint(&initial, params.lambda)
        )),
        other => other.into(),
    })?;

    let mut table = Vec::new();
    write_sweep_csv(&rows, &mut table)?;
    let mut out = Outputs::new(out_dir.expect("validated"));
    out.add("sweep.csv", table);
    let slope = if rows.len() >= 3 {
        let tail = &rows[rows.len() - 3..];
        let x: Vec<f64> = tail.iter().map(|r| r.eps).collect();
        let y: Vec<f64> = tail.iter().map(|r| r.sup_error).collect();
        loglog_slope(&x, &y).ok()
    } else {
        None
    };
    #[derive(Serialize)]
    struct Summary<'a> {
        initial: String,
        rows: &'a [EpsSweepRow],
        loglog_slope_last_three: Option<f64>,
    }
    let names = vec!["sweep.csv".to_string(), "manifest.json".to_string()];
    let summary = Summary { initial: initial.to_string(), rows: &rows, loglog_slope_last_three: slope };
    out.add("manifest.json", Manifest::new("zdl", &cfg, names, summary).to_bytes());
    out.commit()?;
    for r in &rows {
        println!("eps = {:.4e}  E = {:.4e}  ({}, N = {}, dt = {:.3e})", r.eps, r.sup_error, r.reference_kind, r.n_modes, r.dt);
    }
    if let Some(s) = slope {
        println!("log-log slope over the three smallest eps: {s:.3}");
    }
    Ok(())
}

/// Inverse of `−sech²` on one monotone branch.
fn named_f_minus(name: &str) -> Option<fn(f64) -> f64> {
    fn left(a: f64) -> f64 {
        -(1.0 / (-a).sqrt()).acosh()
    }
    fn right(a: f64) -> f64 {
        (1.0 / (-a).sqrt()).acosh()
    }
    match name {
        "neg-sech2-left" => Some(left),
        "neg-sech2-right" => Some(right),
        _ => None,
    }
}

enum Solution {
    Kdv,
    Bo(BoSoliton),
    Hopf,
    BreakPoint,
    Elliptic(BetaProfile),
}

pub fn reference(cfg: Config, env_cap: Option<&str>) -> Result<(), CliError> {
    let mut issues = Issues::default();
    let params = config::model_params(&cfg, &mut issues);
    let l = params.half_length;
    let t = issues.require(&cfg.reference.time, "reference.time").unwrap_or(0.0);
    if !(t.is_finite() && t >= 0.0) {
        issues.push(format!("reference.time: must be non-negative, got {t}"));
    }
    let points = issues.require(&cfg.reference.points, "reference.points").unwrap_or(1);
    if points == 0 {
        issues.push("reference.points: must be at least 1");
    }
    let name = issues.require(&cfg.reference.solution, "reference.solution").unwrap_or_default();
    let mut initial = None;
    let solution = match name.as_str() {
        "kdv-soliton" => Some(Solution::Kdv),
        s if s.starts_with("bo-soliton") => match s.parse::<InitialDatum>() {
            Ok(InitialDatum::BoSoliton { c, .. }) => match BoSoliton::new(c, l) {
                Ok(w) => Some(Solution::Bo(w)),
                Err(e) => {
                    issues.push(format!("reference.solution: {e}"));
                    None
                }
            },
            _ => {
                issues.push(format!("reference.solution: cannot parse `{s}`"));
                None
            }
        },
        "hopf" | "break-point" => {
            initial = config::initial_datum(&cfg, l, &mut issues);
            Some(if name == "hopf" { Solution::Hopf } else { Solution::BreakPoint })
        }
        "elliptic-file" => {
            match (&cfg.zdl.q, &cfg.zdl.f_minus) {
                (None, None) => issues.push("zdl.q or zdl.f_minus: one is required by the elliptic-file solution"),
                (Some(_), Some(_)) => issues.push("zdl.q and zdl.f_minus: give only one"),
                (None, Some(f)) if named_f_minus(f).is_none() => {
                    issues.push(format!("zdl.f_minus: unknown `{f}` (expected neg-sech2-left or neg-sech2-right)"))
                }
                _ => {}
            }
            match &cfg.zdl.beta_file {
                None => {
                    issues.push("zdl.beta_file: required by the elliptic-file solution");
                    None
                }
                Some(path) => match BetaProfile::read(path) {
                    Ok(p) => Some(Solution::Elliptic(p)),
                    Err(e) => {
                        issues.push(format!("zdl.beta_file: {}: {e}", path.display()));
                        None
                    }
                },
            }
        }
        other => {
            issues.push(format!(
                "reference.solution: unknown `{other}` (expected kdv-soliton, bo-soliton(c), hopf, break-point or elliptic-file)"
            ));
            None
        }
    };
    let out_dir = issues.require(&cfg.output.dir, "output.dir");
    let _ = config::jobs(&cfg, env_cap, &mut issues);
    issues.finish()?;
    let solution = solution.expect("validated");
    let mut out = Outputs::new(out_dir.expect("validated"));
    let xs: Vec<f64> = (0..points).map(|j| -l + 2.0 * l * j as f64 / points as f64).collect();

    #[derive(Serialize)]
    struct Summary {
        solution: String,
        time: f64,
        points: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        break_point: Option<BreakPoint>,
    }
    let mut break_data = None;
    let table: Option<Vec<Vec<f64>>> = match solution {
        Solution::Kdv => Some(xs.iter().map(|&x| vec![x, kdv_one_soliton(x, t)]).collect()),
        Solution::Bo(w) => Some(xs.iter().map(|&x| vec![x, w.eval(x, t)]).collect()),
        Solution::Hopf => {
            let u0 = initial.as_ref().expect("validated").evaluator(points.max(1), l)?;
            let h = HopfSolver::new(u0, params.lambda, [-l, l])?;
            h.check_time(t).map_err(|e| match e {
                ReferenceError::Multivalued { t, t_c } => CliError::config(format!(
                    "reference: t = {t} is at or past the break time t_c = {t_c:.12}{}",
                    break_time_hint(initial.as_ref().expect("validated"), params.lambda)
                )),
                other => other.into(),
            })?;
            let mut rows = Vec::with_capacity(points);
            for &x in &xs {
                rows.push(vec![x, h.solve(x, t)?]);
            }
            Some(rows)
        }
        Solution::BreakPoint => {
            let u0 = initial.as_ref().expect("validated").evaluator(points.max(1), l)?;
            let bp = break_point(u0, params.lambda, [-l, l])?;
            println!("t_c = {:.15}  x_c = {:.15}  u_c = {:.15}", bp.t_c, bp.x_c, bp.u_c);
            break_data = Some(bp);
            None
        }
        Solution::Elliptic(profile) => {
            let [a, b] = profile.window();
            let mut rows = Vec::new();
            for &x in xs.iter().filter(|&&x| x >= a && x <= b) {
                let beta = profile.interpolate(x).expect("inside the window");
                let q = match (cfg.zdl.q, cfg.zdl.f_minus.as_deref().and_then(named_f_minus)) {
                    (Some(q), _) => q,
                    (None, Some(f)) => q_phase(&beta, f)?,
                    (None, None) => unreachable!("validated"),
                };
                rows.push(vec![x, elliptic_asymptotic_u(x, t, params.eps, &beta, q)?]);
            }
            Some(rows)
        }
    };
    let mut names = Vec::new();
    if let Some(rows) = table {
        out.add("reference.csv", csv_table(&["x", "u"], rows));
        names.push("reference.csv".to_string());
    }
    names.push("manifest.json".to_string());
    let summary = Summary { solution: name, time: t, points, break_point: break_data };
    out.add("manifest.json", Manifest::new("reference", &cfg, names, summary).to_bytes());
    let written = out.commit()?;
    for w in written {
        println!("wrote {}", w.display());
    }
    Ok(())
}
