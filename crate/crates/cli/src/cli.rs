use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{Config, ConvergeSection, ModelSection, OutputSection, ReferenceSection, SolverSection, ZdlSection};
use crate::output::VERSION;

/// Periodic fractional KdV solver: u_t + λ u u_x − ε² D^α u_x = 0 on [−L, L).
#[derive(Debug, Parser)]
#[command(name = "fkdv", version = VERSION)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate one initial datum and write snapshots, invariants and a manifest.
    #[command(allow_negative_numbers = true)]
    Solve(RunArgs),
    /// Convergence table for a named setup (kdv-soliton, bo-soliton, frac-sine).
    #[command(allow_negative_numbers = true)]
    Converge(ConvergeArgs),
    /// Zero-dispersion sweep: sup error against a reference for each ε.
    #[command(allow_negative_numbers = true)]
    Zdl(ZdlArgs),
    /// Invariant series of a run, recorded at every step.
    #[command(allow_negative_numbers = true)]
    Invariants(RunArgs),
    /// Evaluate an analytic or asymptotic solution on a uniform grid.
    #[command(allow_negative_numbers = true)]
    Reference(ReferenceArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// TOML config file, or a manifest.json from an earlier run.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Number of retained modes N (2N+1 coefficients).
    #[arg(long)]
    pub nmodes: Option<usize>,
    /// Time step; defaults to 1/(N‖u₀‖∞) for runs and 1/(8N‖u₀‖∞) for sweeps.
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub tfinal: Option<f64>,
    /// Domain is [−L, L).
    #[arg(long)]
    pub half_length: Option<f64>,
    /// sech2 | sine(a,k) | kdv-soliton | bo-soliton(c[,L]) | samples-file(path)
    #[arg(long)]
    pub initial: Option<String>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Worker threads (capped by FKDV_NUM_THREADS).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Published resolution instead of desk scale.
    #[arg(long)]
    pub full: bool,
    #[arg(long)]
    pub zeta: Option<f64>,
    #[arg(long)]
    pub fp_tolerance: Option<f64>,
    #[arg(long)]
    pub fp_max_iters: Option<usize>,
    /// Refuse steps above the CFL bound instead of warning.
    #[arg(long)]
    pub enforce_cfl: bool,
}

impl Common {
    pub fn overrides(&self) -> Config {
        Config {
            initial: self.initial.clone(),
            jobs: self.jobs,
            full: self.full.then_some(true),
            model: ModelSection { alpha: self.alpha, eps: self.eps, lambda: self.lambda, half_length: self.half_length },
            solver: SolverSection {
                n_modes: self.nmodes,
                dt: self.dt,
                t_final: self.tfinal,
                fp_tolerance: self.fp_tolerance,
                fp_max_iters: self.fp_max_iters,
                zeta: self.zeta,
                enforce_cfl: self.enforce_cfl.then_some(true),
            },
            output: OutputSection { dir: self.out_dir.clone(), snapshot_times: None },
            ..Config::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated snapshot times in [0, T].
    #[arg(long, value_delimiter = ',')]
    pub snapshots: Option<Vec<f64>>,
}

impl RunArgs {
    pub fn overrides(&self) -> Config {
        let mut c = self.common.overrides();
        c.output.snapshot_times = self.snapshots.clone();
        c
    }
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub setup: Option<String>,
    /// Comma-separated mode counts.
    #[arg(long, value_delimiter = ',')]
    pub nlist: Option<Vec<usize>>,
    /// Modes of the self-reference run (frac-sine only).
    #[arg(long)]
    pub reference_modes: Option<usize>,
}

impl ConvergeArgs {
    pub fn overrides(&self) -> Config {
        Config {
            converge: ConvergeSection {
                setup: self.setup.clone(),
                n_list: self.nlist.clone(),
                reference_modes: self.reference_modes,
            },
            ..self.common.overrides()
        }
    }
}

#[derive(Debug, Args)]
pub struct EllipticArgs {
    /// CSV with columns x, beta1, beta2, beta3.
    #[arg(long)]
    pub beta_file: Option<PathBuf>,
    /// Frozen phase q.
    #[arg(long)]
    pub q: Option<f64>,
    /// Named inverse branch for computing q pointwise: neg-sech2-left | neg-sech2-right.
    #[arg(long)]
    pub f_minus: Option<String>,
}

#[derive(Debug, Args)]
pub struct ZdlArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated ε values.
    #[arg(long, value_delimiter = ',')]
    pub eps_list: Option<Vec<f64>>,
    #[arg(long)]
    pub t_eval: Option<f64>,
    /// hopf | elliptic-file | exact
    #[arg(long)]
    pub reference: Option<String>,
    #[command(flatten)]
    pub elliptic: EllipticArgs,
    /// Comparison window `a,b`.
    #[arg(long, value_delimiter = ',', num_args = 2)]
    pub window: Option<Vec<f64>>,
}

impl ZdlArgs {
    pub fn overrides(&self) -> Config {
        Config {
            zdl: ZdlSection {
                eps_list: self.eps_list.clone(),
                t_eval: self.t_eval,
                reference: self.reference.clone(),
                beta_file: self.elliptic.beta_file.clone(),
                q: self.elliptic.q,
                f_minus: self.elliptic.f_minus.clone(),
                window: self.window.as_ref().map(|w| [w[0], w[1]]),
            },
            ..self.common.overrides()
        }
    }
}

#[derive(Debug, Args)]
pub struct ReferenceArgs {
    #[command(flatten)]
    pub common: Common,
    /// kdv-soliton | bo-soliton(c) | hopf | break-point | elliptic-file
    #[arg(long)]
    pub solution: Option<String>,
    #[arg(long)]
    pub time: Option<f64>,
    /// Number of uniform points on [−L, L).
    #[arg(long)]
    pub points: Option<usize>,
    #[command(flatten)]
    pub elliptic: EllipticArgs,
}

impl ReferenceArgs {
    pub fn overrides(&self) -> Config {
        Config {
            reference: ReferenceSection { solution: self.solution.clone(), time: self.time, points: self.points },
            zdl: ZdlSection {
                beta_file: self.elliptic.beta_file.clone(),
                q: self.elliptic.q,
                f_minus: self.elliptic.f_minus.clone(),
                ..ZdlSection::default()
            },
            ..self.common.overrides()
        }
    }
}
