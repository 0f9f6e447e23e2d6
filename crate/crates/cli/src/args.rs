//! Command-line flags. Each subcommand's flags convert into a plain config struct.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::{CheckConfig, ExperimentConfig, SweepConfig, DEFAULT_H, DEFAULT_OMEGA};

#[derive(Debug, Parser)]
#[command(name = "erkn", version, about = "Energy-drift experiments with ERKN integrators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate one trajectory and write its energy errors as CSV.
    Run(RunArgs),
    /// Report the structural properties of a method and the stepsize assumptions.
    Check(CheckArgs),
    /// Run every method/omega/h combination and write one CSV each plus a summary.
    Sweep(SweepArgs),
}

/// Stepsize and frequency pairs of the four reference experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

impl Preset {
    /// `(h, omega)`.
    pub fn h_omega(self) -> (f64, f64) {
        match self {
            Preset::Fig1 => (0.1, 50.0),
            Preset::Fig2 => (0.1, 200.0),
            Preset::Fig3 => (0.01, 50.0),
            Preset::Fig4 => (0.01, 200.0),
        }
    }
}

/// Explicit flags win over the preset, which wins over the defaults.
fn resolve_h_omega(h: Option<f64>, omega: Option<f64>, preset: Option<Preset>) -> (f64, f64) {
    let (ph, pw) = preset.map_or((DEFAULT_H, DEFAULT_OMEGA), Preset::h_omega);
    (h.unwrap_or(ph), omega.unwrap_or(pw))
}

#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    /// Test problem: fpu or linear.
    #[arg(long, default_value = "fpu")]
    pub problem: String,
    /// Number of stiff springs; the state has 2m positions.
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    #[arg(long, default_value_t = 1000.0)]
    pub t_end: f64,
    /// Record every n-th step (the final step is always recorded).
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// ERKN1..ERKN6, or trig:NAME for the trigonometric integrator conjugate to NAME.
    #[arg(long, default_value = "ERKN2")]
    pub method: String,
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// CSV destination; without it the CSV goes to stdout and the summary to stderr.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

impl RunArgs {
    pub fn into_config(self) -> ExperimentConfig {
        let (h, omega) = resolve_h_omega(self.h, self.omega, self.preset);
        ExperimentConfig {
            method: self.method,
            problem: self.problem.problem,
            m: self.problem.m,
            omega,
            h,
            t_end: self.problem.t_end,
            stride: self.problem.stride,
            output: self.output,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    /// ERKN1..ERKN6.
    pub method: String,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Non-resonance constant in |sin(k h omega / 2)| >= c sqrt(h).
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Lower bound required of h*omega.
    #[arg(long, default_value_t = 0.1)]
    pub c0: f64,
    #[arg(long, default_value_t = 0.1)]
    pub sigma_lo: f64,
    #[arg(long, default_value_t = 10.0)]
    pub sigma_hi: f64,
}

impl CheckArgs {
    pub fn into_config(self) -> CheckConfig {
        let (h, omega) = resolve_h_omega(self.h, self.omega, self.preset);
        CheckConfig {
            method: self.method,
            h,
            omega,
            c: self.c,
            c0: self.c0,
            sigma_lo: self.sigma_lo,
            sigma_hi: self.sigma_hi,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Comma-separated method names.
    #[arg(long, value_delimiter = ',', required = true)]
    pub methods: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "50,200")]
    pub omegas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.1")]
    pub hs: Vec<f64>,
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long)]
    pub out_dir: PathBuf,
}

impl SweepArgs {
    pub fn into_config(self) -> SweepConfig {
        SweepConfig {
            methods: self.methods.into_iter().filter(|m| !m.trim().is_empty()).collect(),
            omegas: self.omegas,
            hs: self.hs,
            problem: self.problem.problem,
            m: self.problem.m,
            t_end: self.problem.t_end,
            stride: self.problem.stride,
            out_dir: self.out_dir,
        }
    }
}
