//! Command-line front end for energy-drift experiments with ERKN integrators.
//!
//! The `erkn` binary is a thin wrapper around [`dispatch`]; the commands are
//! exposed here so they can be driven from tests without a subprocess.

mod args;
mod format;

use std::collections::HashSet;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use erkn::verify::{assess, drift_series, drift_stats, AssumptionConfig, DriftSeries, DriftStats};
use erkn::{
    check_symmetry, check_symplecticity, default_grid, fpu_initial, fpu_system, linear_system, upsilon_from,
    ErknMethod64, Integrator, Partition64, State64, System64, TrigMethod64, METHOD_NAMES,
};
use rayon::prelude::*;
use thiserror::Error;

pub use args::{CheckArgs, Cli, Command, Preset, ProblemArgs, RunArgs, SweepArgs};
pub use format::{fmt_g17, render_csv, CSV_HEADER, SUMMARY_HEADER};

pub const DEFAULT_H: f64 = 0.1;
pub const DEFAULT_OMEGA: f64 = 50.0;

const TRIG_PREFIX: &str = "trig:";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Numerics(#[from] erkn::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("trajectory became non-finite at step {step} (t = {t}); output holds the samples before it")]
    BlowUp { step: usize, t: f64 },

    #[error("{failed} of {total} combinations failed ({blow_ups} blow-ups, {io} I/O errors)")]
    Sweep {
        total: usize,
        failed: usize,
        blow_ups: usize,
        io: usize,
    },
}

impl CliError {
    /// 2 usage or configuration, 3 I/O, 4 blow-up.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Numerics(_) => 2,
            CliError::Io { .. } => 3,
            CliError::BlowUp { .. } => 4,
            CliError::Sweep { io, blow_ups, .. } => {
                if *io > 0 {
                    3
                } else if *blow_ups > 0 {
                    4
                } else {
                    2
                }
            }
        }
    }

    fn io(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> Self {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}

/// One trajectory experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// A registry name or `trig:NAME`.
    pub method: String,
    /// `fpu` or `linear`.
    pub problem: String,
    pub m: usize,
    pub omega: f64,
    pub h: f64,
    pub t_end: f64,
    pub stride: usize,
    /// CSV destination; `None` writes to stdout.
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            method: "ERKN2".into(),
            problem: "fpu".into(),
            m: 3,
            omega: DEFAULT_OMEGA,
            h: DEFAULT_H,
            t_end: 1000.0,
            stride: 1,
            output: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let usage = |msg: String| Err(CliError::Usage(msg));
        if !(self.h > 0.0 && self.h.is_finite()) {
            return usage(format!("--h must be positive and finite, got {}", self.h));
        }
        if !(self.t_end >= self.h && self.t_end.is_finite()) {
            return usage(format!(
                "--t-end must be finite and at least h = {}, got {}",
                self.h, self.t_end
            ));
        }
        if self.stride == 0 {
            return usage("--stride must be at least 1".into());
        }
        if self.m == 0 {
            return usage("--m must be at least 1".into());
        }
        if !(self.omega >= 0.0 && self.omega.is_finite()) {
            return usage(format!("--omega must be finite and non-negative, got {}", self.omega));
        }
        Problem::parse(&self.problem)?;
        resolve_method(&self.method)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Problem {
    Fpu,
    Linear,
}

impl Problem {
    fn parse(name: &str) -> Result<Self, CliError> {
        match name.to_ascii_lowercase().as_str() {
            "fpu" => Ok(Problem::Fpu),
            "linear" => Ok(Problem::Linear),
            _ => Err(CliError::Usage(format!(
                "unknown problem '{name}'; valid problems: fpu, linear"
            ))),
        }
    }

    /// The system and its standard initial state. The linear problem reuses the
    /// FPU data with the nonlinearity switched off.
    fn build(self, m: usize, omega: f64) -> Result<(System64, State64), CliError> {
        let sys = match self {
            Problem::Fpu => fpu_system(m, omega)?,
            Problem::Linear => linear_system(Partition64::new(m, m, omega)?),
        };
        Ok((sys, fpu_initial(m, omega)))
    }
}

/// Every name accepted by `--method`.
pub fn valid_methods() -> Vec<String> {
    let mut names: Vec<String> = METHOD_NAMES.iter().map(|s| s.to_string()).collect();
    for name in METHOD_NAMES {
        let m = ErknMethod64::by_name(name).expect("registry name");
        if upsilon_from(&m).is_ok() {
            names.push(format!("{TRIG_PREFIX}{name}"));
        }
    }
    names
}

fn unknown_method(name: &str) -> CliError {
    CliError::Usage(format!(
        "unknown method '{name}'; valid methods: {}",
        valid_methods().join(", ")
    ))
}

/// Resolves `ERKN1..ERKN6` (case-insensitive) or `trig:NAME`.
pub fn resolve_method(name: &str) -> Result<Box<dyn Integrator<f64>>, CliError> {
    if let Some(base) = name.strip_prefix(TRIG_PREFIX) {
        let m = ErknMethod64::by_name(base).ok_or_else(|| unknown_method(name))?;
        let tm = TrigMethod64::from_erkn(&m).map_err(|e| {
            CliError::Usage(format!(
                "method '{name}' has no trigonometric form ({}: {e}); valid methods: {}",
                e.kind(),
                valid_methods().join(", ")
            ))
        })?;
        return Ok(Box::new(tm));
    }
    ErknMethod64::by_name(name)
        .map(|m| Box::new(m) as Box<dyn Integrator<f64>>)
        .ok_or_else(|| unknown_method(name))
}

/// A finished (or aborted) trajectory with its drift summary.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub series: DriftSeries<f64>,
    pub stats: DriftStats<f64>,
}

/// Integrates the configured trajectory without writing anything.
pub fn simulate(cfg: &ExperimentConfig) -> Result<RunOutcome, CliError> {
    cfg.validate()?;
    let method = resolve_method(&cfg.method)?;
    let (sys, s0) = Problem::parse(&cfg.problem)?.build(cfg.m, cfg.omega)?;
    let series = drift_series(&*method, &sys, &s0, cfg.h, cfg.t_end, cfg.stride)?;
    let stats = drift_stats(&series.records);
    Ok(RunOutcome { series, stats })
}

fn write_summary(out: &mut dyn Write, cfg: &ExperimentConfig, outcome: &RunOutcome) -> io::Result<()> {
    let s = &outcome.stats;
    writeln!(out, "method: {}", cfg.method)?;
    writeln!(out, "problem: {} (m = {}, omega = {})", cfg.problem, cfg.m, cfg.omega)?;
    writeln!(
        out,
        "h: {}  t_end: {}  samples: {}",
        cfg.h,
        cfg.t_end,
        outcome.series.records.len()
    )?;
    writeln!(out, "max_dH: {:e}", s.max_dh)?;
    writeln!(out, "max_dI: {:e}", s.max_di)?;
    writeln!(out, "window_ratio_H: {}", s.window_ratio_h)?;
    writeln!(out, "window_ratio_I: {}", s.window_ratio_i)?;
    if let Some(b) = outcome.series.blow_up {
        writeln!(out, "blow-up: step {} (t = {})", b.step, b.t)?;
    }
    Ok(())
}

fn blow_up_error(series: &DriftSeries<f64>) -> Result<(), CliError> {
    match series.blow_up {
        Some(b) => Err(CliError::BlowUp { step: b.step, t: b.t }),
        None => Ok(()),
    }
}

/// `run`: writes the CSV to `cfg.output` (or `stdout`) and the drift summary to
/// `stdout` (or `stderr` when the CSV occupies stdout).
pub fn cmd_run<'a>(
    cfg: &ExperimentConfig,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
) -> Result<(), CliError> {
    let outcome = simulate(cfg)?;
    let csv = render_csv(&outcome.series.records);
    let summary_sink = match &cfg.output {
        Some(path) => {
            fs::write(path, csv).map_err(CliError::io(path))?;
            stdout
        }
        None => {
            stdout.write_all(csv.as_bytes()).map_err(CliError::io("<stdout>"))?;
            stderr
        }
    };
    write_summary(summary_sink, cfg, &outcome).map_err(CliError::io("<stdout>"))?;
    blow_up_error(&outcome.series)
}

/// Inputs of the `check` report.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckConfig {
    pub method: String,
    pub h: f64,
    pub omega: f64,
    pub c: f64,
    pub c0: f64,
    pub sigma_lo: f64,
    pub sigma_hi: f64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        let a = AssumptionConfig::<f64>::default();
        Self {
            method: "ERKN2".into(),
            h: DEFAULT_H,
            omega: DEFAULT_OMEGA,
            c: a.c,
            c0: a.c0,
            sigma_lo: a.sigma_lo,
            sigma_hi: a.sigma_hi,
        }
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

fn value_or_kind(r: &erkn::Result<f64>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("undefined ({})", e.kind()),
    }
}

/// `check`: structural conditions of the method and the stepsize assumptions.
/// Informational only; fails solely on an unknown method or invalid numbers.
pub fn cmd_check(cfg: &CheckConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let m = ErknMethod64::by_name(&cfg.method).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown method '{}'; valid methods: {}",
            cfg.method,
            METHOD_NAMES.join(", ")
        ))
    })?;
    if !(cfg.h > 0.0 && cfg.h.is_finite() && cfg.omega >= 0.0 && cfg.omega.is_finite()) {
        return Err(CliError::Usage(format!(
            "need h > 0 and omega >= 0, got h = {}, omega = {}",
            cfg.h, cfg.omega
        )));
    }
    let grid = default_grid::<f64>();
    let sym = check_symmetry(&m, &grid);
    let spl = check_symplecticity(&m, &grid);
    let acfg = AssumptionConfig {
        c: cfg.c,
        c0: cfg.c0,
        sigma_lo: cfg.sigma_lo,
        sigma_hi: cfg.sigma_hi,
    };
    let report = assess(&m, cfg.h, cfg.omega, &acfg);
    let nu = report.h_omega;

    let mut w = || -> io::Result<()> {
        writeln!(out, "method: {} (c1 = {})", m.name(), m.c1())?;
        writeln!(
            out,
            "symmetric: {} (max residual {:e})",
            verdict(sym.pass),
            sym.max_residual
        )?;
        writeln!(
            out,
            "symplectic: {} (d1 = {}, max residual {:e})",
            verdict(spl.pass),
            spl.d1.unwrap_or(f64::NAN),
            spl.max_residual
        )?;
        match upsilon_from(&m) {
            Ok(ups) => writeln!(out, "upsilon: available (at h*omega: {})", value_or_kind(&ups.eval(nu)))?,
            Err(e) => writeln!(out, "upsilon: unavailable ({}: {e})", e.kind())?,
        }
        writeln!(
            out,
            "stepsize bound h*omega >= {}: {} (h*omega = {nu})",
            report.c0,
            verdict(report.stepsize_bound)
        )?;
        writeln!(out, "non-resonance: N = {} (c = {})", report.max_n, report.c)?;
        writeln!(out, "sigma(0): {}", value_or_kind(&report.sigma_at_0))?;
        writeln!(out, "sigma(h*omega): {}", value_or_kind(&report.sigma_at_nu))?;
        writeln!(
            out,
            "sigma bound [{}, {}]: {}",
            cfg.sigma_lo,
            cfg.sigma_hi,
            verdict(report.sigma_pass)
        )
    };
    w().map_err(CliError::io("<stdout>"))
}

/// Inputs of `sweep`: the cross product of methods, frequencies and stepsizes.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub methods: Vec<String>,
    pub omegas: Vec<f64>,
    pub hs: Vec<f64>,
    pub problem: String,
    pub m: usize,
    pub t_end: f64,
    pub stride: usize,
    pub out_dir: PathBuf,
}

/// `<method>_w<omega>_h<h>.csv`, with `:` replaced so trig names are portable.
pub fn sweep_file_name(method: &str, omega: f64, h: f64) -> String {
    format!("{}_w{omega}_h{h}.csv", method.replace(':', "-"))
}

fn no_duplicates<T: std::fmt::Display>(what: &str, items: &[T]) -> Result<(), CliError> {
    let mut seen = HashSet::new();
    for item in items {
        if !seen.insert(item.to_string()) {
            return Err(CliError::Usage(format!("{what} lists {item} twice")));
        }
    }
    Ok(())
}

struct SweepRow {
    cfg: ExperimentConfig,
    stats: Option<DriftStats<f64>>,
    failure: Option<CliError>,
}

fn sweep_one(cfg: ExperimentConfig) -> SweepRow {
    let result = simulate(&cfg).and_then(|outcome| {
        let path = cfg.output.as_deref().expect("sweep sets an output path");
        fs::write(path, render_csv(&outcome.series.records)).map_err(CliError::io(path))?;
        blow_up_error(&outcome.series)?;
        Ok(outcome.stats)
    });
    let (stats, failure) = match result {
        Ok(stats) => (Some(stats), None),
        // the energy error grew without bound
        Err(e @ CliError::BlowUp { .. }) => (
            Some(DriftStats {
                max_dh: f64::INFINITY,
                max_di: f64::INFINITY,
                window_ratio_h: f64::INFINITY,
                window_ratio_i: f64::INFINITY,
            }),
            Some(e),
        ),
        Err(e) => (None, Some(e)),
    };
    SweepRow { cfg, stats, failure }
}

/// `sweep`: one CSV per combination and `summary.csv` in `out_dir`.
///
/// Combinations run in parallel; the summary lists them in input order
/// (methods, then omegas, then hs). A combination that blew up gets `inf`
/// metrics, one that failed otherwise gets `nan`.
pub fn cmd_sweep(cfg: &SweepConfig, out: &mut dyn Write) -> Result<(), CliError> {
    if cfg.methods.is_empty() || cfg.omegas.is_empty() || cfg.hs.is_empty() {
        return Err(CliError::Usage("sweep needs at least one method, omega and h".into()));
    }
    no_duplicates("--methods", &cfg.methods)?;
    no_duplicates("--omegas", &cfg.omegas)?;
    no_duplicates("--hs", &cfg.hs)?;

    let mut combos = Vec::with_capacity(cfg.methods.len() * cfg.omegas.len() * cfg.hs.len());
    for method in &cfg.methods {
        for &omega in &cfg.omegas {
            for &h in &cfg.hs {
                let c = ExperimentConfig {
                    method: method.clone(),
                    problem: cfg.problem.clone(),
                    m: cfg.m,
                    omega,
                    h,
                    t_end: cfg.t_end,
                    stride: cfg.stride,
                    output: Some(cfg.out_dir.join(sweep_file_name(method, omega, h))),
                };
                c.validate()?;
                combos.push(c);
            }
        }
    }
    fs::create_dir_all(&cfg.out_dir).map_err(CliError::io(&cfg.out_dir))?;

    let rows: Vec<SweepRow> = combos.into_par_iter().map(sweep_one).collect();

    let mut summary = String::from(SUMMARY_HEADER);
    summary.push('\n');
    let (mut failed, mut blow_ups, mut io_errors) = (0, 0, 0);
    let mut log = String::new();
    for row in &rows {
        let metrics = row.stats.map_or([f64::NAN; 4], |s| {
            [s.max_dh, s.max_di, s.window_ratio_h, s.window_ratio_i]
        });
        summary.push_str(&format!("{},{},{},", row.cfg.method, row.cfg.omega, row.cfg.h));
        summary.push_str(&metrics.map(fmt_g17).join(","));
        summary.push('\n');

        let label = format!("{} omega={} h={}", row.cfg.method, row.cfg.omega, row.cfg.h);
        match &row.failure {
            None => log.push_str(&format!("{label}: max_dH {:e}\n", metrics[0])),
            Some(e) => {
                failed += 1;
                match e {
                    CliError::BlowUp { .. } => blow_ups += 1,
                    CliError::Io { .. } => io_errors += 1,
                    _ => {}
                }
                log.push_str(&format!("{label}: FAILED: {e}\n"));
            }
        }
    }
    let summary_path = cfg.out_dir.join("summary.csv");
    fs::write(&summary_path, summary).map_err(CliError::io(&summary_path))?;
    out.write_all(log.as_bytes()).map_err(CliError::io("<stdout>"))?;

    if failed > 0 {
        return Err(CliError::Sweep {
            total: rows.len(),
            failed,
            blow_ups,
            io: io_errors,
        });
    }
    Ok(())
}

/// Runs a parsed command line.
pub fn dispatch(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Run(a) => cmd_run(&a.into_config(), stdout, stderr),
        Command::Check(a) => cmd_check(&a.into_config(), stdout),
        Command::Sweep(a) => cmd_sweep(&a.into_config(), stdout),
    }
}

/// Reads a CSV written by this crate back into rows of numbers, skipping the header.
pub fn read_csv_rows(path: &Path) -> Result<Vec<Vec<f64>>, CliError> {
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    text.lines()
        .skip(1)
        .map(|line| {
            line.split(',')
                .map(|field| {
                    field
                        .parse()
                        .map_err(|_| CliError::Usage(format!("{}: bad number '{field}'", path.display())))
                })
                .collect()
        })
        .collect()
}
