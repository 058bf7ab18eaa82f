//! Command-line front end.
//!
//! ```text
//! unruh-qfi figure <id> <panel> --out PATH [--format csv|json]
//! unruh-qfi sweep --config PATH [--out PATH]
//! unruh-qfi peaks --config PATH [--tau VALUE]
//! unruh-qfi validate [--only NAME]... [--tol NAME=VALUE]...
//! ```
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage or config error,
//! 3 I/O error, 4 numeric domain error. `UNRUH_QFI_THREADS` caps the worker
//! pool (0 or unset uses every core).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{find_peaks, sweep, AxisName, Peak, SweepAxis};
use crate::config::RunConfig;
use crate::figures::{figure_surface, FigureId, Panel};
use crate::output::{render, Format};
use crate::validate::{run_checks, Tolerances};
use crate::Error;

pub const THREADS_ENV: &str = "UNRUH_QFI_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "unruh-qfi",
    version,
    about = "Quantum Fisher information of acceleration and temperature"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the data grid behind one preset figure panel.
    Figure {
        id: FigureId,
        panel: Panel,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Evaluate the QFI on the grid described by a config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `out` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report peaks of the QFI along axis 1, one slice per axis-2 value.
    Peaks {
        #[arg(long)]
        config: PathBuf,
        /// Restrict to a single time slice.
        #[arg(long)]
        tau: Option<f64>,
    },
    /// Run the built-in cross-checks.
    Validate {
        #[arg(long)]
        only: Vec<String>,
        /// Tolerance override, `NAME=VALUE`.
        #[arg(long, value_parser = parse_tol)]
        tol: Vec<(String, f64)>,
    },
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got '{s}'"))?;
    let v: f64 = value
        .parse()
        .map_err(|_| format!("'{value}' is not a number"))?;
    Ok((name.to_string(), v))
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(PathBuf, std::io::Error),
    Numeric(Error),
    Validation,
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Io(..) => EXIT_IO,
            Failure::Numeric(_) => EXIT_NUMERIC,
            Failure::Validation => EXIT_VALIDATION,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Numeric(e)
    }
}

/// Runs the tool with `args` (including the program name), writing to the
/// given streams, and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut (dyn Write + Send), stderr: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return e.exit_code();
        }
    };
    let pool = match thread_pool() {
        Ok(p) => p,
        Err(f) => return report(f, stderr),
    };
    match pool.install(|| dispatch(cli.command, stdout, stderr)) {
        Ok(()) => EXIT_OK,
        Err(f) => report(f, stderr),
    }
}

fn report(f: Failure, stderr: &mut (dyn Write + Send)) -> i32 {
    let _ = match &f {
        Failure::Usage(msg) => writeln!(stderr, "error: {}", msg.trim_end()),
        Failure::Io(path, e) => writeln!(stderr, "error: {}: {e}", path.display()),
        Failure::Numeric(e) => writeln!(stderr, "error: numeric domain: {e}"),
        Failure::Validation => Ok(()),
    };
    f.code()
}

fn thread_pool() -> Result<rayon::ThreadPool, Failure> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(s) => s.trim().parse::<usize>().map_err(|_| {
            Failure::Usage(format!(
                "{THREADS_ENV} must be a non-negative integer, got '{s}'"
            ))
        })?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::Usage(format!("thread pool: {e}")))
}

fn dispatch(
    cmd: Command,
    stdout: &mut (dyn Write + Send),
    stderr: &mut (dyn Write + Send),
) -> Result<(), Failure> {
    match cmd {
        Command::Figure {
            id,
            panel,
            out,
            format,
        } => {
            let surface = figure_surface(id, panel)?;
            write_file(&out, &render(&surface, format)?)
        }
        Command::Sweep { config, out } => {
            let cfg = load_config(&config)?;
            let out = out.or(cfg.out.clone()).ok_or_else(|| {
                Failure::Usage("no output path: pass --out or set `out` in the config".into())
            })?;
            let surface = sweep(&cfg.template, cfg.axis1, cfg.axis2)?;
            write_file(&out, &render(&surface, cfg.format)?)
        }
        Command::Peaks { config, tau } => {
            let cfg = load_config(&config)?;
            let report = peaks(&cfg, tau)?;
            let mut text = serde_json::to_string_pretty(&report)
                .map_err(|e| Failure::Numeric(Error::NonFinite(e.to_string())))?;
            text.push('\n');
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Io("<stdout>".into(), e))
        }
        Command::Validate { only, tol } => {
            let mut tolerances = Tolerances::default();
            for (name, v) in tol {
                tolerances
                    .set(&name, v)
                    .map_err(|e| Failure::Usage(e.to_string()))?;
            }
            let results = run_checks(&only, &tolerances).map_err(|e| match e {
                Error::InvalidArgument(m) => Failure::Usage(m),
                other => Failure::Numeric(other),
            })?;
            let mut failed = false;
            for r in &results {
                let _ = writeln!(stdout, "{r}");
                if !r.passed {
                    failed = true;
                    let _ = writeln!(
                        stderr,
                        "check {} failed: observed {:e} > bound {:e}",
                        r.name, r.observed, r.bound
                    );
                }
            }
            if failed {
                Err(Failure::Validation)
            } else {
                Ok(())
            }
        }
    }
}

fn load_config(path: &Path) -> Result<RunConfig, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))?;
    RunConfig::from_toml_str(&text).map_err(|e| Failure::Usage(e.to_string()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

#[derive(Debug, Serialize)]
struct PeakSlice {
    value: f64,
    count: usize,
    peaks: Vec<Peak>,
}

#[derive(Debug, Serialize)]
struct PeaksOutput {
    kind: &'static str,
    axis: &'static str,
    slice_axis: &'static str,
    min_prominence: f64,
    max_count: usize,
    slices: Vec<PeakSlice>,
}

fn peaks(cfg: &RunConfig, tau: Option<f64>) -> Result<PeaksOutput, Failure> {
    let mut template = cfg.template;
    let mut slice_axis = cfg.axis2;
    if let Some(t) = tau {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Failure::Usage(format!(
                "--tau must be finite and >= 0, got {t}"
            )));
        }
        match (cfg.axis1.name, cfg.axis2.name) {
            (AxisName::Tau, _) => {
                return Err(Failure::Usage(
                    "--tau cannot fix the peak-search axis".into(),
                ))
            }
            (_, AxisName::Tau) => {
                slice_axis = SweepAxis {
                    name: AxisName::Tau,
                    min: t,
                    max: t,
                    count: 1,
                }
            }
            _ => template.tau = Some(t),
        }
    }
    let xs = cfg.axis1.values();
    let slice_values = if slice_axis.count == 1 {
        vec![slice_axis.min]
    } else {
        slice_axis.values()
    };
    let slices = slice_values
        .into_iter()
        .map(|v| {
            let ys: Vec<f64> = xs
                .par_iter()
                .map(|&x| template.evaluate(&[(cfg.axis1.name, x), (slice_axis.name, v)]))
                .collect::<crate::Result<_>>()?;
            let report = find_peaks(&xs, &ys, cfg.min_prominence)?;
            Ok(PeakSlice {
                value: v,
                count: report.count(),
                peaks: report.peaks,
            })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok(PeaksOutput {
        kind: template.kind.as_str(),
        axis: cfg.axis1.name.as_str(),
        slice_axis: slice_axis.name.as_str(),
        min_prominence: cfg.min_prominence,
        max_count: slices.iter().map(|s| s.count).max().unwrap_or(0),
        slices,
    })
}
