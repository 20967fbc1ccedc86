//! Command-line front end for `svoronoi`.
//!
//! A run is fully described by a [`RunConfig`]; [`execute`] turns it into the
//! rendered output and [`run`] writes that output (atomically when a path is
//! given). JSON outputs embed the config, so a report can be regenerated
//! from itself.

pub mod config;
pub mod render;
pub mod svg;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use svoronoi::exact::expected_fvector_exact;
use svoronoi::harness::{
    compare_exact_vs_mc, estimate_typical_cell, test_beta_prime_identity, verify_counting_identity,
};
use svoronoi::voronoi::sample_tessellation_s2;
use svoronoi::{QuadratureSpec, RngStream};

pub use config::{Command, OutputFormat, RunConfig, DEFAULT_SEED};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid value for {flag}: {message}")]
    Usage { flag: String, message: String },
    #[error(transparent)]
    Library(#[from] svoronoi::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot read report {path}: {message}")]
    Report { path: PathBuf, message: String },
}

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const ERROR: i32 = 1;
    pub const STATISTICAL_FAILURE: i32 = 2;
}

/// Rendered output of a run and whether its statistical check passed.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub body: String,
    pub passed: bool,
}

fn quadrature(config: &RunConfig) -> QuadratureSpec {
    QuadratureSpec {
        rel_tol: config.rel_tol,
        ..QuadratureSpec::default()
    }
}

/// Compute and render the output of a run without writing anything.
pub fn execute(config: &RunConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    let (d, n, reps, seed) = (config.d, config.n, config.replications, config.seed);
    let csv = config.output_format == OutputFormat::Csv;
    let outcome = match config.command {
        Command::Exact => {
            let r = expected_fvector_exact(d, n, &quadrature(config))?;
            let body = if csv {
                render::exact_csv(&r)
            } else {
                render::json(config, &r)
            };
            Outcome { body, passed: true }
        }
        Command::Simulate => {
            let r = estimate_typical_cell(d, n, reps, seed)?;
            let body = if csv {
                render::simulation_csv(&r)
            } else {
                render::json(config, &r)
            };
            Outcome { body, passed: true }
        }
        Command::Compare => {
            let r = compare_exact_vs_mc(d, n, reps, seed, &quadrature(config), config.z_threshold)?;
            let body = if csv {
                render::comparison_csv(&r)
            } else {
                render::json(config, &r)
            };
            Outcome {
                body,
                passed: r.passed,
            }
        }
        Command::Counting => {
            let r = verify_counting_identity(d, n, reps, seed, config.z_threshold)?;
            let body = if csv {
                render::comparison_csv(&r)
            } else {
                render::json(config, &r)
            };
            Outcome {
                body,
                passed: r.passed,
            }
        }
        Command::Identity => {
            let r = test_beta_prime_identity(d, n, reps, seed)?;
            let body = if csv {
                render::test_csv(&r)
            } else {
                render::json(config, &r)
            };
            Outcome {
                passed: !r.rejects_at(config.level),
                body,
            }
        }
        Command::Plot => {
            let t = sample_tessellation_s2(n, &mut RngStream::new(seed, 0))?;
            Outcome {
                body: svg::render(&t),
                passed: true,
            }
        }
    };
    Ok(outcome)
}

/// Write `contents` to `path` through a temporary file in the same
/// directory, renamed into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Execute a run, write its output and return the exit code.
pub fn run(config: &RunConfig) -> Result<i32, CliError> {
    let outcome = execute(config)?;
    match &config.output_path {
        Some(path) => write_atomic(path, &outcome.body)?,
        None => print!("{}", outcome.body),
    }
    Ok(if outcome.passed {
        exit::SUCCESS
    } else {
        exit::STATISTICAL_FAILURE
    })
}

/// Recover the config embedded in a JSON report.
pub fn config_from_report(path: &Path) -> Result<RunConfig, CliError> {
    let err = |message: String| CliError::Report {
        path: path.to_path_buf(),
        message,
    };
    let text = std::fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| err(e.to_string()))?;
    let config = value
        .get("config")
        .ok_or_else(|| err("no embedded config".into()))?;
    serde_json::from_value(config.clone()).map_err(|e| err(e.to_string()))
}

#[derive(Debug, Parser)]
#[command(
    name = "svoronoi",
    version,
    about = "Face counts of random spherical Voronoi tessellations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Exact expected f-vector of the typical cell
    Exact(RunArgs),
    /// Monte Carlo estimate of the typical cell's f-vector
    Simulate(RunArgs),
    /// Exact values against simulation, with z-scores
    Compare(RunArgs),
    /// Chi-square test of the typical cell against the beta' polytope
    Identity(RunArgs),
    /// Tessellation face counts against scaled typical-cell counts (--n is the cell count)
    Counting(RunArgs),
    /// SVG drawing of a tessellation of S^2 (--n is the cell count)
    Plot(RunArgs),
    /// Re-run the config embedded in a JSON report
    Rerun(RerunArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Sphere dimension
    #[arg(long)]
    pub d: Option<usize>,
    /// Number of competitors (cells for `counting` and `plot`)
    #[arg(long, visible_alias = "cells")]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub replications: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Relative tolerance of the quadrature
    #[arg(long, default_value_t = 1e-10)]
    pub rel_tol: f64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Output file (standard output if omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = svoronoi::harness::DEFAULT_Z_THRESHOLD)]
    pub z_threshold: f64,
    /// Significance level for `identity`
    #[arg(long, default_value_t = 1e-3)]
    pub level: f64,
}

#[derive(Debug, Clone, Args)]
pub struct RerunArgs {
    /// JSON report to reproduce
    pub report: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl RunArgs {
    pub fn into_config(self, command: Command) -> RunConfig {
        let (d, n) = match command {
            Command::Plot => (2, 50),
            Command::Counting => (3, 20),
            _ => (3, 6),
        };
        RunConfig {
            command,
            d: self.d.unwrap_or(d),
            n: self.n.unwrap_or(n),
            replications: self.replications,
            seed: self.seed,
            rel_tol: self.rel_tol,
            output_format: self.format,
            z_threshold: self.z_threshold,
            level: self.level,
            output_path: self.out,
        }
    }
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let (command, args) = match self.command {
            CliCommand::Exact(a) => (Command::Exact, a),
            CliCommand::Simulate(a) => (Command::Simulate, a),
            CliCommand::Compare(a) => (Command::Compare, a),
            CliCommand::Identity(a) => (Command::Identity, a),
            CliCommand::Counting(a) => (Command::Counting, a),
            CliCommand::Plot(a) => (Command::Plot, a),
            CliCommand::Rerun(a) => {
                let mut config = config_from_report(&a.report)?;
                config.output_path = a.out;
                return Ok(config);
            }
        };
        Ok(args.into_config(command))
    }
}

/// Size the global worker pool from `SVORONOI_THREADS`, if set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("SVORONOI_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage {
            flag: "SVORONOI_THREADS".into(),
            message: format!("expected a positive integer, got {value:?}"),
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage {
            flag: "SVORONOI_THREADS".into(),
            message: e.to_string(),
        })
}
