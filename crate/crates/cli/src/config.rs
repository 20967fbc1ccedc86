use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Exact,
    Simulate,
    Compare,
    Identity,
    Counting,
    Plot,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// Everything a run depends on. The output path is not serialized.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub d: usize,
    /// Competitors for `exact`, `simulate`, `compare` and `identity`; cells
    /// for `counting` and `plot`.
    pub n: usize,
    pub replications: u64,
    pub seed: u64,
    pub rel_tol: f64,
    pub output_format: OutputFormat,
    pub z_threshold: f64,
    /// Significance level of the `identity` test.
    pub level: f64,
    #[serde(skip)]
    pub output_path: Option<PathBuf>,
}

pub const DEFAULT_SEED: u64 = 42;

fn invalid(flag: &str, msg: String) -> CliError {
    CliError::Usage {
        flag: flag.to_string(),
        message: msg,
    }
}

impl RunConfig {
    /// Check parameter ranges against the target operation.
    pub fn validate(&self) -> Result<(), CliError> {
        let (d, n) = (self.d, self.n);
        if self.command == Command::Plot {
            if d != 2 {
                return Err(invalid(
                    "--d",
                    format!("plots are drawn on S^2 only, got d={d}"),
                ));
            }
            if n < 4 {
                return Err(invalid(
                    "--n",
                    format!("a plot needs at least 4 cells, got {n}"),
                ));
            }
            return Ok(());
        }
        if d < 2 {
            return Err(invalid(
                "--d",
                format!("dimension must be at least 2, got {d}"),
            ));
        }
        match self.command {
            Command::Counting => {
                if n < d + 2 {
                    return Err(invalid(
                        "--n",
                        format!("need at least d + 2 = {} cells, got {n}", d + 2),
                    ));
                }
            }
            _ => {
                if n < d + 1 {
                    return Err(invalid(
                        "--n",
                        format!("need at least d + 1 = {} competitors, got {n}", d + 1),
                    ));
                }
            }
        }
        let min_reps = match self.command {
            Command::Simulate | Command::Compare | Command::Counting => 100,
            Command::Identity => 1000,
            Command::Exact | Command::Plot => 0,
        };
        if self.replications < min_reps {
            return Err(invalid(
                "--replications",
                format!("need at least {min_reps}, got {}", self.replications),
            ));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(invalid(
                "--rel-tol",
                format!("must lie in (0, 1), got {}", self.rel_tol),
            ));
        }
        if !(self.z_threshold > 0.0) {
            return Err(invalid(
                "--z-threshold",
                format!("must be positive, got {}", self.z_threshold),
            ));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(invalid(
                "--level",
                format!("must lie in (0, 1), got {}", self.level),
            ));
        }
        Ok(())
    }
}
