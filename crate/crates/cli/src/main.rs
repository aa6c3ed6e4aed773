mod commands;
mod manifest;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use spectra::algebraic::DEFAULT_TOLERANCE;
use spectra::spectrum::DEFAULT_STATE_BUDGET;
use spectra::SpectraError;
use thiserror::Error;

use manifest::RunManifest;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Spectra(e) => e.exit_code() as u8,
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "spectra", version, about = "Spectra of real bases and their discreteness")]
struct Cli {
    /// Bit budget for certified classification.
    #[arg(long, global = true, env = "SPECTRA_DEFAULT_PRECISION", default_value_t = 256)]
    precision: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, default_value_t = DEFAULT_STATE_BUDGET)]
    budget_states: usize,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

/// Base selection: `--poly` with a root selector, or a decimal `--base`.
#[derive(Clone, Debug, Args, Serialize)]
pub struct BaseArgs {
    /// Ascending integer coefficients, e.g. `-1,-1,1`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "base")]
    pub poly: Option<String>,
    /// Index among the real roots above 1, ascending.
    #[arg(long, requires = "poly", conflicts_with = "interval")]
    pub root_index: Option<usize>,
    /// Isolating interval `lo..hi`.
    #[arg(long, requires = "poly", allow_hyphen_values = true)]
    pub interval: Option<String>,
    /// Decimal base, handled numerically; an integer is exact.
    #[arg(long)]
    pub base: Option<String>,
    /// Comparison tolerance for decimal bases.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KindArg {
    X,
    Y,
    A,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct WindowArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub base: BaseArgs,
    #[arg(long, default_value_t = 1)]
    pub m: i64,
    #[arg(long, value_enum, default_value_t = KindArg::X)]
    pub kind: KindArg,
    /// Degree cap; required for `y` and `a`.
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long)]
    pub bound: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpandMode {
    Greedy,
    Lazy,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
enum Command {
    /// Pisot classification; with `--m`, also the discreteness verdict.
    Classify {
        #[command(flatten)]
        #[serde(flatten)]
        base: BaseArgs,
        #[arg(long)]
        m: Option<i64>,
    },
    /// Sorted window of X, Y or A with digit witnesses.
    Spectrum(WindowArgs),
    /// Gap statistics of a window.
    Gaps {
        #[command(flatten)]
        #[serde(flatten)]
        window: WindowArgs,
        #[arg(long, default_value_t = 0.5)]
        tail_fraction: f64,
        #[arg(long, default_value_t = 16)]
        bins: usize,
        /// Count gaps equal to this value.
        #[arg(long)]
        count_equal: Option<f64>,
    },
    /// Smallest positive value of height-m polynomials by depth.
    Minpos {
        #[command(flatten)]
        #[serde(flatten)]
        base: BaseArgs,
        #[arg(long, default_value_t = 1)]
        m: i64,
        #[arg(long, default_value_t = 24)]
        max_depth: usize,
    },
    /// Greedy or lazy constrained digit expansion.
    Expand {
        #[command(flatten)]
        #[serde(flatten)]
        base: BaseArgs,
        #[arg(long, default_value_t = 1)]
        m: i64,
        #[arg(long, value_enum, default_value_t = ExpandMode::Greedy)]
        mode: ExpandMode,
        /// Greedy target, decimal or fraction.
        #[arg(long, visible_alias = "target", default_value = "1")]
        x: String,
        /// Lazy sign pattern, e.g. `explicit:1,2;eventual:periodic:01;threshold:3`.
        #[arg(long, default_value = "eventual:in")]
        pattern: String,
        #[arg(long, default_value_t = 40)]
        horizon: usize,
    },
    /// Digit sequence vanishing at q with controlled partial sums at p.
    Witness {
        #[command(flatten)]
        #[serde(flatten)]
        base: BaseArgs,
        #[arg(long, default_value_t = 1)]
        m: i64,
        /// Companion point `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, default_value_t = 60)]
        horizon: usize,
    },
    /// Covering radius of A(q) in [-B, B] by degree.
    Aq {
        #[command(flatten)]
        #[serde(flatten)]
        base: BaseArgs,
        /// Comma-separated degrees.
        #[arg(long)]
        degrees: String,
        #[arg(long, default_value_t = 2.0)]
        bound: f64,
    },
    /// Registered experiments; `list` prints the registry.
    Reproduce {
        #[arg(default_value = "all")]
        case: String,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::Spectrum(_) => "spectrum",
            Command::Gaps { .. } => "gaps",
            Command::Minpos { .. } => "minpos",
            Command::Expand { .. } => "expand",
            Command::Witness { .. } => "witness",
            Command::Aq { .. } => "aq",
            Command::Reproduce { .. } => "reproduce",
        }
    }
}

pub struct Settings {
    pub precision: u32,
    pub budget: usize,
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let settings = Settings {
        precision: cli.precision,
        budget: cli.budget_states,
    };
    let mut manifest = RunManifest::new(
        cli.command.name(),
        serde_json::to_value(&cli.command)?,
        cli.precision,
        cli.budget_states,
        cli.threads,
    );
    let start = Instant::now();
    let out = commands::dispatch(&cli.command, &settings)?;
    manifest.wall_time_ms = start.elapsed().as_millis() as u64;
    output::emit(&manifest, &out, cli.format, cli.out.as_deref())?;
    Ok(out.exhausted)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("spectra: state budget exhausted; output is partial");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("spectra: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
