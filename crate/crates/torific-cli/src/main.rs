//! `torific` — classify 1-D dually flat inputs by curvature and certify the
//! associated space-form models.
//!
//! Exit codes: 0 success (non-toric classifications included), 2 parse error,
//! 3 numerical failure (non-constant curvature, fit mismatch, ...), 4
//! certification residual above tolerance.

// `!(x < y)` comparisons are NaN-rejecting on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod input;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};

use torific::classify::GridSpec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_CERTIFICATION: i32 = 4;

#[derive(Parser)]
#[command(name = "torific", version, about = "Curvature classification and torification certification for 1-D dually flat inputs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Classify inputs: curvature constant, canonical form, toricity, model map.
    Classify(CommonArgs),
    /// Certify the space-form model of a toric input (pullback, deck,
    /// equivariance, Kähler basis, lattice invariance).
    Verify(VerifyArgs),
    /// Reduce a finite family (merge equal F-values) and emit the reduced spec.
    Reduce(CommonArgs),
    /// Test two finite families for affine equivalence and report the witness.
    Equiv(CommonArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
pub struct CommonArgs {
    /// Built-in input, e.g. binomial:4, poisson, negative_binomial:2,
    /// categorical2, model:0.5 (repeatable).
    #[arg(long = "builtin")]
    pub builtins: Vec<String>,

    /// Synthetic closed-form metric, e.g. const, exp:1:0, cosh_sq:0.25:0:-0.5,
    /// sinh_sq:A:B:LAMBDA[:EPS], inv_sq:B:LAMBDA, cos_sq:A:B:LAMBDA (repeatable).
    #[arg(long = "metric")]
    pub metrics: Vec<String>,

    /// Evaluation grid LO:HI:N (intersected with each input's domain).
    #[arg(long, default_value = "-8:8:101", value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: GridSpec,

    /// Absolute tolerance for the curvature constancy decision.
    #[arg(long = "tol-constancy", default_value_t = 1e-7, value_parser = positive_tol)]
    pub tol_constancy: f64,

    /// Relative tolerance for canonical-form reconstruction and the model
    /// pullback identity.
    #[arg(long = "tol-fit", default_value_t = 1e-6, value_parser = positive_tol)]
    pub tol_fit: f64,

    /// Tolerance for the Kähler PDE residuals.
    #[arg(long = "tol-pde", default_value_t = 1e-8, value_parser = positive_tol)]
    pub tol_pde: f64,

    /// Tolerance for the pullback-isometry residual.
    #[arg(long = "tol-pullback", default_value_t = 1e-8, value_parser = positive_tol)]
    pub tol_pullback: f64,

    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,

    /// Seed for the randomized sample suites.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Family spec files (JSON).
    pub files: Vec<std::path::PathBuf>,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Override the target space-form constant (defaults to the classified c).
    #[arg(long)]
    pub c: Option<f64>,

    /// Use the model metric of this constant as the input.
    #[arg(long = "metric-c")]
    pub metric_c: Option<f64>,
}

fn positive_tol(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| "not a number".to_string())?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err("tolerance must be positive".into())
    }
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err("expected LO:HI:N".into());
    }
    let lo: f64 = parts[0].parse().map_err(|_| "bad LO")?;
    let hi: f64 = parts[1].parse().map_err(|_| "bad HI")?;
    let count: usize = parts[2].parse().map_err(|_| "bad N")?;
    if !(lo < hi) {
        return Err("need LO < HI".into());
    }
    if count < 11 {
        return Err("need at least 11 grid points".into());
    }
    Ok(GridSpec { lo, hi, count })
}

/// Failures that abort a command, bucketed by exit code.
#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }

    pub fn from_lib(context: &str, e: torific::Error) -> Self {
        use torific::Error as E;
        let msg = format!("{context}: {e}");
        match e {
            E::Json(_)
            | E::Spec(_)
            | E::Parameter(_)
            | E::SampleSpaceTooSmall(_)
            | E::DuplicateLabel(_)
            | E::LengthMismatch { .. }
            | E::NonFinite(_)
            | E::ConstantStatistic { .. } => CliError::Parse(msg),
            _ => CliError::Numeric(msg),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Classify(args) => commands::cmd_classify(&args),
        Command::Verify(args) => commands::cmd_verify(&args),
        Command::Reduce(args) => commands::cmd_reduce(&args),
        Command::Equiv(args) => commands::cmd_equiv(&args),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            match &e {
                CliError::Parse(msg) | CliError::Numeric(msg) => eprintln!("torific: {msg}"),
            }
            std::process::exit(e.exit_code());
        }
    }
}
