//! Command-line front end for `dirichlet-cf`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;
mod parse;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dirichlet_cf::Execution;
use serde_json::Value;

use output::{render, Format};

const VERSION: &str = if cfg!(feature = "parallel") {
    concat!(env!("CARGO_PKG_VERSION"), " (features: parallel)")
} else {
    concat!(env!("CARGO_PKG_VERSION"), " (features: none)")
};

#[derive(Debug, Parser)]
#[command(name = "dirichlet-cf", version = VERSION, about = "Dirichlet and Dirichlet-Ferguson characteristic functionals")]
pub struct Cli {
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Series truncation tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub output: Option<Format>,
    /// Write output to a file instead of stdout.
    #[arg(long = "out", global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Run data-parallel loops on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cycle index polynomial Z_n or Z^G.
    CycleIndex(commands::CycleIndexArgs),
    /// Moments E (s·Y)^n of Y ~ Dir(alpha).
    Moments(commands::MomentsArgs),
    /// Confluent Lauricella series kPhi2[alpha; c; s].
    Phi2(commands::Phi2Args),
    /// Factorization of maps [k] -> [k] and pushforward parameters.
    MapCheck(commands::MapCheckArgs),
    /// Ladder-operator relations on a weight lattice.
    DsaCheck(commands::DsaCheckArgs),
    /// Colorings and shadings of [n] up to a permutation group.
    Polya(commands::PolyaArgs),
    /// Stick-breaking marginals against Dirichlet moments.
    FergusonSim(commands::FergusonSimArgs),
    /// Ferguson characteristic functional: series and Monte Carlo on a t grid.
    Cf(commands::CfArgs),
    /// Region operators E_A and E_{A,-B} with cell-level cross-checks.
    Operators(commands::OperatorsArgs),
    /// Acceptance suite.
    Verify(commands::VerifyArgs),
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    List(String),
    Invalid(String),
    Io(String),
    /// Verification ran and failed; the payload is the failure report.
    Failed(Value),
}

impl From<dirichlet_cf::Error> for CliError {
    fn from(e: dirichlet_cf::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 2,
            _ => 1,
        }
    }
}

/// Context shared by all subcommands.
pub struct Context {
    pub seed: u64,
    pub tol: f64,
    pub exec: Execution,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("DIRICHLET_CF_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Invalid(format!(
            "DIRICHLET_CF_THREADS must be a positive integer, got '{raw}'"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Invalid(format!("thread pool: {e}")))
}

fn write_output(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if !(cli.tol > 0.0 && cli.tol < 1.0) {
        return Err(CliError::Invalid(format!(
            "--tol must lie in (0, 1), got {}",
            cli.tol
        )));
    }
    configure_threads()?;
    let ctx = Context {
        seed: cli.seed,
        tol: cli.tol,
        exec: if cli.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
    };
    let (result, default_format) = commands::dispatch(&cli.command, &ctx);
    let format = cli
        .output
        .or_else(|| commands::emit_override(&cli.command))
        .unwrap_or(default_format);
    match result {
        Ok(report) => write_output(&render(&report, format), cli.out.as_ref()),
        Err(CliError::Failed(report)) => {
            let text = render(&output::Report::json(report.clone()), Format::Json);
            write_output(&text, cli.out.as_ref())?;
            Err(CliError::Failed(report))
        }
        Err(e) => Err(e),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let err = CliError::Usage(e.render().to_string());
            report_error(&err);
            return ExitCode::from(err.exit_code());
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            report_error(&e);
            ExitCode::from(e.exit_code())
        }
    }
}

fn report_error(e: &CliError) {
    match e {
        CliError::Usage(m) => eprint!("usage error: {}", m.trim_start_matches("error: ")),
        CliError::List(m) => eprintln!("malformed list: {m}"),
        CliError::Invalid(m) => eprintln!("validation error: {m}"),
        CliError::Io(m) => eprintln!("io error: {m}"),
        CliError::Failed(_) => eprintln!("verification failed"),
    }
}
