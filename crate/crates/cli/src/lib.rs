//! The `magpath` command line: argument parsing, input loading, and exit codes.

pub mod commands;
pub mod maps;
pub mod report;

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use magpath::digraph::{builtins, parse_digraph};
use magpath::{Digraph, Error};

pub use report::{Bounds, Cell, Report, Verdict, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_UNBOUNDED: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(Error::UnboundedFiltration { .. }) => EXIT_UNBOUNDED,
            CliError::Core(Error::Inconsistent(_)) => EXIT_VERIFY,
            CliError::Core(_) => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "magpath", version, about = "Magnitude, differential magnitude and path homology of finite digraphs")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Edge-list file, or `builtin:NAME` (path_N, cycle_N, complete_N, star_N, figure1).
    #[arg(long, global = true)]
    pub input: Option<String>,
    /// Read every edge of the input file in both directions.
    #[arg(long, global = true)]
    pub undirected: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Worker threads for independent cells (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

fn positive() -> clap::builder::RangedI64ValueParser<i64> {
    clap::value_parser!(i64).range(1..)
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Magnitude homology MH^l_k for -1 <= l <= lmax, -1 <= k <= kmax.
    Mh {
        #[arg(long, value_parser = positive())]
        lmax: i64,
        #[arg(long, value_parser = positive())]
        kmax: i64,
    },
    /// Differential magnitude homology dMH^l_k over the same box.
    Dmh {
        #[arg(long, value_parser = positive())]
        lmax: i64,
        #[arg(long, value_parser = positive())]
        kmax: i64,
    },
    /// Reduced path homology for -1 <= k <= kmax.
    Path {
        #[arg(long, value_parser = positive())]
        kmax: i64,
    },
    /// Pages 0..=rmax and the limit page of the length spectral sequence.
    Spectral {
        #[arg(long, value_parser = positive())]
        nmax: i64,
        #[arg(long, value_parser = clap::value_parser!(i64).range(0..))]
        rmax: i64,
    },
    /// Off-diagonal magnitude homology within the box.
    Diagonal {
        #[arg(long, value_parser = positive())]
        lmax: i64,
        #[arg(long, value_parser = positive())]
        kmax: i64,
    },
    /// Certify a chain of one-step homotopies read from a maps file.
    Homotopy {
        #[arg(long)]
        maps: PathBuf,
    },
    /// Run every cross-check within the given bounds.
    Verify {
        #[arg(long, value_parser = positive())]
        lmax: i64,
        #[arg(long, value_parser = positive())]
        kmax: i64,
        #[arg(long, value_parser = positive())]
        nmax: i64,
    },
}

/// Resolves `--input`.
pub fn load_input(spec: &str, undirected: bool) -> Result<Digraph, CliError> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return builtins::by_name(name).ok_or_else(|| CliError::Usage(format!("unknown builtin digraph `{name}`")));
    }
    let text = std::fs::read_to_string(spec).map_err(|e| CliError::Usage(format!("cannot read `{spec}`: {e}")))?;
    Ok(parse_digraph(&text, undirected)?)
}

/// Runs a parsed command line and returns the report.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let input = cli
        .common
        .input
        .as_deref()
        .ok_or_else(|| CliError::Usage("--input is required".into()))?;
    let graph = Arc::new(load_input(input, cli.common.undirected)?);
    let run = || commands::dispatch(&cli.command, graph.clone());
    match cli.common.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {n} threads: {e}")))?
            .install(run),
        None => run(),
    }
}

/// Parses `args`, runs, prints, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            match cli.common.format {
                Format::Json => print!("{}", report.to_json()),
                Format::Table => print!("{}", report.to_table()),
            }
            if report.succeeded() {
                EXIT_OK
            } else {
                EXIT_VERIFY
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
