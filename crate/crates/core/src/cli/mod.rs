//! Command-line front end: argument parsing, JSON run configs, and the
//! subcommands that turn configs into CSV/JSON outputs.

mod commands;
mod config;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};

pub use config::{DiagramSet, MetricSpec};

#[derive(Debug, Parser)]
#[command(name = "ballvol", version, about = "Persistence diagrams, barcode-space metrics and ball-volume statistics")]
pub struct Cli {
    /// JSON run configuration for the chosen subcommand.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Root seed; overrides `seed` in the config.
    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,

    /// Output directory; overrides `out` in the config (default `out`).
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Worker threads; falls back to BALLVOL_THREADS, then to all cores.
    #[arg(long, global = true, value_name = "N", env = "BALLVOL_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Vietoris–Rips persistence diagrams of point-cloud CSVs.
    Ph,
    /// Zigzag persistence of an ordered list of point clouds.
    Zigzag,
    /// Pairwise diagram distance matrix.
    Dist,
    /// Ball-volume curves and trajectory ball volumes.
    Ballvol,
    /// Permutation two-sample test on diagram samples.
    Test2,
    /// Convergence experiment on finite metric measure spaces.
    Convergence,
    /// Determined-by-balls check and the sample-size sweep demo.
    Determinacy,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Ph => "ph",
            Command::Zigzag => "zigzag",
            Command::Dist => "dist",
            Command::Ballvol => "ballvol",
            Command::Test2 => "test2",
            Command::Convergence => "convergence",
            Command::Determinacy => "determinacy",
        }
    }
}

/// Settings shared by every command after flag overrides.
#[derive(Debug, Clone)]
pub struct Context {
    /// Directory relative paths in the config are resolved against.
    pub base: PathBuf,
    pub out: PathBuf,
    pub seed: Option<u64>,
}

impl Context {
    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }

    pub fn require_seed(&self, command: Command) -> Result<u64> {
        self.seed
            .ok_or_else(|| Error::Config(format!("`{}` is stochastic and needs a seed (--seed or `seed` in the config)", command.name())))
    }

    pub fn output(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }
}

/// Machine-readable failure report printed to stderr.
#[derive(Debug, Serialize)]
pub struct ErrorReport {
    pub kind: String,
    pub message: String,
}

impl From<&Error> for ErrorReport {
    fn from(e: &Error) -> Self {
        ErrorReport {
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

fn configure_threads(threads: Option<usize>) -> Result<()> {
    if let Some(n) = threads {
        if n == 0 {
            return Err(Error::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

/// Run one invocation; returns the files written.
pub fn run(cli: &Cli) -> Result<Vec<PathBuf>> {
    configure_threads(cli.threads)?;
    let Some(config_path) = &cli.config else {
        return Err(Error::Config("--config PATH is required".into()));
    };
    let raw = config::load(config_path)?;
    let base = config_path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_default();
    let (seed, out, body) = config::split_common(raw)?;
    let ctx = Context {
        out: cli.out.clone().or(out.map(|o| base.join(o))).unwrap_or_else(|| PathBuf::from("out")),
        base,
        seed: cli.seed.or(seed),
    };
    commands::dispatch(cli.command, &ctx, body)
}

/// Binary entry point: parse arguments, run, and map errors to JSON on
/// stderr with a nonzero exit code.
pub fn main_with_args(args: impl IntoIterator<Item = std::ffi::OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    return 0;
                }
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = e.print();
                    return 2;
                }
                _ => {}
            }
            let report = ErrorReport {
                kind: "config".into(),
                message: e.to_string().trim_end().to_string(),
            };
            eprintln!("{}", serde_json::to_string(&report).expect("serializable"));
            return 2;
        }
    };
    match run(&cli) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("{}", serde_json::to_string(&ErrorReport::from(&e)).expect("serializable"));
            1
        }
    }
}
