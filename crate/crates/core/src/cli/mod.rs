//! The `pflc` command line: workspace loading, command dispatch and reports.
//!
//! ```text
//! pflc <command> [args...] --workspace <file> [--out <file>] [--format json|csv] [--seed N]
//! ```
//!
//! Exit status is 0 on success, 2 when the workspace or the arguments are
//! invalid, and 3 when an engine fails.

mod commands;
mod config;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

pub use commands::{run, Command};
pub use config::{
    Attribute, AttributeSpec, ExperimentSpec, ModelSpec, RuleName, Space, SpaceSpec, Workspace, WorkspaceFile,
};
pub use report::{round_sig, Report, Table, SIG_DIGITS};

use crate::error::PflError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_ENGINE: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "pflc", version, about = "Probabilistic fuzzy logic calculator")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Arguments of the command, e.g. `prob_omega_is early`.
    #[arg(allow_negative_numbers = true)]
    pub args: Vec<String>,
    #[arg(long)]
    pub workspace: PathBuf,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Overrides the seed of simulated experiments.
    #[arg(long)]
    pub seed: Option<u64>,
}

fn exit_code(e: &PflError) -> i32 {
    if e.is_validation() {
        EXIT_INVALID
    } else {
        EXIT_ENGINE
    }
}

/// Loads the workspace and renders the report in the requested format.
pub fn execute(cli: &Cli) -> Result<String, PflError> {
    let ws = Workspace::load(&cli.workspace)?;
    let report = run(cli.command, &cli.args, &ws, cli.seed)?;
    Ok(match cli.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    })
}

/// Entry point of the binary; returns the process exit code.
pub fn main_from<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let text = match execute(&cli) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("pflc {}: {e}", cli.command.name());
            return exit_code(&e);
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("pflc {}: cannot write report: {e}", cli.command.name());
            EXIT_ENGINE
        }
    }
}
