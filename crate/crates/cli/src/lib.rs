//! Command-line front end: `analyze`, `scan` and `verify`.

pub mod args;
pub mod error;
pub mod family;
pub mod report;
pub mod scan;
pub mod verify;

use std::io::Write;

pub use args::{Cli, Command};
pub use error::{CliError, CliResult};

/// Runs one subcommand; results go to `out`, diagnostics to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Analyze(a) => {
            let inst = family::build(&a.state, None)?;
            let analysis = report::analyze_instance(&inst, &a.oracle)?;
            let text = serde_json::to_string_pretty(&analysis).expect("analysis serializes");
            writeln!(out, "{text}")?;
            Ok(())
        }
        Command::Scan(s) => scan::run_scan(&s, out),
        Command::Verify(v) => verify::run_verify(&v, out, err),
    }
}
