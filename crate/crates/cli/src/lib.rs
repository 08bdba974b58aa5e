//! The `anyon` command line.
//!
//! [`run`] parses arguments, executes one subcommand and writes the report,
//! returning the process exit code: 0 on success, 1 for invalid input,
//! 2 for numeric failures and empty typical sets, 3 when a size cap is hit.

use std::ffi::OsString;
use std::io::Write;

use anyon_core::Error;
use clap::Parser;

pub mod args;
mod commands;
pub mod report;

pub use args::{Cli, Format};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_SIZE: i32 = 3;

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Numeric(_) | Error::NoTypicalMass => EXIT_NUMERIC,
        Error::Size { .. } => EXIT_SIZE,
        _ => EXIT_INVALID,
    }
}

pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let report = match commands::execute(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let text = match report.render(cli.format) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "error: could not render csv: {e}");
            return EXIT_INVALID;
        }
    };
    let written = match &cli.out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_INVALID
        }
    }
}
