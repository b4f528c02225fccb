//! Command-line front end for the `qfs-core` experiments.
//!
//! Every command writes CSV (or JSON) tables whose header echoes the
//! effective configuration. Exit codes are stable: 0 success, 2 usage,
//! 3 numeric failure, 4 data or I/O failure.

pub mod args;
pub mod commands;
pub mod config_file;
pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::{CommandFactory, FromArgMatches};
use qfs_core::Error;

use crate::args::{Cli, Command};
use crate::commands::Report;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;
pub const EXIT_DATA: u8 = 4;

pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config(_) | Error::Argument(_) => EXIT_USAGE,
        Error::Numeric(_) => EXIT_NUMERIC,
        Error::Data(_) | Error::Io(_) => EXIT_DATA,
    }
}

pub fn dispatch(command: &Command) -> qfs_core::Result<Report> {
    match command {
        Command::Interpolate(a) => commands::interpolate(a),
        Command::Classify(a) => commands::classify(a),
        Command::Coeffs(a) => commands::coeffs(a),
        Command::Trotter(a) => commands::trotter(a),
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Diagnostics go to stderr, results to stdout.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match config_file::expand(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("qfs: {e}");
            return exit_code(&e);
        }
    };
    let cli = match Cli::command()
        .try_get_matches_from(args)
        .and_then(|m| Cli::from_arg_matches(&m))
    {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(&cli.command) {
        Ok(report) => {
            let mut stdout = std::io::stdout().lock();
            for line in &report.lines {
                let _ = writeln!(stdout, "{line}");
            }
            for file in &report.files {
                let _ = writeln!(stdout, "wrote {}", file.display());
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("qfs {}: {e}", cli.command.name());
            exit_code(&e)
        }
    }
}
