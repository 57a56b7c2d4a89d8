mod cli;
mod commands;
mod error;
mod output;
mod parse;
mod target;

use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use crate::cli::{Cli, Command};
use crate::error::{CliError, CliResult, EXIT_USAGE};

fn dispatch(cli: &Cli) -> CliResult<u8> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = match &cli.command {
        Command::Sample(a) => commands::sample::run(a, &mut out)?,
        Command::Scan(a) => commands::scan::run(a, &mut out)?,
        Command::Validate(c) => commands::validate::run(c, &mut out)?,
    };
    out.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        // downstream closed the pipe (e.g. `| head`)
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            let code = e.exit_code();
            eprintln!("error: {e}");
            if code == EXIT_USAGE {
                eprintln!("run `trunclc --help` for usage");
            }
            ExitCode::from(code)
        }
    }
}
