mod args;
mod fig1;
mod law;
mod output;
mod sample;
mod verify;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Failure classes, mapped to exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or an unsupported combination (exit 2).
    Usage(String),
    /// Output could not be written (exit 2).
    Io(String),
}

impl From<haar_digits::Error> for CliError {
    fn from(e: haar_digits::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// What a command produced: the rendered report and whether its checks passed.
pub struct Report {
    pub text: String,
    pub pass: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let (result, output) = match &cli.command {
        Command::Law(a) => (law::run(a), a.common.output.as_deref()),
        Command::Sample(a) => (sample::run(a), a.common.output.as_deref()),
        Command::Fig1(a) => (fig1::run(a), a.common.output.as_deref()),
        Command::Verify(a) => (verify::run(a), a.common.output.as_deref()),
    };
    let outcome = result.and_then(|r| output::emit(&r.text, output).map(|_| r.pass));
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(msg)) | Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
