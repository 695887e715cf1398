mod cli;
mod commands;
mod config;
mod output;
mod repro;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::commands::Failure;

fn main() -> ExitCode {
    let cli = cli::Cli::parse_from(cli::protect_negative_literals(std::env::args()));
    match commands::run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.stdout.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(3);
            }
            match out.failed {
                None => ExitCode::SUCCESS,
                Some(msg) => {
                    eprintln!("check failed: {msg}");
                    ExitCode::from(3)
                }
            }
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(3)
        }
    }
}
