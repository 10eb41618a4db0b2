//! Command-line front end: builds tables, runs trajectory and divergence
//! experiments, and grades static evaluators, emitting every result as a
//! JSON or CSV report on stdout.

use std::process::ExitCode;

mod commands;
mod config;
mod report;

use commands::CliError;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    match commands::run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(err)) => {
            let help = matches!(
                err.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = err.print();
            if help {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(err) => {
            let detail = serde_json::json!({
                "error": err.to_string(),
                "code": err.code(),
            });
            eprintln!("{detail}");
            ExitCode::from(err.code())
        }
    }
}
