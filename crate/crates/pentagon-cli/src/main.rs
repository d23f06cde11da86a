//! Command-line runner. Exit status: 0 when every check passes, 1 when a
//! check fails, 2 for usage and input errors.

mod args;
mod commands;
mod report;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use report::CliError;

fn run(cli: Cli) -> Result<bool, CliError> {
    if let Some(k) = cli.threads {
        if k == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let (pass, report, path) = match cli.command {
        Command::Verify(a) => commands::verify(a)?,
        Command::LimitStudy(a) => commands::limit_study(a)?,
        Command::ExpandOperator(a) => commands::expand_operator(a)?,
        Command::Selfcheck(a) => commands::selfcheck(a)?,
    };
    report.write(path.as_deref())?;
    Ok(pass)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            println!("{}", e.record());
            eprintln!("error: {e}");
            match e {
                CliError::Engine(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
