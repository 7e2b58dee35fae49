mod args;
mod commands;
mod exit;
mod source;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::{Report, Settings};
use exit::CliError;

fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    let s = Settings::from_args(&cli.global)?;
    match &cli.command {
        Command::Eval { function, points } => commands::eval(&s, function, points),
        Command::Coeffs { function, n } => commands::coeffs(&s, function, n.as_deref()),
        Command::CheckMembership { check, f, g } => {
            commands::check_membership(&s, *check, f, g.as_deref())
        }
        Command::CheckCriteria { f, criterion } => {
            commands::check_criteria(&s, f, criterion.as_deref())
        }
        Command::Bounds { class, n, epsilon } => commands::bounds(&s, class, n, *epsilon),
        Command::Verify => commands::verify(&s),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match dispatch(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("qconvex: {e}");
            return e.exit_code();
        }
    };
    let written = match &cli.global.out {
        Some(path) => fs::write(path, &report.text),
        None => std::io::stdout().write_all(report.text.as_bytes()),
    };
    if let Err(e) = written {
        let e = CliError::from(e);
        eprintln!("qconvex: {e}");
        return e.exit_code();
    }
    ExitCode::from(report.status)
}
