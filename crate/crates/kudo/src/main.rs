use std::fs;
use std::process::ExitCode;

use clap::Parser;
use kudo::commands::{self, Cli};
use kudo::report::{render, ViolationReport};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match commands::run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let failed = !outcome.violations.is_empty();
    let text = if failed {
        eprintln!("{} violation(s)", outcome.violations.len());
        render(&ViolationReport { violations: outcome.violations }, cli.global.format)
    } else {
        render(&outcome.report, cli.global.format)
    };
    match &cli.global.out {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(if failed { 2 } else { 0 })
}
