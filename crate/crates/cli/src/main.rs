mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, path) = match &cli.command {
        Command::Identities(a) => (commands::identities(a), a.output.output.as_deref()),
        Command::Kernel(a) => (commands::kernel(a), a.output.output.as_deref()),
        Command::OracleCompare(a) => (commands::oracle_compare(a), a.output.output.as_deref()),
        Command::Evolve(a) => (commands::evolve(a), a.output.output.as_deref()),
        Command::Selftest(a) => (commands::selftest(a), a.output.as_deref()),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = outcome.table.write(path) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if outcome.violations > 0 {
        eprintln!("{} tolerance violation(s)", outcome.violations);
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
