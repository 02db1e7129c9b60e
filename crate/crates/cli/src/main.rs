use std::process::ExitCode;

use clap::Parser;
use subdiff_cli::{run, Cli, CliError};

fn fail(e: &CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli.command) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    if let Err(e) = report.table.write(cli.command.out().map(|p| p.as_path())) {
        return fail(&CliError::Io(e));
    }
    match report.failure {
        Some(e) => fail(&e),
        None => ExitCode::SUCCESS,
    }
}
