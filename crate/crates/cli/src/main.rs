use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use rmplate_cli::{output, run, Cli, CliError, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: Cli) -> Result<bool, CliError> {
    let config = RunConfig::from_cli(cli)?;
    let outcome = run(&config)?;
    output::write_all(&outcome.files).map_err(|e| CliError::Output(e.to_string()))?;
    std::io::stdout().write_all(outcome.stdout.as_bytes()).map_err(|e| CliError::Output(e.to_string()))?;
    Ok(outcome.passed)
}
