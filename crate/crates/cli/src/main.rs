use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use torick_cli::{execute, Cli};

fn main() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    let outcome = execute(&cli);
    std::io::stdout().write_all(outcome.stdout.as_bytes())?;
    std::io::stderr().write_all(outcome.stderr.as_bytes())?;
    Ok(ExitCode::from(outcome.code as u8))
}
