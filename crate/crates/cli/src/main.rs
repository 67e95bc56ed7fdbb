mod args;
mod config;
mod error;
mod num;
mod run;

use args::Cli;
use clap::Parser;
use config::CliConfig;
use error::{at, CliError};
use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    match execute(&cli) {
        Ok(summary) => {
            eprintln!("mdca {name}: {summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("mdca {name}: error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn execute(cli: &Cli) -> Result<String, CliError> {
    let cfg = CliConfig::resolve(&cli.command)?;
    let artifact = run::run(&cfg)?;
    match &cfg.output {
        Some(path) => std::fs::write(path, &artifact.bytes).map_err(at("output"))?,
        None => std::io::stdout().lock().write_all(&artifact.bytes).map_err(at("output"))?,
    }
    Ok(artifact.summary)
}
