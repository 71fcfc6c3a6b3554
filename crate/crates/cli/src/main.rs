use std::process::ExitCode;

use approxmono_cli::config::{Cli, Command, RunConfig};
use approxmono_cli::{execute, ExitStatus};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Analyze(args) = cli.command;
    let base = std::env::current_dir().unwrap_or_default();
    let status = RunConfig::from_args(&args, &base).and_then(|cfg| execute(&cfg)).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitStatus::InputError
    });
    ExitCode::from(status.code() as u8)
}
