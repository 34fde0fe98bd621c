use std::process::ExitCode;

use clap::Parser;
use franel_cli::commands::{run, Cli};

fn main() -> ExitCode {
    ExitCode::from(run(Cli::parse()))
}
