use std::process::ExitCode;

use clap::Parser;
use diracstep_cli::args::Cli;

fn main() -> ExitCode {
    match diracstep_cli::run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("diracstep: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
