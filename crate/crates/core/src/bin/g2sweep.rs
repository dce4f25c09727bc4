use std::io;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use squeezed_g2::sweep::{execute, exit_code, CliArgs, RunConfig, EXIT_COMPARE_FAILED, EXIT_USAGE};

fn main() -> ExitCode {
    let args = match CliArgs::try_parse() {
        Ok(args) => args,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            e.exit()
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let result = RunConfig::from_args(args).and_then(|cfg| execute(&cfg, &mut io::stderr()));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_COMPARE_FAILED as u8),
        Err(e) => {
            eprintln!("g2sweep: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
