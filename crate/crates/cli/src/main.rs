use std::io::Write as _;
use std::process::ExitCode;

use clap::Parser;
use qselect::commands::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
            if outcome.checks_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("qselect: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
