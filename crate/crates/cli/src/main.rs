use std::process::ExitCode;

use clap::Parser;
use lynprof_cli::{render, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            for line in &outcome.diagnostics {
                eprintln!("{line}");
            }
            println!("{}", render(&outcome.payload, cli.pretty));
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
