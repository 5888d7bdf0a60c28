use std::process::ExitCode;

use clap::Parser;
use fair_alloc_cli::{run, Cli};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fairalloc: {e}");
            e.into()
        }
    }
}
