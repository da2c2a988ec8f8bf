use std::io;
use std::process::ExitCode;

use clap::Parser;
use goodwin::{commands::report_error, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli, &mut io::stdout().lock(), &mut io::stderr().lock()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("{}", report_error(&err));
            ExitCode::FAILURE
        }
    }
}
