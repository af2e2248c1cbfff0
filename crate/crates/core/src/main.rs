use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use udw_core::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = run(cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("udw: {}", f.message);
            ExitCode::from(f.code as u8)
        }
    }
}
