use std::process::ExitCode;

use clap::Parser;
use dynamap::cli::{execute, Cli};
use dynamap::Tolerances;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = match Tolerances::from_env() {
        Ok(tol) => tol,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(&cli, &tol, &mut lock) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
