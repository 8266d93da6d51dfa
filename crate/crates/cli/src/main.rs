mod args;
mod run;

use std::process::ExitCode;

use clap::Parser;
use subsparse::Error;

use crate::args::Cli;
use crate::run::Failure;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(n) = std::env::var("SUBSPARSE_THREADS").ok().and_then(|s| s.parse().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run::run(&cli.command, cli.verbose) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Input(path, e)) => {
            eprintln!("error: {}: {e}", path.display());
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 1 for bad input, 3 when a precondition of the algorithm does not hold.
fn exit_code(e: &Error) -> u8 {
    if e.is_refusal() || matches!(e, Error::InvalidArgument(_)) {
        3
    } else {
        1
    }
}
