mod args;
mod commands;
mod manifest;

use std::process::ExitCode;

use clap::Parser;
use kgcx_core::ErrorKind;

use args::{Cli, Command};

fn exit_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::Input => 2,
        ErrorKind::Compute => 3,
        ErrorKind::Analysis => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.verbose { "info" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start thread pool: {e}");
            return ExitCode::from(3);
        }
    }

    let result = match &cli.command {
        Command::Profile(a) => commands::profile(a, cli.seed),
        Command::Csg(a) => commands::csg(a, cli.seed),
        Command::Sweep(a) => commands::sweep(a, cli.seed),
        Command::Correlate(a) => commands::correlate(a, cli.seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            ExitCode::from(exit_code(e.kind()))
        }
    }
}
