use std::process::ExitCode;

use clap::Parser;
use leiden_fusion::cli::{exit_code, run, Cli};

fn configure_threads() {
    let Ok(value) = std::env::var("LF_THREADS") else {
        return;
    };
    match value.trim().parse::<usize>() {
        Ok(0) => {}
        Ok(n) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                log::warn!("LF_THREADS ignored: {e}");
            }
        }
        Err(_) => log::warn!("LF_THREADS must be a non-negative integer, got `{value}`"),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    configure_threads();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
