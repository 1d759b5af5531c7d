use clap::Parser;

use anxiety_core::cli::{error_line, run, Cli};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Err(err) = run(Cli::parse()) {
        eprintln!("{}", error_line(&err));
        std::process::exit(err.exit_code());
    }
}
