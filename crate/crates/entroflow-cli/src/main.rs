use clap::Parser;
use entroflow_cli::args::Cli;
use entroflow_cli::{run, threads_from_env};

fn main() {
    let cli = Cli::parse();
    let threads = match threads_from_env() {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
    };
    if let Err(err) = run(&cli, threads) {
        eprintln!("error: {}", err.message());
        std::process::exit(err.exit_code());
    }
}
