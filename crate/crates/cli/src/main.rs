mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads.max(1)).build_global() {
        eprintln!("error: cannot start worker pool: {e}");
        return ExitCode::from(commands::EXIT_IO);
    }
    let result = match &cli.command {
        Command::Generate(a) => commands::generate(a),
        Command::Verify(a) => commands::verify(a),
        Command::Params(a) => commands::params(a),
        Command::Admissible(a) => commands::admissible(a),
        Command::Table(a) => commands::table(a),
        Command::Rip(a) => commands::rip(a),
        Command::Certificate(a) => commands::certificate(a),
        Command::Complement(a) => commands::complement(a),
        Command::Export(a) => commands::export(a),
        Command::Import(a) => commands::import(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
