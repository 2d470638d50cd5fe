use clap::Parser;

use subbottom_sas::cli::{exit_code, run, Cli};

fn main() {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let stage = match &cli.command {
        subbottom_sas::cli::Command::Simulate(_) => "simulate",
        subbottom_sas::cli::Command::Beamform(_) => "beamform",
        subbottom_sas::cli::Command::Imageproc(_) => "imageproc",
        subbottom_sas::cli::Command::Validate(_) => "validate",
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {stage}: {e}");
            exit_code(&e)
        }
    };
    std::process::exit(code);
}
