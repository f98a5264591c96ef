use std::process::ExitCode;

use clap::Parser;

use spinboson::cli::{run, write_outcome, Cli, RunConfig};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = RunConfig::from_cli(cli).and_then(|(cfg, _warnings)| {
        let outcome = run(&cfg)?;
        write_outcome(&outcome, &mut std::io::stdout().lock())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
