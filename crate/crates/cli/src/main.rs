use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use stigma_cli::{run, Cli, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = RunConfig::from_options(&cli.options).and_then(|cfg| run(cli.command, &cfg, &mut out));
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
