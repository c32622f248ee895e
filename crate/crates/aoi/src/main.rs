use std::process::ExitCode;

use aoi::cli::{run, Cli, Sinks};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mut stdout, mut stderr) = (std::io::stdout().lock(), std::io::stderr());
    match run(cli, Sinks { stdout: &mut stdout, stderr: &mut stderr }) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("aoi: tolerance check failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("aoi: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
