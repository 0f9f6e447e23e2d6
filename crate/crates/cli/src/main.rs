use std::io;
use std::process::ExitCode;

use clap::Parser;
use erkn_cli::{dispatch, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (stdout, stderr) = (io::stdout(), io::stderr());
    match dispatch(cli, &mut stdout.lock(), &mut stderr.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("erkn: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
