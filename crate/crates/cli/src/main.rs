use std::process::ExitCode;

use clap::Parser;
use farkas_cli::{configure_threads, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("farkas: {e}");
        return ExitCode::from(e.code() as u8);
    }
    let code = run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    ExitCode::from(code as u8)
}
