use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use mvlab_cli::{exit_code, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(report.render(cli.format).as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::from(if report.passed() { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
