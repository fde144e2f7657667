use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use descent_cli::{run, Cli};

const USAGE: u8 = 64;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(USAGE),
            };
        }
    };
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            ExitCode::from(report.status.code())
        }
        Err(e) => {
            eprintln!("descent: {e}");
            ExitCode::from(e.code())
        }
    }
}
