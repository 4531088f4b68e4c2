use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use pauliexp_cli::args::Cli;
use pauliexp_cli::error::Exit;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Exit::Ok.into(),
                _ => Exit::Parse.into(),
            };
        }
    };
    if let Err(message) = pauliexp_cli::configure_threads() {
        eprintln!("error [config]: {message}");
        return Exit::Parse.into();
    }
    match pauliexp_cli::run(&cli) {
        Ok(()) => Exit::Ok.into(),
        Err(e) => {
            eprintln!("{e}");
            e.exit.into()
        }
    }
}
