use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let args = fhseq::cli::Cli::parse();
    let stdout = std::io::stdout();
    match fhseq::cli::run(args, &mut stdout.lock()) {
        Ok(status) => ExitCode::from(status.code()),
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.status.code())
        }
    }
}
