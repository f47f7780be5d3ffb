use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use paracomp_cli::commands::{run, Cli, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if let Some(cert) = &outcome.certificate {
        let written = match &cli.output {
            Some(path) => std::fs::write(path, cert),
            None => std::io::stdout().write_all(cert.as_bytes()),
        };
        if let Err(e) = written {
            eprintln!("error: cannot write certificate: {e}");
            return ExitCode::from(2);
        }
    }
    eprintln!("{}", outcome.report);
    ExitCode::from(outcome.code as u8)
}
