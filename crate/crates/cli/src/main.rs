use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use lieclass::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let out = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("lieclass: {}", e);
            return ExitCode::from(e.code() as u8);
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &out.text),
        None => std::io::stdout().write_all(out.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("lieclass: {}", e);
        return ExitCode::from(1);
    }
    ExitCode::from(out.code as u8)
}
