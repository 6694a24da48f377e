mod args;
mod commands;
mod points;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Format};
use commands::{Report, Status};

fn emit(cli: &Cli, report: &Report) -> std::io::Result<()> {
    let body = match cli.global.format {
        Format::Text => report.text.clone(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json).expect("report serializes");
            s.push('\n');
            s
        }
    };
    match &cli.global.out {
        Some(path) => std::fs::write(path, body),
        None => std::io::stdout().write_all(body.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match commands::run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("hsums: {}", e.message);
            return ExitCode::from(e.status as u8);
        }
    };
    if let Err(e) = emit(&cli, &report) {
        eprintln!("hsums: cannot write report: {e}");
        return ExitCode::from(Status::Usage as u8);
    }
    for line in &report.stderr {
        eprintln!("{line}");
    }
    ExitCode::from(report.status as u8)
}
