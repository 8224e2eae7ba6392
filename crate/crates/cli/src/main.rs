mod args;
mod commands;
mod config;
mod io;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;
use report::{EXIT_DEGENERATE, EXIT_USAGE};

fn main() -> ExitCode {
    let argv = match config::expand(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(f) => return f.exit(),
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.render().to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!(
                "errw: usage error: {} (see --help)",
                first.trim_start_matches("error: ")
            );
            return ExitCode::from(EXIT_USAGE);
        }
    };

    let mut report = match commands::run(&cli) {
        Ok(r) => r,
        Err(f) => return f.exit(),
    };
    report.summary["warnings"] = serde_json::json!(report.warnings);
    let text = serde_json::to_string_pretty(&report.summary).expect("summary is valid JSON");
    // a closed pipe (`errw ... | head`) is not an error
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    if report.warnings.is_empty() {
        return ExitCode::SUCCESS;
    }
    if cli.strict {
        eprintln!("errw: numerical degeneracy: {}", report.warnings.join("; "));
        return ExitCode::from(EXIT_DEGENERATE);
    }
    for w in &report.warnings {
        eprintln!("errw: warning: {w}");
    }
    ExitCode::SUCCESS
}
