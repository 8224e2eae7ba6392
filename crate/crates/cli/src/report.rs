use std::process::ExitCode;

use serde_json::Value;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_DOMAIN: u8 = 3;
pub const EXIT_DEGENERATE: u8 = 4;

/// What a subcommand hands back: the JSON summary and any
/// numerical-degeneracy warnings.
pub struct Report {
    pub summary: Value,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(summary: Value) -> Self {
        Report {
            summary,
            warnings: Vec::new(),
        }
    }
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(errw_core::Error),
}

impl From<errw_core::Error> for Failure {
    fn from(e: errw_core::Error) -> Self {
        Failure::Domain(e)
    }
}

/// `NonPositiveWeight { .. }` -> `NonPositiveWeight`.
fn variant_name(e: &errw_core::Error) -> String {
    format!("{e:?}")
        .chars()
        .take_while(|c| c.is_ascii_alphanumeric())
        .collect()
}

impl Failure {
    /// Prints the one-line diagnostic and returns the exit status.
    pub fn exit(self) -> ExitCode {
        match self {
            Failure::Usage(msg) => {
                eprintln!("errw: usage error: {msg}");
                ExitCode::from(EXIT_USAGE)
            }
            Failure::Domain(e) => {
                eprintln!("errw: {}: {e}", variant_name(&e));
                ExitCode::from(EXIT_DOMAIN)
            }
        }
    }
}
