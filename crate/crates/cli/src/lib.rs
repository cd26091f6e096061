//! Library surface of the command-line driver; the binary is a thin
//! argument-parsing wrapper. Exposed so integration tests can audit the
//! frozen presets and exercise command plumbing directly.

pub mod commands;
pub mod config;
pub mod manifest;
pub mod output;
pub mod presets;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
}

impl From<amcsim::Error> for CliError {
    fn from(e: amcsim::Error) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Numerical(format!("io: {e}"))
    }
}
