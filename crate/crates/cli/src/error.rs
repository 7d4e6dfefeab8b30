//! Error type of the command-line front end and its exit codes.

use thiserror::Error;

/// Failure of a command.
#[derive(Debug, Error)]
pub enum CliError {
    /// The configuration file, a `--set` override or a flag could not be parsed.
    #[error("configuration error: {0}")]
    ConfigParse(String),
    /// Reading or writing a file failed.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    /// A numerical routine failed.
    #[error("computation failed: {0}")]
    Compute(#[from] optoent::Error),
    /// Metrics were requested for an unstable operating point. The partial
    /// report has already been written.
    #[error("operating point is unstable (max Re λ = {max_re:e} s⁻¹)")]
    Unstable {
        /// Largest real part of the drift-matrix eigenvalues.
        max_re: f64,
    },
}

impl CliError {
    /// Process exit code: 2 for an unstable operating point, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Unstable { .. } => 2,
            _ => 1,
        }
    }
}

impl From<toml::de::Error> for CliError {
    fn from(e: toml::de::Error) -> Self {
        CliError::ConfigParse(e.to_string())
    }
}

/// Result alias of the front end.
pub type Result<T> = std::result::Result<T, CliError>;
