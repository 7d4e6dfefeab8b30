//! Command-line front end of `optoent`: configuration files, single-point
//! reports, parameter sweeps and CSV/JSON emission.
//!
//! Exit codes: 0 on success, 1 on configuration, input or numerical
//! errors, 2 when metrics were requested for an unstable operating point
//! (the partial report is still written).

pub mod cli;
pub mod config;
pub mod error;
pub mod report;
pub mod sweep;

pub use cli::{execute, run, Cli, Command, Format};
pub use config::Settings;
pub use error::{CliError, Result};
