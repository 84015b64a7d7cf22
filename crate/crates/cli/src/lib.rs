//! Library side of the `radial` command-line tool.

pub mod commands;
pub mod config;

pub use commands::{CliError, CliResult};
pub use config::{ConfigError, Criterion, Format, RawConfig, RunConfig};
