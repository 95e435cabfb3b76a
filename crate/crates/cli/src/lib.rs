//! Command-line driver: configuration, runs and result files.

pub mod config;
pub mod output;
pub mod run;

pub use config::{Cli, ConfigError, RunConfig};
pub use run::{run, CliError, Outcome};
