//! Experiment driver for `hyperlab`: configuration, subcommands, output
//! and the acceptance suite.

pub mod acceptance;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod stats;

pub use commands::{run, CommandOutput};
pub use config::{CommandKind, ExperimentConfig, Params};
pub use error::{CliError, CliResult};
