//! Command-line driver for the shallow-water experiments.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::{execute, Report};
pub use config::{Experiment, ExperimentConfig, Overrides};
pub use error::{CliError, CliResult};
