//! Command-line front end: experiment configs, catalog discovery, residual
//! runs, transformations, figure data and run manifests.

pub mod commands;
pub mod config;
pub mod error;
pub mod grid;
pub mod output;
pub mod pool;
pub mod transform_spec;

pub use config::{CommandKind, ExperimentConfig, SolutionSpec};
pub use error::{CliError, CliResult, ExitStatus};
