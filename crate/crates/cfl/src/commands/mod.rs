//! Subcommands. Each returns an [`Outcome`]; errors map to exit status 2.

pub mod algebra;
pub mod catalog;
pub mod figures;
pub mod transform;
pub mod verify;

use crate::config::{CommandKind, ExperimentConfig};
use crate::error::{CliResult, ExitStatus};
use crate::pool::Pool;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: ExitStatus,
    /// Human-readable result for stdout.
    pub summary: String,
}

pub fn status_name(s: ExitStatus) -> &'static str {
    match s {
        ExitStatus::Pass => "pass",
        ExitStatus::ToleranceFailure => "tolerance-failure",
        ExitStatus::InvalidInput => "invalid-input",
    }
}

pub fn run(cfg: &ExperimentConfig, pool: &Pool) -> CliResult<Outcome> {
    match cfg.command {
        CommandKind::Verify => verify::run(cfg, pool),
        CommandKind::Transform => transform::run(cfg, pool),
        CommandKind::Figures => figures::run(cfg, pool),
        CommandKind::Algebra => algebra::run(cfg),
    }
}
