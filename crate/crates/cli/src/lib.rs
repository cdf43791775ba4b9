//! Plan-driven command-line front end for `asd-screen-core`.

pub mod commands;
pub mod error;
pub mod plan;
pub mod report;

pub use error::{CliError, CliResult};
pub use plan::{ExperimentPlan, Overrides};
