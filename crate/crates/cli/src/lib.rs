//! Scenario runner: resource → case matrix → simulations → metrics → synergy report.

pub mod artifacts;
pub mod commands;
pub mod config;
pub mod error;
pub mod svg;

pub use config::{Overrides, RunConfig};
pub use error::{CliError, CliResult};
