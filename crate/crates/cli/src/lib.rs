//! Scenario configuration, pipeline runners and artifact writers behind the
//! `satqkd` command-line tool.

#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::{Scenario, ScenarioConfig};
pub use error::CliError;
pub use output::{Artifact, RunOutput};
