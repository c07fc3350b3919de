//! Experiment harness for the `dcchaos` binary: run configuration, pair
//! descriptions, artifact writers and the acceptance suite.

pub mod acceptance;
pub mod commands;
pub mod config;
pub mod output;
pub mod pairs;

pub use acceptance::{run_criteria, run_suite, CriterionReport, Status, SuiteReport};
pub use config::{ConfigError, RunConfig};
