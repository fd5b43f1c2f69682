//! Scenario runner, convergence comparison and acceptance suite for
//! `rqm-core`.

pub mod compare;
pub mod config;
pub mod error;
pub mod initial;
pub mod report;
pub mod run;
pub mod selftest;

pub use error::{CliError, Result};
