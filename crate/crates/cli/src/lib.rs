//! Command-line driver: configuration, ledger resolution, check suites and the JSON report.

pub mod config;
pub mod error;
pub mod ledger;
pub mod random;
pub mod report;
pub mod run;
pub mod suite;

pub use error::{CliError, Result};
