//! Property suites, JSON formats and the command-line front end for
//! [`grassmann_core`].

pub mod cli;
pub mod config;
pub mod error;
pub mod json;
pub mod oracle;
pub mod report;
pub mod rng;
pub mod suites;

pub use config::SuiteConfig;
pub use error::{HarnessError, Result};
pub use oracle::toy_oracle_goodness;
pub use report::{CaseResult, FailureWitness, SuiteReport, SuiteResult};
pub use suites::{run_suite, SUITES};
