//! Command-line runner for drift and thin-domain spectra.
//!
//! A job is described by a [`JobConfig`], read from a `key = value` file
//! ([`load_config`]) or built from command-line flags, and executed by
//! [`run_job`], which writes CSV/JSON reports and returns the exit code:
//! 0 success, 1 configuration or input error, 2 numeric failure,
//! 3 failed check.

// Negated comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod job;
pub mod report;

pub use config::{load_config, parse_config, ConfigError, JobConfig, JobKind};
pub use job::{execute, run_job, JobError, JobOutput, EXIT_CHECK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK};
pub use report::{Cell, Report};
