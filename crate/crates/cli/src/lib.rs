//! Batch driver: signal ingestion, transforms, verification suites and
//! versioned JSON reports.

pub mod commands;
pub mod config;
pub mod envelope;
pub mod error;
pub mod io;
pub mod suites;

pub use config::{Format, RunConfig};
pub use envelope::{Check, ReportEnvelope};
pub use error::{CliError, CliResult};
