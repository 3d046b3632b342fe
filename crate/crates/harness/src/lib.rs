//! Sweeps, error reports and tables built on the `recoupling` crate.
//!
//! [`run_sweep`] evaluates a [`SweepSpec`] in parallel and returns one
//! [`Record`] per grid point in grid order. Reports serialise to CSV (a
//! fixed column set, see [`report::CSV_COLUMNS`]) or to JSON with top-level
//! keys `spec`, `records` and `summary`; `schema/report.schema.json`
//! describes the JSON form.

pub mod config;
pub mod report;
pub mod sample;
pub mod sweep;
pub mod tables;

pub use config::{default_precision, ConfigError, Mode, OutputFormat, Quantity, SweepSpec, PRECISION_ENV};
pub use report::{ErrorReport, Record, Summary};
pub use sweep::run_sweep;

/// JSON schema of the `{spec, records, summary}` documents.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");
