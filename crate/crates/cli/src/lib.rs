//! Verification-suite runner over the `anyonfock` engine.
//!
//! Suites wire the engine's modules into named batteries of checks with
//! pinned tolerances, producing machine-readable [`report::Report`]s. The
//! `anyonfock` binary drives them from a TOML config; the same entry points
//! back the integration tests.

pub mod config;
pub mod report;
pub mod suites;

pub use config::ExperimentConfig;
pub use report::{CheckRecord, Report, Table};
pub use suites::{run_suite, SUITES};
