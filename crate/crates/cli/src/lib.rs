//! Experiment runners behind the `chaoslab` binary.
//!
//! Each runner validates its inputs, performs exact and Monte Carlo checks
//! through the library crates and returns an [`ExperimentReport`]. The binary
//! only parses arguments and writes reports.

pub mod experiments;
pub mod input;
pub mod report;

pub use report::{Check, ExperimentReport, Status, Table, TableRow, Value};
