//! One module per experiment family; every entry point returns a finished report.

pub mod chaos;
pub mod discrete;
pub mod rademacher;
pub mod suite;
pub mod wick;
