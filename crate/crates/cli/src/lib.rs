//! The `rankgain` command: certificates, parameter search, density scans,
//! certificate verification and identity self-tests.
//!
//! Exit codes: 0 success, 1 no result, 2 invalid input, 3 verification failure.

pub mod app;
pub mod args;

pub use app::{run, Failure};
pub use args::Cli;
