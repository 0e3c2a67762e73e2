//! Benchmark and verification harness for the `sympolar` retraction.
//!
//! Three entry points back the `sympolar-bench` binary:
//!
//! - [`run_sweep`] times forward and inverse retraction over a list of `p`
//!   at fixed `n` and records the four accuracy diagnostics per trial.
//! - [`run_compare`] averages several registered retractions on shared
//!   random inputs, one row per retraction.
//! - [`run_check`] evaluates the invariant suite at one size.
//!
//! Records are written by [`emit_records`] as CSV or JSON.

mod check;
mod compare;
mod error;
mod record;
mod sweep;

pub use check::{run_check, run_check_with, CheckEntry, CheckOptions, CheckReport, Criterion};
pub use compare::{run_compare, run_compare_with, CompareConfig};
pub use error::{BenchError, BenchResult};
pub use record::{emit_records, read_csv, write_records, BenchRecord, Format, CSV_HEADER};
pub use sweep::{run_sweep, Generator, SweepConfig};
