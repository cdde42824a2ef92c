//! File formats and the command-line frontend for `werner-core`.
//!
//! * [`state_file`]: the JSON density-matrix format read by `--file`.
//! * [`report`]: CSV/JSON writers (and readers) for sweeps and verification reports.
//! * [`app`]: argument parsing and subcommand dispatch behind the `werner` binary.

pub mod app;
pub mod report;
pub mod state_file;

pub use app::{run, ExitStatus};
