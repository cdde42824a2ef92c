//! Grid sweeps over `(F, a)` and the verification suites built on them.

mod sweep;
mod verify;

pub use sweep::{evaluate_point, run_sweep, SweepConfig, SweepRecord, Tolerances};
pub use verify::{verify, ClaimResult, Suite, UnknownSuite, VerificationReport};
