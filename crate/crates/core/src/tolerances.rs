//! Named numeric tolerances shared by the library, the verification suites
//! and the tests.

/// Hermiticity, trace and positivity slack accepted by [`crate::states::validate`].
pub const STATE_VALIDATION: f64 = 1e-10;

/// Eigenvalues in `[-PSD_CLAMP, 0)` are treated as round-off and clamped to zero.
pub const PSD_CLAMP: f64 = 1e-10;

/// Jacobi stops once the off-diagonal Frobenius norm (relative to
/// `max(1, ||M||_F)`) drops below this.
pub const JACOBI_OFF_DIAGONAL: f64 = 1e-14;

/// Maximum number of cyclic Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Bell-diagonal probabilities may dip this far below zero.
pub const BELL_PROBABILITY: f64 = 1e-12;

/// MEMS spectra must sum to one within this.
pub const MEMS_NORMALIZATION: f64 = 1e-12;

/// `p2 == p4` test for MEMS classification.
pub const MEMS_DEGENERACY: f64 = 1e-12;

/// A local Bloch vector longer than this makes a state LQCC-improvable.
pub const BLOCH_NONZERO: f64 = 1e-10;

/// Concurrence inputs to the EOF formula may overshoot `[0, 1]` by this.
pub const CONCURRENCE_RANGE: f64 = 1e-12;

/// Closed form vs numeric Wootters pipeline, elementwise.
pub const ORACLE: f64 = 1e-10;

/// Maximum admissible positive extractable gap.
pub const GAP_BOUND: f64 = 1e-12;

/// Gap and concurrence deficit must be below `-STRICTNESS` away from `a = 1/2`.
pub const STRICTNESS: f64 = 1e-9;

/// Points with `a >= 1/2 + STRICT_OFFSET` must be strictly sub-maximal.
pub const STRICT_OFFSET: f64 = 1e-2;

/// Central finite-difference step used for gradient checks.
pub const FD_STEP: f64 = 1e-4;

/// Absolute agreement between analytic gradients and finite differences.
pub const GRADIENT: f64 = 1e-6;

/// Gradient checks skip points closer than this to `a*` or to `a = 1`.
pub const GRADIENT_EXCLUSION: f64 = 1e-3;

/// `|ppt_min_eigenvalue|` at the separability boundary.
pub const BOUNDARY: f64 = 1e-10;

/// Slack for pairwise monotonicity comparisons.
pub const MONOTONICITY: f64 = 1e-12;

/// Exact identities (trace, `G+ G- = G`, Bell-diagonal fixed points).
pub const IDENTITY: f64 = 1e-12;

/// Entrywise agreement of two constructions of the same state.
pub const ENTRYWISE: f64 = 1e-14;

/// Concurrence above this counts as entangled in the criterion cross-check.
pub const CONCURRENCE_POSITIVE: f64 = 1e-10;

/// Partial-transpose minimum eigenvalue below `-PPT_NEGATIVE` counts as entangled.
pub const PPT_NEGATIVE: f64 = 1e-12;
