use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Everything that can go wrong in the core.
///
/// Variants that report a violation carry the measured magnitude so callers
/// can print useful diagnostics without recomputing anything.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Largest `|M[i][j] - conj(M[j][i])|` exceeded the tolerance.
    NotHermitian { asymmetry: f64 },
    /// `trace - 1` exceeded the tolerance.
    TraceMismatch { deviation: f64 },
    /// An eigenvalue fell below `-tolerance`.
    NotPositive { min_eigenvalue: f64 },
    /// A matrix entry was NaN or infinite.
    NonFinite,
    /// Jacobi sweeps did not drive the off-diagonal norm under the threshold.
    NoConvergence { sweeps: usize, off_diagonal: f64 },
    /// A constructor or formula parameter is outside its admissible range.
    Parameter {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },
    /// A closed-form formula was evaluated outside its domain.
    Domain {
        operation: &'static str,
        value: f64,
        requirement: &'static str,
    },
    /// The LQCC target only exists for entangled inputs.
    Separable { concurrence: f64 },
    /// Sweep configuration rejected.
    Config(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotHermitian { asymmetry } => {
                write!(f, "matrix is not Hermitian: max asymmetry {asymmetry:e}")
            }
            Error::TraceMismatch { deviation } => {
                write!(f, "trace differs from 1 by {deviation:e}")
            }
            Error::NotPositive { min_eigenvalue } => {
                write!(f, "positivity violated: min eigenvalue {min_eigenvalue:e}")
            }
            Error::NonFinite => f.write_str("matrix contains NaN or infinite entries"),
            Error::NoConvergence {
                sweeps,
                off_diagonal,
            } => write!(
                f,
                "Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_diagonal:e})"
            ),
            Error::Parameter {
                name,
                value,
                requirement,
            } => write!(f, "parameter {name} = {value} violates {requirement}"),
            Error::Domain {
                operation,
                value,
                requirement,
            } => write!(f, "{operation} undefined at {value}: requires {requirement}"),
            Error::Separable { concurrence } => write!(
                f,
                "state is separable (concurrence {concurrence:e}); no LQCC target exists"
            ),
            Error::Config(msg) => write!(f, "invalid sweep configuration: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
