//! JSON density-matrix files.
//!
//! ```json
//! {"dim": 4, "matrix": [[{"re": 0.25, "im": 0.0}, ...], ...]}
//! ```
//!
//! Four rows of four entries, row-major, basis order `|00>, |01>, |10>, |11>`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use werner_core::linalg::Mat4;
use werner_core::states::{self, DensityMatrix};
use werner_core::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dim: usize,
    pub matrix: Vec<Vec<Entry>>,
}

impl StateFile {
    pub fn from_matrix(m: &Mat4) -> Self {
        StateFile {
            dim: 4,
            matrix: m
                .entries()
                .iter()
                .map(|row| row.iter().map(|z| Entry { re: z.re, im: z.im }).collect())
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<Mat4, String> {
        if self.dim != 4 {
            return Err(format!("dim must be 4, found {}", self.dim));
        }
        if self.matrix.len() != 4 {
            return Err(format!(
                "matrix must have 4 rows, found {}",
                self.matrix.len()
            ));
        }
        if let Some((i, row)) = self.matrix.iter().enumerate().find(|(_, r)| r.len() != 4) {
            return Err(format!("row {i} must have 4 entries, found {}", row.len()));
        }
        Ok(Mat4::from_fn(|i, j| {
            let e = self.matrix[i][j];
            Complex64::new(e.re, e.im)
        }))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum StateFileError {
    #[error("cannot read state file {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse state file {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid state in {path}: {} violation, {source}", reason(.source))]
    Invalid {
        path: PathBuf,
        source: werner_core::Error,
    },
}

impl StateFileError {
    /// Short machine-readable tag: `io`, `parse`, `hermiticity`, `trace`, `positivity`, ...
    pub fn sub_reason(&self) -> &'static str {
        match self {
            StateFileError::Io { .. } => "io",
            StateFileError::Parse { .. } => "parse",
            StateFileError::Invalid { source, .. } => reason(source),
        }
    }

    /// Measured violation for validation failures.
    pub fn magnitude(&self) -> Option<f64> {
        match self {
            StateFileError::Invalid { source, .. } => match source {
                werner_core::Error::NotHermitian { asymmetry } => Some(*asymmetry),
                werner_core::Error::TraceMismatch { deviation } => Some(deviation.abs()),
                werner_core::Error::NotPositive { min_eigenvalue } => Some(-min_eigenvalue),
                _ => None,
            },
            _ => None,
        }
    }
}

fn reason(e: &werner_core::Error) -> &'static str {
    match e {
        werner_core::Error::NotHermitian { .. } => "hermiticity",
        werner_core::Error::TraceMismatch { .. } => "trace",
        werner_core::Error::NotPositive { .. } => "positivity",
        werner_core::Error::NonFinite => "finiteness",
        _ => "validation",
    }
}

pub fn parse_state_json(text: &str, path: &Path) -> Result<DensityMatrix, StateFileError> {
    let parse_err = |message: String| StateFileError::Parse {
        path: path.to_owned(),
        message,
    };
    let file: StateFile = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    let m = file.to_matrix().map_err(parse_err)?;
    states::validate(m).map_err(|source| StateFileError::Invalid {
        path: path.to_owned(),
        source,
    })
}

pub fn parse_state_file(path: &Path) -> Result<DensityMatrix, StateFileError> {
    let text = fs::read_to_string(path).map_err(|source| StateFileError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_state_json(&text, path)
}

pub fn to_json(m: &Mat4) -> String {
    serde_json::to_string_pretty(&StateFile::from_matrix(m)).expect("state files serialize")
}
