//! Entanglement measures for arbitrary two-qubit states.
//!
//! The Wootters quantities `lambda_i` are the square roots of the eigenvalues
//! of `rho rho~`, i.e. the singular values of `sqrt(rho) sqrt(rho~)`. They are
//! computed from the Hermitian dilation `[[0, A], [A^dagger, 0]]` of that
//! product, whose eigenvalues are `+-lambda_i`. Going through singular values
//! instead of eigenvalues of `sqrt(rho) rho~ sqrt(rho)` keeps vanishing
//! `lambda_i` at the `1e-16` level rather than `1e-8`.

use crate::linalg::{self, Mat4, Matrix, Subsystem};
use crate::states::{self, BellDiagonalParams, DensityMatrix};
use crate::tolerances;
use crate::{Error, Result};

/// `sigma_y x sigma_y`
fn yy() -> Mat4 {
    linalg::kron(&linalg::SIGMA_2, &linalg::SIGMA_2)
}

/// `rho~ = (s_y x s_y) rho* (s_y x s_y)`, conjugation in the standard basis.
pub fn spin_flip(rho: &DensityMatrix) -> DensityMatrix {
    let y = yy();
    DensityMatrix::trusted(y * rho.matrix().conj() * y)
}

/// Wootters `lambda_1 >= lambda_2 >= lambda_3 >= lambda_4 >= 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LambdaQuadruple([f64; 4]);

impl LambdaQuadruple {
    /// Sorts descending and clamps round-off negatives (down to `-PSD_CLAMP`).
    pub fn new(mut lambdas: [f64; 4]) -> Result<Self> {
        lambdas.sort_by(|a, b| b.total_cmp(a));
        if lambdas[3] < -tolerances::PSD_CLAMP || lambdas.iter().any(|x| !x.is_finite()) {
            return Err(Error::NotPositive {
                min_eigenvalue: lambdas[3],
            });
        }
        Ok(LambdaQuadruple(lambdas.map(|x| x.max(0.0))))
    }

    pub fn values(&self) -> [f64; 4] {
        self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// `lambda_1 - lambda_2 - lambda_3 - lambda_4`, unclamped.
    pub fn concurrence_margin(&self) -> f64 {
        self.0[0] - self.0[1] - self.0[2] - self.0[3]
    }

    pub fn concurrence(&self) -> f64 {
        self.concurrence_margin().max(0.0)
    }

    /// Concurrence of the best Bell-diagonal state reachable by single-copy
    /// LQCC: the margin divided by the sum, floored at zero.
    pub fn extractable_concurrence(&self) -> f64 {
        let margin = self.concurrence_margin();
        if margin <= 0.0 {
            0.0
        } else {
            margin / self.sum()
        }
    }
}

pub fn wootters_lambdas(rho: &DensityMatrix) -> Result<LambdaQuadruple> {
    let root = linalg::matrix_sqrt_psd(rho.matrix(), tolerances::PSD_CLAMP)?;
    let y = yy();
    // sqrt(rho~) = Y sqrt(rho)* Y exactly
    let root_flipped = y * root.conj() * y;
    let product = root * root_flipped;
    let adjoint = product.dagger();

    let mut dilation = Matrix::<8>::zeros();
    for i in 0..4 {
        for j in 0..4 {
            dilation[(i, j + 4)] = product[(i, j)];
            dilation[(i + 4, j)] = adjoint[(i, j)];
        }
    }
    let ev = linalg::hermitian_eigenvalues(&dilation, tolerances::STATE_VALIDATION)?;
    LambdaQuadruple::new([ev[0], ev[1], ev[2], ev[3]])
}

/// `max{0, lambda_1 - lambda_2 - lambda_3 - lambda_4}`
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    wootters_lambdas(rho).map(|l| l.concurrence())
}

/// `H(x) = -x log2 x - (1-x) log2 (1-x)` with `H(0) = H(1) = 0`.
pub fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * libm::log2(p) };
    term(x) + term(1.0 - x)
}

/// Entanglement of formation `H((1 + sqrt(1 - C^2))/2)`.
pub fn eof_from_concurrence(c: f64) -> Result<f64> {
    let slack = tolerances::CONCURRENCE_RANGE;
    if !(c >= -slack && c <= 1.0 + slack) {
        return Err(Error::Parameter {
            name: "C",
            value: c,
            requirement: "concurrence in [0, 1]",
        });
    }
    if c <= 0.0 {
        return Ok(0.0);
    }
    if c >= 1.0 {
        return Ok(1.0);
    }
    Ok(binary_entropy((1.0 + libm::sqrt(1.0 - c * c)) / 2.0))
}

/// Smallest eigenvalue of `rho^{T_B}`; negative iff the state is entangled.
pub fn ppt_min_eigenvalue(rho: &DensityMatrix) -> Result<f64> {
    let pt = linalg::partial_transpose(rho.matrix(), Subsystem::B);
    linalg::hermitian_eigenvalues(&pt, tolerances::STATE_VALIDATION).map(|ev| ev[3])
}

/// Bell-diagonal state with maximal EOF reachable from a single copy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LqccTarget {
    /// Correlations with `r1 <= r2 <= r3 <= 0`.
    pub params: BellDiagonalParams,
    pub state: DensityMatrix,
}

/// Maps the normalised Wootters spectrum `lambda_i / sum lambda` onto the
/// Bell weights `(Psi-, Phi-, Phi+, Psi+)`. That assignment is the one that
/// yields `r1 <= r2 <= r3 <= 0` when the input is entangled.
pub fn lqcc_bell_target(rho: &DensityMatrix) -> Result<LqccTarget> {
    let lambdas = wootters_lambdas(rho)?;
    let margin = lambdas.concurrence_margin();
    if margin <= 0.0 {
        return Err(Error::Separable {
            concurrence: margin.max(0.0),
        });
    }
    let sum = lambdas.sum();
    let weights = lambdas.values().map(|l| l / sum);
    let params = BellDiagonalParams::from_probabilities(weights)?;
    Ok(LqccTarget {
        params,
        state: states::bell_diagonal(params),
    })
}

pub fn extractable_concurrence(rho: &DensityMatrix) -> Result<f64> {
    wootters_lambdas(rho).map(|l| l.extractable_concurrence())
}

/// Sufficient condition for a single-copy LQCC gain: a nonzero local Bloch vector.
///
/// A `false` does not prove the state cannot be improved.
pub fn is_lqcc_improvable(rho: &DensityMatrix) -> Result<bool> {
    let d = linalg::pauli_decompose(rho.matrix())?;
    Ok(
        d.bloch_a_norm() > tolerances::BLOCH_NONZERO
            || d.bloch_b_norm() > tolerances::BLOCH_NONZERO,
    )
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConcurrenceReport {
    pub lambdas: LambdaQuadruple,
    pub concurrence: f64,
    pub eof: f64,
    pub lambda_sum: f64,
    pub extractable_concurrence: f64,
}

pub fn concurrence_report(rho: &DensityMatrix) -> Result<ConcurrenceReport> {
    let lambdas = wootters_lambdas(rho)?;
    let concurrence = lambdas.concurrence().min(1.0);
    Ok(ConcurrenceReport {
        lambdas,
        concurrence,
        eof: eof_from_concurrence(concurrence)?,
        lambda_sum: lambdas.sum(),
        extractable_concurrence: lambdas.extractable_concurrence(),
    })
}
