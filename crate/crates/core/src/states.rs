//! Validated two-qubit density matrices and the state families built from them.
//!
//! Bell states use `|Psi-+> = (|01> -+ |10>)/sqrt 2` and
//! `|Phi+-> = (|00> +- |11>)/sqrt 2`.

use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::linalg::{self, Mat4, IDENTITY_4};
use crate::tolerances;
use crate::{Error, Result};

/// Hermitian, unit-trace, positive semidefinite 4x4 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix(Mat4);

impl DensityMatrix {
    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat4 {
        self.0
    }

    /// Eigenvalues, descending.
    pub fn spectrum(&self) -> Result<[f64; 4]> {
        linalg::hermitian_eigenvalues(&self.0, tolerances::STATE_VALIDATION)
    }

    /// `U rho U^dagger`; the caller guarantees `u` is unitary.
    pub fn conjugate_by(&self, u: &Mat4) -> DensityMatrix {
        DensityMatrix(*u * self.0 * u.dagger())
    }

    /// Wraps a matrix that is a state by construction.
    pub(crate) fn trusted(m: Mat4) -> Self {
        DensityMatrix(m)
    }
}

impl TryFrom<Mat4> for DensityMatrix {
    type Error = Error;
    fn try_from(m: Mat4) -> Result<Self> {
        validate(m)
    }
}

/// Checks Hermiticity, unit trace and positivity, in that order.
pub fn validate(m: Mat4) -> Result<DensityMatrix> {
    let tol = tolerances::STATE_VALIDATION;
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let asymmetry = m.hermitian_asymmetry();
    if asymmetry > tol {
        return Err(Error::NotHermitian { asymmetry });
    }
    let deviation = m.trace().re - 1.0;
    if deviation.abs() > tol {
        return Err(Error::TraceMismatch { deviation });
    }
    let ev = linalg::hermitian_eigenvalues(&m, tol)?;
    if ev[3] < -tol {
        return Err(Error::NotPositive {
            min_eigenvalue: ev[3],
        });
    }
    Ok(DensityMatrix(m))
}

/// Werner fidelity `F`, restricted to the entangled range `1/2 < F <= 1`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct WernerParams(f64);

impl WernerParams {
    pub fn new(fidelity: f64) -> Result<Self> {
        if fidelity > 0.5 && fidelity <= 1.0 {
            Ok(WernerParams(fidelity))
        } else {
            Err(Error::Parameter {
                name: "F",
                value: fidelity,
                requirement: "F in (1/2, 1]",
            })
        }
    }

    pub fn fidelity(self) -> f64 {
        self.0
    }

    /// Weight `(1 - F)/3` of the identity.
    pub fn noise_weight(self) -> f64 {
        (1.0 - self.0) / 3.0
    }

    /// Weight `(4F - 1)/3` of the pure component.
    pub fn pure_weight(self) -> f64 {
        (4.0 * self.0 - 1.0) / 3.0
    }
}

/// Schmidt weight `a` of `sqrt(a)|00> + sqrt(1-a)|11>`, with `1/2 <= a <= 1`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct SchmidtParam(f64);

impl SchmidtParam {
    pub fn new(a: f64) -> Result<Self> {
        if (0.5..=1.0).contains(&a) {
            Ok(SchmidtParam(a))
        } else {
            Err(Error::Parameter {
                name: "a",
                value: a,
                requirement: "a in [1/2, 1]",
            })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `sqrt(a)|00> + sqrt(1-a)|11>`
    pub fn ket(self) -> [Complex64; 4] {
        [
            re(libm::sqrt(self.0)),
            re(0.0),
            re(0.0),
            re(libm::sqrt(1.0 - self.0)),
        ]
    }
}

/// Correlation coefficients `(r1, r2, r3)` of `1/4 (I + sum r_i s_i x s_i)`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BellDiagonalParams {
    r: [f64; 3],
}

impl BellDiagonalParams {
    pub fn new(r: [f64; 3]) -> Result<Self> {
        let params = BellDiagonalParams { r };
        if r.iter().any(|x| !x.is_finite()) {
            return Err(Error::Parameter {
                name: "r",
                value: f64::NAN,
                requirement: "finite correlation coefficients",
            });
        }
        let min = params
            .probabilities()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min < -tolerances::BELL_PROBABILITY {
            return Err(Error::Parameter {
                name: "Bell-basis probability",
                value: min,
                requirement: "all four Bell-basis probabilities >= 0",
            });
        }
        Ok(params)
    }

    /// Inverse of [`Self::probabilities`].
    pub fn from_probabilities(p: [f64; 4]) -> Result<Self> {
        let [psi_m, phi_m, phi_p, psi_p] = p;
        let norm = psi_m + phi_m + phi_p + psi_p;
        if (norm - 1.0).abs() > tolerances::MEMS_NORMALIZATION {
            return Err(Error::Parameter {
                name: "sum of Bell-basis probabilities",
                value: norm,
                requirement: "probabilities sum to 1",
            });
        }
        Self::new([
            1.0 - 2.0 * (psi_m + phi_m),
            1.0 - 2.0 * (psi_m + phi_p),
            1.0 - 2.0 * (psi_m + psi_p),
        ])
    }

    pub fn r(&self) -> [f64; 3] {
        self.r
    }

    /// Weights on `(|Psi->, |Phi->, |Phi+>, |Psi+>)`.
    pub fn probabilities(&self) -> [f64; 4] {
        let [r1, r2, r3] = self.r;
        [
            (1.0 - r1 - r2 - r3) / 4.0,
            (1.0 - r1 + r2 + r3) / 4.0,
            (1.0 + r1 - r2 + r3) / 4.0,
            (1.0 + r1 + r2 - r3) / 4.0,
        ]
    }
}

/// Eigenvalues `p1 >= p2 >= p3 >= p4 >= 0` of a MEMS-family state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MemsSpectrum([f64; 4]);

impl MemsSpectrum {
    pub fn new(p: [f64; 4]) -> Result<Self> {
        if p.iter().any(|x| !x.is_finite()) || p[3] < 0.0 {
            return Err(Error::Parameter {
                name: "p4",
                value: p[3],
                requirement: "finite, nonnegative weights",
            });
        }
        if let Some(i) = (0..3).find(|&i| p[i] < p[i + 1]) {
            return Err(Error::Parameter {
                name: ["p1", "p2", "p3"][i],
                value: p[i],
                requirement: "p1 >= p2 >= p3 >= p4",
            });
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > tolerances::MEMS_NORMALIZATION {
            return Err(Error::Parameter {
                name: "sum of p",
                value: sum,
                requirement: "p1 + p2 + p3 + p4 = 1",
            });
        }
        Ok(MemsSpectrum(p))
    }

    pub fn weights(&self) -> [f64; 4] {
        self.0
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `(|01> - |10>)/sqrt 2`
pub fn psi_minus() -> [Complex64; 4] {
    [re(0.0), re(FRAC_1_SQRT_2), re(-FRAC_1_SQRT_2), re(0.0)]
}

/// `(|01> + |10>)/sqrt 2`
pub fn psi_plus() -> [Complex64; 4] {
    [re(0.0), re(FRAC_1_SQRT_2), re(FRAC_1_SQRT_2), re(0.0)]
}

/// `(|00> + |11>)/sqrt 2`
pub fn phi_plus() -> [Complex64; 4] {
    [re(FRAC_1_SQRT_2), re(0.0), re(0.0), re(FRAC_1_SQRT_2)]
}

/// `(|00> - |11>)/sqrt 2`
pub fn phi_minus() -> [Complex64; 4] {
    [re(FRAC_1_SQRT_2), re(0.0), re(0.0), re(-FRAC_1_SQRT_2)]
}

/// Computational basis ket `|index>`.
pub fn basis_ket(index: usize) -> [Complex64; 4] {
    core::array::from_fn(|i| re(if i == index { 1.0 } else { 0.0 }))
}

pub fn maximally_mixed() -> DensityMatrix {
    DensityMatrix(IDENTITY_4.scale(0.25))
}

/// Rank-one state from a normalised ket.
pub fn pure(ket: &[Complex64; 4]) -> Result<DensityMatrix> {
    validate(Mat4::outer(ket))
}

/// `((1-F)/3) I + ((4F-1)/3) |Psi-><Psi-|`
pub fn werner(params: WernerParams) -> DensityMatrix {
    mix_with_identity(params, &psi_minus())
}

/// The Werner derivative `((1-F)/3) I + ((4F-1)/3) |psi><psi|` with `psi` the
/// Schmidt state of weight `a`.
///
/// Any `a` in `[1/2, 1]` is accepted, including the separable tail.
pub fn werner_derivative(params: WernerParams, a: SchmidtParam) -> DensityMatrix {
    mix_with_identity(params, &a.ket())
}

fn mix_with_identity(params: WernerParams, ket: &[Complex64; 4]) -> DensityMatrix {
    DensityMatrix(
        IDENTITY_4.scale(params.noise_weight()) + Mat4::outer(ket).scale(params.pure_weight()),
    )
}

/// Projector onto `sqrt(a)|00> + sqrt(1-a)|11>`.
pub fn schmidt_pure(a: SchmidtParam) -> DensityMatrix {
    DensityMatrix(Mat4::outer(&a.ket()))
}

/// `1/4 (I + sum_i r_i s_i x s_i)`
pub fn bell_diagonal(params: BellDiagonalParams) -> DensityMatrix {
    let mut m = IDENTITY_4;
    for (r, s) in params.r.iter().zip(linalg::PAULIS.iter()) {
        m = m + linalg::kron(s, s).scale(*r);
    }
    DensityMatrix(m.scale(0.25))
}

/// `p1 |Psi-><Psi-| + p2 |00><00| + p3 |Psi+><Psi+| + p4 |11><11|`
pub fn mems(p: MemsSpectrum) -> DensityMatrix {
    let [p1, p2, p3, p4] = p.0;
    DensityMatrix(
        Mat4::outer(&psi_minus()).scale(p1)
            + Mat4::outer(&basis_ket(0)).scale(p2)
            + Mat4::outer(&psi_plus()).scale(p3)
            + Mat4::outer(&basis_ket(3)).scale(p4),
    )
}
