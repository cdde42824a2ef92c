//! Fixed-size complex linear algebra for one- and two-qubit operators.
//!
//! Everything here works on stack-allocated `N x N` matrices. The eigensolver
//! is a cyclic complex Jacobi iteration, which is plenty for `N <= 8` and keeps
//! small eigenvalues accurate to roughly machine epsilon times the matrix norm.

use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::tolerances;
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dense row-major `N x N` complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix<const N: usize>(pub [[Complex64; N]; N]);

/// Single-qubit operator.
pub type Mat2 = Matrix<2>;
/// Two-qubit operator in the basis `|00>, |01>, |10>, |11>`.
pub type Mat4 = Matrix<4>;

pub const IDENTITY_2: Mat2 = Matrix([[ONE, ZERO], [ZERO, ONE]]);
pub const SIGMA_1: Mat2 = Matrix([[ZERO, ONE], [ONE, ZERO]]);
pub const SIGMA_2: Mat2 = Matrix([[ZERO, Complex64::new(0.0, -1.0)], [I, ZERO]]);
pub const SIGMA_3: Mat2 = Matrix([[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]]);
pub const IDENTITY_4: Mat4 = Matrix([
    [ONE, ZERO, ZERO, ZERO],
    [ZERO, ONE, ZERO, ZERO],
    [ZERO, ZERO, ONE, ZERO],
    [ZERO, ZERO, ZERO, ONE],
]);

/// The three Pauli matrices in order.
pub const PAULIS: [Mat2; 3] = [SIGMA_1, SIGMA_2, SIGMA_3];

impl<const N: usize> Matrix<N> {
    pub const fn zeros() -> Self {
        Matrix([[ZERO; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn from_real(rows: [[f64; N]; N]) -> Self {
        Self::from_fn(|i, j| Complex64::new(rows[i][j], 0.0))
    }

    pub fn diagonal(d: [f64; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = Complex64::new(d[i], 0.0);
        }
        m
    }

    /// `|v><v|` for a (not necessarily normalised) vector.
    pub fn outer(v: &[Complex64; N]) -> Self {
        Self::from_fn(|i, j| v[i] * v[j].conj())
    }

    pub fn entries(&self) -> &[[Complex64; N]; N] {
        &self.0
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i])
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self::from_fn(|i, j| self.0[i][j].conj())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn trace(&self) -> Complex64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.0.iter().flatten().map(|z| z.norm_sqr()).sum())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest `|M[i][j] - conj(M[j][i])|`.
    pub fn hermitian_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..N {
            for j in i..N {
                worst = worst.max((self.0[i][j] - self.0[j][i].conj()).norm());
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl<const N: usize> Default for Matrix<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> Index<(usize, usize)> for Matrix<N> {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for Matrix<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Add for Matrix<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl<const N: usize> Sub for Matrix<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl<const N: usize> Neg for Matrix<N> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_fn(|i, j| -self.0[i][j])
    }
}

impl<const N: usize> Mul for Matrix<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| (0..N).map(|k| self.0[i][k] * rhs.0[k][j]).sum())
    }
}

impl<const N: usize> Mul<f64> for Matrix<N> {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

/// Kronecker product; block `(i, j)` of the result is `a[i][j] * b`.
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    Mat4::from_fn(|r, c| a.0[r / 2][c / 2] * b.0[r % 2][c % 2])
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Copy, Debug)]
pub struct HermitianEigen<const N: usize> {
    /// Eigenvalues in descending order.
    pub values: [f64; N],
    /// Unitary whose column `k` is the eigenvector for `values[k]`.
    pub vectors: Matrix<N>,
}

impl<const N: usize> HermitianEigen<N> {
    /// `V diag(f(values)) V^dagger`.
    pub fn reconstruct_with(&self, mut f: impl FnMut(f64) -> f64) -> Matrix<N> {
        let mapped: [f64; N] = core::array::from_fn(|k| f(self.values[k]));
        let v = &self.vectors.0;
        Matrix::from_fn(|i, j| (0..N).map(|k| v[i][k] * v[j][k].conj() * mapped[k]).sum())
    }
}

fn check_hermitian<const N: usize>(m: &Matrix<N>, tol: f64) -> Result<()> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let asymmetry = m.hermitian_asymmetry();
    if asymmetry > tol {
        return Err(Error::NotHermitian { asymmetry });
    }
    Ok(())
}

fn off_diagonal_norm<const N: usize>(a: &[[Complex64; N]; N]) -> f64 {
    let mut s = 0.0;
    for i in 0..N {
        for j in 0..N {
            if i != j {
                s += a[i][j].norm_sqr();
            }
        }
    }
    libm::sqrt(s)
}

/// Cyclic complex Jacobi eigen-decomposition.
///
/// `m` must be Hermitian to within `tol`; it is symmetrised before iterating.
pub fn hermitian_eigen<const N: usize>(m: &Matrix<N>, tol: f64) -> Result<HermitianEigen<N>> {
    check_hermitian(m, tol)?;
    let mut a = Matrix::<N>::from_fn(|i, j| (m.0[i][j] + m.0[j][i].conj()) * 0.5).0;
    let mut v = Matrix::<N>::identity().0;
    let threshold = tolerances::JACOBI_OFF_DIAGONAL * m.frobenius_norm().max(1.0);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off < threshold {
            break;
        }
        if sweeps == tolerances::JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_diagonal: off,
            });
        }
        sweeps += 1;
        for p in 0..N {
            for q in (p + 1)..N {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: [usize; N] = core::array::from_fn(|k| k);
    // stable sort keeps ties in index order
    order.sort_by(|&x, &y| a[y][y].re.total_cmp(&a[x][x].re));
    let values = core::array::from_fn(|k| a[order[k]][order[k]].re);
    let vectors = Matrix::from_fn(|i, k| v[i][order[k]]);
    Ok(HermitianEigen { values, vectors })
}

/// Annihilates `a[p][q]` with a unitary acting on rows/columns `p` and `q`.
fn rotate<const N: usize>(
    a: &mut [[Complex64; N]; N],
    v: &mut [[Complex64; N]; N],
    p: usize,
    q: usize,
) {
    let apq = a[p][q];
    let r = apq.norm();
    if r < f64::MIN_POSITIVE {
        return;
    }
    // Phase that makes the pivot real and positive.
    let phase = apq / r;
    let theta = (a[q][q].re - a[p][p].re) / (2.0 * r);
    let t = if theta >= 0.0 {
        1.0 / (theta + libm::sqrt(theta * theta + 1.0))
    } else {
        -1.0 / (-theta + libm::sqrt(theta * theta + 1.0))
    };
    let c = 1.0 / libm::sqrt(t * t + 1.0);
    let s = t * c;

    // U restricted to (p, q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
    let ph = phase.conj();
    let u_pp = Complex64::new(c, 0.0);
    let u_pq = Complex64::new(s, 0.0);
    let u_qp = ph * -s;
    let u_qq = ph * c;

    for row in a.iter_mut() {
        let (x, y) = (row[p], row[q]);
        row[p] = x * u_pp + y * u_qp;
        row[q] = x * u_pq + y * u_qq;
    }
    for k in 0..N {
        let (x, y) = (a[p][k], a[q][k]);
        a[p][k] = u_pp.conj() * x + u_qp.conj() * y;
        a[q][k] = u_pq.conj() * x + u_qq.conj() * y;
    }
    a[p][q] = ZERO;
    a[q][p] = ZERO;
    a[p][p].im = 0.0;
    a[q][q].im = 0.0;

    for row in v.iter_mut() {
        let (x, y) = (row[p], row[q]);
        row[p] = x * u_pp + y * u_qp;
        row[q] = x * u_pq + y * u_qq;
    }
}

/// Real eigenvalues of a Hermitian matrix, descending.
pub fn hermitian_eigenvalues<const N: usize>(m: &Matrix<N>, tol: f64) -> Result<[f64; N]> {
    hermitian_eigen(m, tol).map(|e| e.values)
}

/// Principal square root of a Hermitian PSD matrix.
///
/// Eigenvalues in `[-tol, 0)` are clamped to zero; anything lower is rejected.
pub fn matrix_sqrt_psd<const N: usize>(m: &Matrix<N>, tol: f64) -> Result<Matrix<N>> {
    let eig = hermitian_eigen(m, tol)?;
    let min = eig.values[N - 1];
    if min < -tol {
        return Err(Error::NotPositive {
            min_eigenvalue: min,
        });
    }
    Ok(eig.reconstruct_with(|x| libm::sqrt(x.max(0.0))))
}

/// Tensor factor a partial transpose acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Partial transpose in the standard basis; index `2 * a + b` labels `|ab>`.
pub fn partial_transpose(rho: &Mat4, subsystem: Subsystem) -> Mat4 {
    Mat4::from_fn(|r, c| {
        let (a, b) = (r / 2, r % 2);
        let (a2, b2) = (c / 2, c % 2);
        match subsystem {
            Subsystem::A => rho.0[2 * a2 + b][2 * a + b2],
            Subsystem::B => rho.0[2 * a + b2][2 * a2 + b],
        }
    })
}

/// Coordinates of a two-qubit operator in the Pauli product basis:
///
/// `rho = 1/4 [ scalar I + sum_i bloch_a[i] s_i x I + sum_i bloch_b[i] I x s_i
///              + sum_ij corr[i][j] s_i x s_j ]`
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PauliDecomposition {
    pub scalar: f64,
    pub bloch_a: [f64; 3],
    pub bloch_b: [f64; 3],
    pub corr: [[f64; 3]; 3],
}

impl PauliDecomposition {
    pub fn reconstruct(&self) -> Mat4 {
        let mut m = IDENTITY_4.scale(self.scalar);
        for i in 0..3 {
            m = m + kron(&PAULIS[i], &IDENTITY_2).scale(self.bloch_a[i]);
            m = m + kron(&IDENTITY_2, &PAULIS[i]).scale(self.bloch_b[i]);
            for j in 0..3 {
                m = m + kron(&PAULIS[i], &PAULIS[j]).scale(self.corr[i][j]);
            }
        }
        m.scale(0.25)
    }

    pub fn bloch_a_norm(&self) -> f64 {
        norm3(&self.bloch_a)
    }

    pub fn bloch_b_norm(&self) -> f64 {
        norm3(&self.bloch_b)
    }
}

fn norm3(v: &[f64; 3]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum())
}

fn expectation(rho: &Mat4, op: &Mat4) -> f64 {
    (*rho * *op).trace().re
}

/// Pauli coordinates of a Hermitian unit-trace operator.
pub fn pauli_decompose(rho: &Mat4) -> Result<PauliDecomposition> {
    check_hermitian(rho, tolerances::STATE_VALIDATION)?;
    let deviation = rho.trace().re - 1.0;
    if deviation.abs() > tolerances::STATE_VALIDATION {
        return Err(Error::TraceMismatch { deviation });
    }
    let bloch_a = core::array::from_fn(|i| expectation(rho, &kron(&PAULIS[i], &IDENTITY_2)));
    let bloch_b = core::array::from_fn(|i| expectation(rho, &kron(&IDENTITY_2, &PAULIS[i])));
    let corr = core::array::from_fn(|i| {
        core::array::from_fn(|j| expectation(rho, &kron(&PAULIS[i], &PAULIS[j])))
    });
    Ok(PauliDecomposition {
        scalar: 1.0,
        bloch_a,
        bloch_b,
        corr,
    })
}
