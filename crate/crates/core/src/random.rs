//! Random states and unitaries for tests and benchmarks.

use core::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::linalg::{self, Mat2, Mat4, Matrix};
use crate::states::{self, BellDiagonalParams, DensityMatrix};

/// Standard normal draw (Box-Muller).
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * PI * u2)
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(gaussian(rng), gaussian(rng))
}

/// Hilbert-Schmidt distributed state `G G^dagger / tr(G G^dagger)`.
pub fn density_matrix<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let g = Mat4::from_fn(|_, _| complex_gaussian(rng));
    let m = g * g.dagger();
    let m = m.scale(1.0 / m.trace().re);
    states::validate(m).expect("Ginibre product is a valid state")
}

/// Bell-diagonal state with weights uniform on the probability simplex.
pub fn bell_diagonal<R: Rng + ?Sized>(rng: &mut R) -> BellDiagonalParams {
    loop {
        let e: [f64; 4] = core::array::from_fn(|_| -libm::log(1.0 - rng.gen::<f64>()));
        let total: f64 = e.iter().sum();
        let mut p = e.map(|x| x / total);
        // put rounding residue on the largest weight so the sum is 1
        let (imax, _) = p
            .iter()
            .enumerate()
            .fold((0, f64::MIN), |b, (i, &x)| if x > b.1 { (i, x) } else { b });
        let others: f64 = p
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != imax)
            .map(|(_, x)| x)
            .sum();
        p[imax] = 1.0 - others;
        if let Ok(params) = BellDiagonalParams::from_probabilities(p) {
            return params;
        }
    }
}

/// Haar-random element of U(2).
pub fn unitary2<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    let v: [f64; 4] = core::array::from_fn(|_| gaussian(rng));
    let n = libm::sqrt(v.iter().map(|x| x * x).sum());
    let a = Complex64::new(v[0] / n, v[1] / n);
    let b = Complex64::new(v[2] / n, v[3] / n);
    let phase = Complex64::from_polar(1.0, 2.0 * PI * rng.gen::<f64>());
    Matrix([
        [a * phase, -b.conj() * phase],
        [b * phase, a.conj() * phase],
    ])
}

/// `U_A x U_B` with independent Haar factors.
pub fn local_unitary<R: Rng + ?Sized>(rng: &mut R) -> Mat4 {
    linalg::kron(&unitary2(rng), &unitary2(rng))
}
