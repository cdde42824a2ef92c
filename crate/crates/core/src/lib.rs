//! Two-qubit entanglement analysis centred on Werner states.
//!
//! The crate is `no_std` (it needs `alloc` only for sweep results and
//! verification reports) and is organised bottom-up:
//!
//! * [`linalg`]: fixed-size complex matrices, a cyclic Jacobi eigensolver for
//!   Hermitian matrices, PSD square roots, Kronecker products, partial
//!   transposes and the two-qubit Pauli decomposition.
//! * [`states`]: validated density matrices and the state families used
//!   throughout (Werner, Werner derivatives, Schmidt pure states,
//!   Bell-diagonal states, the MEMS family).
//! * [`measures`]: spin flip, Wootters spectrum, concurrence, entanglement of
//!   formation, PPT test, the Bell-diagonal LQCC target and the extractable
//!   concurrence for arbitrary two-qubit states.
//! * [`theory`]: closed-form expressions for Werner derivatives, their
//!   gradients and the extractable-entanglement gap.
//! * [`analysis`]: grid sweeps and verification suites that cross-check the
//!   closed forms against the numeric pipeline.
//!
//! All matrices use the standard basis ordering `|00>, |01>, |10>, |11>`.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
mod error;
pub mod linalg;
pub mod measures;
#[cfg(feature = "random")]
pub mod random;
pub mod states;
pub mod theory;
pub mod tolerances;

pub use error::{Error, Result};
pub use num_complex::Complex64;
