//! Closed forms for Werner derivatives.
//!
//! For fidelity `F` and Schmidt weight `a`, with `q = a(1-a)`:
//!
//! ```text
//! G   = 3F(1-F) / (4F-1)^2
//! G+- = [2q + G +- 2 sqrt(q (q + G))]^(1/2)
//! lambda = ((4F-1) G+ / 3, (4F-1) G- / 3, (1-F)/3, (1-F)/3)
//! ```
//!
//! `G+ G- = G` identically, and `G-` is evaluated as `G / G+` to avoid the
//! cancellation inside the bracket when `G` is small.

use crate::measures::LambdaQuadruple;
use crate::states::{self, MemsSpectrum, SchmidtParam, WernerParams};
use crate::tolerances;
use crate::{Error, Result};

/// Half-open window `[lower, upper)` of Schmidt weights giving entangled
/// Werner derivatives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntangledRange {
    pub lower: f64,
    pub upper: f64,
}

impl EntangledRange {
    pub fn contains(&self, a: f64) -> bool {
        a >= self.lower && a < self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// `a* = (1 + sqrt(3(4F^2 - 1)) / (4F - 1)) / 2`, capped at 1.
pub fn entangled_a_range(params: WernerParams) -> EntangledRange {
    let f = params.fidelity();
    let upper = 0.5 * (1.0 + libm::sqrt(3.0 * (4.0 * f * f - 1.0)) / (4.0 * f - 1.0));
    EntangledRange {
        lower: 0.5,
        upper: upper.min(1.0),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClosedFormIntermediates {
    pub g: f64,
    pub g_plus: f64,
    pub g_minus: f64,
}

/// `3F(1-F)/(4F-1)^2`
pub fn g_of(params: WernerParams) -> f64 {
    let f = params.fidelity();
    3.0 * f * (1.0 - f) / ((4.0 * f - 1.0) * (4.0 * f - 1.0))
}

/// `sqrt(q (q + G))` with `q = a(1-a)`; appears in every gradient denominator.
fn root_term(g: f64, a: f64) -> f64 {
    let q = a * (1.0 - a);
    libm::sqrt(q * (q + g))
}

pub fn intermediates(params: WernerParams, a: SchmidtParam) -> ClosedFormIntermediates {
    let g = g_of(params);
    let a = a.value();
    let q = a * (1.0 - a);
    let g_plus = libm::sqrt(2.0 * q + g + 2.0 * root_term(g, a));
    let g_minus = if g_plus > 0.0 { g / g_plus } else { 0.0 };
    ClosedFormIntermediates { g, g_plus, g_minus }
}

pub fn closed_lambdas(
    params: WernerParams,
    a: SchmidtParam,
) -> (LambdaQuadruple, ClosedFormIntermediates) {
    let im = intermediates(params, a);
    let k = params.pure_weight();
    let tail = params.noise_weight();
    let lambdas = LambdaQuadruple::new([k * im.g_plus, k * im.g_minus, tail, tail])
        .expect("closed-form lambdas are finite and nonnegative");
    (lambdas, im)
}

/// `(4F-1)(G+ - G-)/3 - 2(1-F)/3`, not clamped: negative values mean the
/// derivative is separable.
pub fn closed_concurrence(params: WernerParams, a: SchmidtParam) -> f64 {
    let im = intermediates(params, a);
    params.pure_weight() * (im.g_plus - im.g_minus) - 2.0 * params.noise_weight()
}

/// `(1-F) G+ - F G-`, the `a`-dependent part of the gap numerator.
pub fn gap_numerator_term(params: WernerParams, a: SchmidtParam) -> f64 {
    let f = params.fidelity();
    let im = intermediates(params, a);
    (1.0 - f) * im.g_plus - f * im.g_minus
}

fn check_interior(operation: &'static str, a: SchmidtParam) -> Result<f64> {
    let a = a.value();
    if a < 1.0 {
        Ok(a)
    } else {
        Err(Error::Domain {
            operation,
            value: a,
            requirement: "1/2 <= a < 1",
        })
    }
}

/// `dC/da = (4F-1)(1-2a) (G+ + G-) / (6 sqrt(q(q+G)))`
pub fn concurrence_gradient(params: WernerParams, a: SchmidtParam) -> Result<f64> {
    let av = check_interior("concurrence_gradient", a)?;
    let im = intermediates(params, a);
    let f = params.fidelity();
    Ok((4.0 * f - 1.0) * (1.0 - 2.0 * av) * (im.g_plus + im.g_minus) / (6.0 * root_term(im.g, av)))
}

/// `d/da [(1-F) G+ - F G-] = (1-2a) [(1-F) G+ + F G-] / (2 sqrt(q(q+G)))`
pub fn gap_numerator_gradient(params: WernerParams, a: SchmidtParam) -> Result<f64> {
    let av = check_interior("gap_numerator_gradient", a)?;
    let im = intermediates(params, a);
    let f = params.fidelity();
    Ok((1.0 - 2.0 * av) * ((1.0 - f) * im.g_plus + f * im.g_minus) / (2.0 * root_term(im.g, av)))
}

/// `C(rho') - C(rho_W)` split into its numerator and denominator.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GapReport {
    pub gap: f64,
    pub numerator: f64,
    pub denominator: f64,
}

/// Gap between the extractable concurrence of the derivative and the Werner
/// concurrence:
///
/// ```text
/// gap = 2 [(1-F) G+ - F G- - 2F(1-F)/(4F-1)] / [G+ + G- + 2(1-F)/(4F-1)]
/// ```
///
/// The numerator is maximal at `a = 1/2`, where it vanishes.
pub fn extractable_gap(params: WernerParams, a: SchmidtParam) -> Result<GapReport> {
    let range = entangled_a_range(params);
    if !range.contains(a.value()) {
        return Err(Error::Domain {
            operation: "extractable_gap",
            value: a.value(),
            requirement: "a inside the entangled window [1/2, a*)",
        });
    }
    let f = params.fidelity();
    let im = intermediates(params, a);
    let offset = 2.0 * (1.0 - f) / (4.0 * f - 1.0);
    let numerator = (1.0 - f) * im.g_plus - f * im.g_minus - f * offset;
    let denominator = im.g_plus + im.g_minus + offset;
    Ok(GapReport {
        gap: 2.0 * numerator / denominator,
        numerator,
        denominator,
    })
}

/// `2F - 1`
pub fn werner_concurrence(params: WernerParams) -> f64 {
    2.0 * params.fidelity() - 1.0
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MemsClass {
    /// `p2 = p3 = p4`: the state is the Werner state of this fidelity.
    Werner { fidelity: f64 },
    /// `p2 != p4`: nonzero local Bloch vectors, so single-copy LQCC helps.
    LqccImprovable,
}

impl MemsClass {
    pub fn name(&self) -> &'static str {
        match self {
            MemsClass::Werner { .. } => "werner",
            MemsClass::LqccImprovable => "lqcc-improvable-mems",
        }
    }
}

pub fn classify_mems(p: MemsSpectrum) -> MemsClass {
    let [p1, p2, _, p4] = p.weights();
    if (p2 - p4).abs() <= tolerances::MEMS_DEGENERACY {
        MemsClass::Werner { fidelity: p1 }
    } else {
        MemsClass::LqccImprovable
    }
}

/// The Werner state with fidelity `F` as a MEMS spectrum, for any
/// `1/4 <= F <= 1`.
pub fn werner_spectrum(fidelity: f64) -> Result<MemsSpectrum> {
    let q = (1.0 - fidelity) / 3.0;
    MemsSpectrum::new([fidelity, q, q, q])
}

/// Convenience: `werner_derivative` restricted to the entangled window.
pub fn entangled_derivative(
    params: WernerParams,
    a: SchmidtParam,
) -> Result<states::DensityMatrix> {
    if entangled_a_range(params).contains(a.value()) {
        Ok(states::werner_derivative(params, a))
    } else {
        Err(Error::Domain {
            operation: "entangled_derivative",
            value: a.value(),
            requirement: "a inside the entangled window [1/2, a*)",
        })
    }
}
