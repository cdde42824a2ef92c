use alloc::vec::Vec;

use crate::measures;
use crate::states::{self, SchmidtParam, WernerParams};
use crate::theory;
use crate::tolerances;
use crate::{Error, Result};

/// Tolerances a sweep's row-level checks and verification suites use.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tolerances {
    pub oracle: f64,
    pub bound: f64,
    pub gradient: f64,
    pub boundary: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            oracle: tolerances::ORACLE,
            bound: tolerances::GAP_BOUND,
            gradient: tolerances::GRADIENT,
            boundary: tolerances::BOUNDARY,
        }
    }
}

/// `f_steps` fidelities spaced evenly over `[f_min, f_max]`; for each, `a_steps`
/// Schmidt weights spaced evenly over the half-open window `[1/2, a*(F))`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepConfig {
    pub f_min: f64,
    pub f_max: f64,
    pub f_steps: usize,
    pub a_steps: usize,
    pub tolerances: Tolerances,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            f_min: 0.505,
            f_max: 1.0,
            f_steps: 200,
            a_steps: 200,
            tolerances: Tolerances::default(),
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.f_min > 0.5 && self.f_min < self.f_max && self.f_max <= 1.0) {
            return Err(Error::Config("need 1/2 < f_min < f_max <= 1"));
        }
        if self.f_steps < 2 || self.a_steps < 2 {
            return Err(Error::Config("f_steps and a_steps must be at least 2"));
        }
        Ok(())
    }

    pub fn fidelities(&self) -> Vec<WernerParams> {
        let last = self.f_steps - 1;
        (0..self.f_steps)
            .map(|i| {
                let f = if i == last {
                    self.f_max
                } else {
                    self.f_min + (self.f_max - self.f_min) * i as f64 / last as f64
                };
                WernerParams::new(f).expect("grid stays inside (1/2, 1]")
            })
            .collect()
    }

    /// Schmidt weights for one fidelity, ascending, starting at exactly 1/2.
    pub fn schmidt_weights(&self, params: WernerParams) -> Vec<SchmidtParam> {
        let width = theory::entangled_a_range(params).width();
        (0..self.a_steps)
            .map(|k| {
                SchmidtParam::new(0.5 + width * k as f64 / self.a_steps as f64)
                    .expect("grid stays inside [1/2, 1)")
            })
            .collect()
    }

    /// All grid points ordered by `(F, a)` ascending.
    pub fn points(&self) -> Vec<(WernerParams, SchmidtParam)> {
        self.fidelities()
            .into_iter()
            .flat_map(|f| self.schmidt_weights(f).into_iter().map(move |a| (f, a)))
            .collect()
    }
}

/// Every quantity computed at one `(F, a)` grid point.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepRecord {
    #[cfg_attr(feature = "serde", serde(rename = "F"))]
    pub fidelity: f64,
    pub a: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub lambda4: f64,
    /// Closed-form concurrence.
    pub c_closed: f64,
    /// Concurrence from the numeric Wootters pipeline.
    pub c_numeric: f64,
    pub c_extractable: f64,
    pub c_werner: f64,
    pub gap: f64,
    #[cfg_attr(feature = "serde", serde(rename = "dC_da"))]
    pub dc_da: f64,
    pub ppt_min_eig: f64,
    pub entangled: bool,
}

/// `a` must lie in the entangled window of `F`.
pub fn evaluate_point(params: WernerParams, a: SchmidtParam) -> Result<SweepRecord> {
    let rho = states::werner_derivative(params, a);
    let numeric = measures::wootters_lambdas(&rho)?;
    let [lambda1, lambda2, lambda3, lambda4] = theory::closed_lambdas(params, a).0.values();
    let ppt_min_eig = measures::ppt_min_eigenvalue(&rho)?;
    Ok(SweepRecord {
        fidelity: params.fidelity(),
        a: a.value(),
        lambda1,
        lambda2,
        lambda3,
        lambda4,
        c_closed: theory::closed_concurrence(params, a),
        c_numeric: numeric.concurrence(),
        c_extractable: numeric.extractable_concurrence(),
        c_werner: theory::werner_concurrence(params),
        gap: theory::extractable_gap(params, a)?.gap,
        dc_da: theory::concurrence_gradient(params, a)?,
        ppt_min_eig,
        entangled: ppt_min_eig < -tolerances::PPT_NEGATIVE,
    })
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    cfg.points()
        .into_iter()
        .map(|(f, a)| evaluate_point(f, a))
        .collect()
}
