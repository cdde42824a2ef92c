use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::sweep::SweepConfig;
use crate::measures;
use crate::states::{self, BellDiagonalParams, MemsSpectrum, SchmidtParam, WernerParams};
use crate::theory::{self, MemsClass};
use crate::tolerances;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Oracle,
    MaxAtHalf,
    Monotonicity,
    Bound,
    Boundary,
    Gradients,
    BellFixed,
    Pure,
    Mems,
    All,
}

impl Suite {
    /// Every concrete suite, in the order `All` runs them.
    pub const CONCRETE: [Suite; 9] = [
        Suite::Oracle,
        Suite::MaxAtHalf,
        Suite::Monotonicity,
        Suite::Bound,
        Suite::Boundary,
        Suite::Gradients,
        Suite::BellFixed,
        Suite::Pure,
        Suite::Mems,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::MaxAtHalf => "max-at-half",
            Suite::Monotonicity => "monotonicity",
            Suite::Bound => "bound",
            Suite::Boundary => "boundary",
            Suite::Gradients => "gradients",
            Suite::BellFixed => "bell-fixed",
            Suite::Pure => "pure",
            Suite::Mems => "mems",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownSuite(pub String);

impl fmt::Display for UnknownSuite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown suite `{}`; expected one of", self.0)?;
        for s in Suite::CONCRETE.iter().chain([&Suite::All]) {
            write!(f, " {}", s.name())?;
        }
        Ok(())
    }
}

impl core::error::Error for UnknownSuite {}

impl FromStr for Suite {
    type Err = UnknownSuite;
    fn from_str(s: &str) -> core::result::Result<Self, UnknownSuite> {
        Suite::CONCRETE
            .iter()
            .chain([&Suite::All])
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| UnknownSuite(s.into()))
    }
}

/// Outcome of one claim: the worst residual seen and whether it respects the
/// limit. `strict` claims need `worst < limit`, the others `worst <= limit`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClaimResult {
    pub name: String,
    pub worst: f64,
    pub limit: f64,
    pub strict: bool,
    pub passed: bool,
    pub checked: usize,
    /// `(F, a)` (or the nearest analogue) where the worst residual occurred.
    pub worst_at: Option<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VerificationReport {
    pub suite: String,
    pub passed: bool,
    pub f_steps: usize,
    pub a_steps: usize,
    pub claims: Vec<ClaimResult>,
    /// Filled in by callers that have a clock.
    pub elapsed_seconds: Option<f64>,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &ClaimResult> {
        self.claims.iter().filter(|c| !c.passed)
    }
}

/// Running maximum of a residual.
struct Claim {
    name: String,
    limit: f64,
    strict: bool,
    worst: f64,
    worst_at: Option<[f64; 2]>,
    checked: usize,
}

impl Claim {
    fn at_most(suite: Suite, name: &str, limit: f64) -> Self {
        Self::new(suite, name, limit, false)
    }

    fn below(suite: Suite, name: &str, limit: f64) -> Self {
        Self::new(suite, name, limit, true)
    }

    fn new(suite: Suite, name: &str, limit: f64, strict: bool) -> Self {
        let mut full = String::from(suite.name());
        full.push('.');
        full.push_str(name);
        Claim {
            name: full,
            limit,
            strict,
            worst: f64::NEG_INFINITY,
            worst_at: None,
            checked: 0,
        }
    }

    fn observe(&mut self, residual: f64, at: [f64; 2]) {
        self.checked += 1;
        // a NaN residual sticks as the worst value
        if self.worst.is_nan() {
            return;
        }
        if residual.is_nan() || residual > self.worst {
            self.worst = residual;
            self.worst_at = Some(at);
        }
    }

    fn finish(self) -> ClaimResult {
        let passed = self.checked > 0
            && !self.worst.is_nan()
            && if self.strict {
                self.worst < self.limit
            } else {
                self.worst <= self.limit
            };
        ClaimResult {
            name: self.name,
            worst: self.worst,
            limit: self.limit,
            strict: self.strict,
            passed,
            checked: self.checked,
            worst_at: self.worst_at,
        }
    }
}

fn indicator(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

pub fn verify(suite: Suite, cfg: &SweepConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let mut claims = Vec::new();
    let suites: &[Suite] = if suite == Suite::All {
        &Suite::CONCRETE
    } else {
        core::slice::from_ref(&suite)
    };
    for &s in suites {
        let found = match s {
            Suite::Oracle => oracle(cfg)?,
            Suite::MaxAtHalf => max_at_half(cfg),
            Suite::Monotonicity => monotonicity(cfg),
            Suite::Bound => bound(cfg)?,
            Suite::Boundary => boundary(cfg)?,
            Suite::Gradients => gradients(cfg)?,
            Suite::BellFixed => bell_fixed(cfg)?,
            Suite::Pure => pure(cfg)?,
            Suite::Mems => mems(cfg)?,
            Suite::All => unreachable!(),
        };
        claims.extend(found.into_iter().map(Claim::finish));
    }
    Ok(VerificationReport {
        suite: suite.name().into(),
        passed: claims.iter().all(|c: &ClaimResult| c.passed),
        f_steps: cfg.f_steps,
        a_steps: cfg.a_steps,
        claims,
        elapsed_seconds: None,
    })
}

fn at(f: WernerParams, a: SchmidtParam) -> [f64; 2] {
    [f.fidelity(), a.value()]
}

fn schmidt(a: f64) -> SchmidtParam {
    SchmidtParam::new(a).expect("Schmidt weight inside [1/2, 1]")
}

fn oracle(cfg: &SweepConfig) -> Result<Vec<Claim>> {
    let s = Suite::Oracle;
    let tol = cfg.tolerances.oracle;
    let mut lambdas = Claim::at_most(s, "lambdas", tol);
    let mut conc = Claim::at_most(s, "concurrence", tol);
    for (f, a) in cfg.points() {
        let numeric = measures::wootters_lambdas(&states::werner_derivative(f, a))?;
        let (closed, _) = theory::closed_lambdas(f, a);
        let diff = closed
            .values()
            .iter()
            .zip(numeric.values())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        lambdas.observe(diff, at(f, a));
        conc.observe(
            (theory::closed_concurrence(f, a) - numeric.concurrence()).abs(),
            at(f, a),
        );
    }
    Ok(alloc::vec![lambdas, conc])
}

/// Maximiser of `g` on `[lo, hi]` by golden-section search.
fn golden_section_max(mut lo: f64, mut hi: f64, g: impl Fn(f64) -> f64) -> f64 {
    let ratio = (libm::sqrt(5.0) - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut g1, mut g2) = (g(x1), g(x2));
    for _ in 0..80 {
        if g1 >= g2 {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - ratio * (hi - lo);
            g1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + ratio * (hi - lo);
            g2 = g(x2);
        }
    }
    [lo, x1, x2, hi]
        .into_iter()
        .fold((lo, g(lo)), |best, x| {
            let v = g(x);
            if v > best.1 {
                (x, v)
            } else {
                best
            }
        })
        .0
}

fn max_at_half(cfg: &SweepConfig) -> Vec<Claim> {
    let s = Suite::MaxAtHalf;
    let mut value = Claim::at_most(s, "value", tolerances::STRICTNESS);
    let mut argmax = Claim::at_most(s, "argmax", 1e-6);
    let mut strict = Claim::below(s, "strict", -tolerances::STRICTNESS);
    for f in cfg.fidelities() {
        let target = theory::werner_concurrence(f);
        let weights = cfg.schmidt_weights(f);
        let mut best = (weights[0], f64::NEG_INFINITY);
        for &a in &weights {
            let c = theory::closed_concurrence(f, a);
            if c > best.1 {
                best = (a, c);
            }
            if a.value() >= 0.5 + tolerances::STRICT_OFFSET {
                strict.observe(c - target, at(f, a));
            }
        }
        // refine between 1/2 and the first grid step
        let hi = weights[1].value();
        let refined = golden_section_max(0.5, hi, |x| theory::closed_concurrence(f, schmidt(x)));
        let refined_value = theory::closed_concurrence(f, schmidt(refined));
        let overall = best.1.max(refined_value);
        value.observe((overall - target).abs(), at(f, best.0));
        let grid_offset = best.0.value() - 0.5;
        argmax.observe(grid_offset.max(refined - 0.5), [f.fidelity(), refined]);
    }
    alloc::vec![value, argmax, strict]
}

fn monotonicity(cfg: &SweepConfig) -> Vec<Claim> {
    let s = Suite::Monotonicity;
    let mut conc = Claim::at_most(s, "concurrence", tolerances::MONOTONICITY);
    let mut numerator = Claim::at_most(s, "gap-numerator", tolerances::MONOTONICITY);
    for f in cfg.fidelities() {
        let weights = cfg.schmidt_weights(f);
        for pair in weights.windows(2) {
            let (a0, a1) = (pair[0], pair[1]);
            conc.observe(
                theory::closed_concurrence(f, a1) - theory::closed_concurrence(f, a0),
                at(f, a1),
            );
            numerator.observe(
                theory::gap_numerator_term(f, a1) - theory::gap_numerator_term(f, a0),
                at(f, a1),
            );
        }
    }
    alloc::vec![conc, numerator]
}

fn bound(cfg: &SweepConfig) -> Result<Vec<Claim>> {
    let s = Suite::Bound;
    let mut upper = Claim::at_most(s, "upper", cfg.tolerances.bound);
    let mut zero = Claim::at_most(s, "zero-at-half", tolerances::STRICTNESS);
    let mut strict = Claim::below(s, "strict", -tolerances::STRICTNESS);
    let mut denominator = Claim::below(s, "denominator-positive", 0.0);
    let mut oracle = Claim::at_most(s, "oracle", cfg.tolerances.oracle);
    for (f, a) in cfg.points() {
        let report = theory::extractable_gap(f, a)?;
        upper.observe(report.gap, at(f, a));
        denominator.observe(-report.denominator, at(f, a));
        if a.value() == 0.5 {
            zero.observe(report.gap.abs(), at(f, a));
        }
        if a.value() >= 0.5 + tolerances::STRICT_OFFSET {
            strict.observe(report.gap, at(f, a));
        }
        let extracted = measures::extractable_concurrence(&states::werner_derivative(f, a))?;
        oracle.observe(
            (report.gap - (extracted - theory::werner_concurrence(f))).abs(),
            at(f, a),
        );
    }
    Ok(alloc::vec![upper, zero, strict, denominator, oracle])
}

fn boundary(cfg: &SweepConfig) -> Result<Vec<Claim>> {
    let s = Suite::Boundary;
    let ppt = |f: WernerParams, a: f64| {
        measures::ppt_min_eigenvalue(&states::werner_derivative(f, schmidt(a)))
    };
    let mut at_star = Claim::at_most(s, "ppt-zero-at-a-star", cfg.tolerances.boundary);
    let mut c_at_star = Claim::at_most(s, "concurrence-zero-at-a-star", cfg.tolerances.boundary);
    let mut inside = Claim::below(s, "negative-inside", 0.0);
    let mut outside = Claim::below(s, "positive-outside", 0.0);
    for f in cfg.fidelities() {
        let a_star = theory::entangled_a_range(f).upper;
        at_star.observe(ppt(f, a_star)?.abs(), [f.fidelity(), a_star]);
        c_at_star.observe(
            theory::closed_concurrence(f, schmidt(a_star)).abs(),
            [f.fidelity(), a_star],
        );
        for a in cfg.schmidt_weights(f) {
            inside.observe(ppt(f, a.value())?, at(f, a));
        }
        let delta = tolerances::GRADIENT_EXCLUSION.min((a_star - 0.5) / 2.0);
        inside.observe(ppt(f, a_star - delta)?, [f.fidelity(), a_star - delta]);
        if a_star < 1.0 {
            let delta = tolerances::GRADIENT_EXCLUSION.min((1.0 - a_star) / 2.0);
            for a in [a_star + delta, 0.5 * (a_star + 1.0), 1.0] {
                outside.observe(-ppt(f, a)?, [f.fidelity(), a]);
            }
        }
    }
    Ok(alloc::vec![at_star, c_at_star, inside, outside])
}

fn gradients(cfg: &SweepConfig) -> Result<Vec<Claim>> {
    let s = Suite::Gradients;
    let h = tolerances::FD_STEP;
    let tol = cfg.tolerances.gradient;
    let mut conc_fd = Claim::at_most(s, "concurrence-fd", tol);
    let mut num_fd = Claim::at_most(s, "numerator-fd", tol);
    let mut conc_sign = Claim::at_most(s, "concurrence-nonpositive", 0.0);
    let mut num_sign = Claim::at_most(s, "numerator-nonpositive", 0.0);
    for f in cfg.fidelities() {
        let a_star = theory::entangled_a_range(f).upper;
        for a in cfg.schmidt_weights(f) {
            let av = a.value();
            let dc = theory::concurrence_gradient(f, a)?;
            let dn = theory::gap_numerator_gradient(f, a)?;
            conc_sign.observe(dc, at(f, a));
            num_sign.observe(dn, at(f, a));

            let excluded = av - h < 0.5
                || av == 0.5
                || (a_star - av).abs() < tolerances::GRADIENT_EXCLUSION
                || 1.0 - av < tolerances::GRADIENT_EXCLUSION;
            if excluded {
                continue;
            }
            let (lo, hi) = (schmidt(av - h), schmidt(av + h));
            let fd_c =
                (theory::closed_concurrence(f, hi) - theory::closed_concurrence(f, lo)) / (2.0 * h);
            let fd_n =
                (theory::gap_numerator_term(f, hi) - theory::gap_numerator_term(f, lo)) / (2.0 * h);
            conc_fd.observe((dc - fd_c).abs(), at(f, a));
            num_fd.observe((dn - fd_n).abs(), at(f, a));
        }
    }
    Ok(alloc::vec![conc_fd, num_fd, conc_sign, num_sign])
}

/// Bell-weight vectors on a simplex lattice with denominator `n`.
fn simplex_lattice(n: usize) -> impl Iterator<Item = [f64; 4]> {
    (0..=n).flat_map(move |i| {
        (0..=n - i).flat_map(move |j| {
            (0..=n - i - j).map(move |k| {
                let l = n - i - j - k;
                [i, j, k, l].map(|x| x as f64 / n as f64)
            })
        })
    })
}

fn bell_fixed(cfg: &SweepConfig) -> Result<Vec<Claim>> {
    let s = Suite::BellFixed;
    let tol = tolerances::IDENTITY;
    let mut werner = Claim::at_most(s, "werner", tol);
    let mut lattice = Claim::at_most(s, "lattice", tol);
    for f in cfg.fidelities() {
        let report = measures::concurrence_report(&states::werner(f))?;
        let target = theory::werner_concurrence(f);
        let residual = (report.extractable_concurrence - target)
            .abs()
            .max((report.extractable_concurrence - report.concurrence).abs());
        werner.observe(residual, [f.fidelity(), 0.5]);
    }
    for p in simplex_lattice(12) {
        let params = BellDiagonalParams::from_probabilities(p)?;
        let rho = states::bell_diagonal(params);
        let report = measures::concurrence_report(&rho)?;
        lattice.observe(
            (report.extractable_concurrence - report.concurrence).abs(),
            [p[0], p[1]],
        );
    }
    Ok(alloc::vec![werner, lattice])
}

fn pure(cfg: &SweepConfig) -> Result<Vec<Claim>> {
    let mut claim = Claim::at_most(Suite::Pure, "singlet-extractable", tolerances::IDENTITY);
    let n = cfg.a_steps;
    for k in 0..n {
        let a = 0.5 + 0.49 * k as f64 / (n - 1) as f64;
        let e = measures::extractable_concurrence(&states::schmidt_pure(schmidt(a)))?;
        claim.observe((e - 1.0).abs(), [1.0, a]);
    }
    Ok(alloc::vec![claim])
}

fn mems(cfg: &SweepConfig) -> Result<Vec<Claim>> {
    let s = Suite::Mems;
    let mut equal = Claim::at_most(s, "werner-entrywise", tolerances::ENTRYWISE);
    let mut improvable = Claim::at_most(s, "improvable-when-p2-ne-p4", 0.0);
    for f in cfg.fidelities() {
        let p1 = f.fidelity();
        let spectrum = theory::werner_spectrum(p1)?;
        let residual = match theory::classify_mems(spectrum) {
            MemsClass::Werner { fidelity } => {
                let w = states::werner(WernerParams::new(fidelity)?);
                states::mems(spectrum).matrix().max_abs_diff(w.matrix())
            }
            MemsClass::LqccImprovable => 1.0,
        };
        equal.observe(residual, [p1, 0.0]);

        let rest = 1.0 - p1;
        for k in 1..=8 {
            let skew = 0.5 * k as f64 / 8.0;
            let p = [
                p1,
                rest * (1.0 + 2.0 * skew) / 3.0,
                rest / 3.0,
                rest * (1.0 - 2.0 * skew) / 3.0,
            ];
            if p[1] - p[3] <= tolerances::MEMS_DEGENERACY {
                continue;
            }
            let spectrum = MemsSpectrum::new(p)?;
            let ok = theory::classify_mems(spectrum) == MemsClass::LqccImprovable
                && measures::is_lqcc_improvable(&states::mems(spectrum))?;
            improvable.observe(indicator(ok), [p1, skew]);
        }
    }
    Ok(alloc::vec![equal, improvable])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SweepConfig {
        SweepConfig {
            f_min: 0.505,
            f_max: 0.99,
            f_steps: 12,
            a_steps: 20,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::CONCRETE.iter().chain([&Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), *s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn golden_section_finds_interior_and_endpoint_maxima() {
        let x = golden_section_max(0.0, 1.0, |x| -(x - 0.3) * (x - 0.3));
        assert!((x - 0.3).abs() < 1e-7);
        let x = golden_section_max(0.0, 1.0, |x| -x);
        assert!(x < 1e-12);
    }

    #[test]
    fn small_grid_passes_every_suite() {
        let report = verify(Suite::All, &small()).unwrap();
        for c in &report.claims {
            if c.name.ends_with("-fd") {
                continue;
            }
            assert!(c.passed, "{c:?}");
            assert!(c.checked > 0, "{c:?}");
        }
        assert!(!report.passed);
        assert_eq!(report.suite, "all");
    }

    // Step-size truncation grows like h^2 f''' near a = 1 once F is large, so the
    // finite-difference claims hold at 1e-6 only on the low-fidelity band.
    #[test]
    fn finite_differences_agree_at_low_fidelity() {
        let cfg = SweepConfig {
            f_max: 0.6,
            ..small()
        };
        let report = verify(Suite::Gradients, &cfg).unwrap();
        assert!(report.passed, "{:?}", report.claims);
    }

    #[test]
    fn finite_differences_miss_near_pure_limit() {
        let report = verify(Suite::Gradients, &small()).unwrap();
        let fd = report
            .claims
            .iter()
            .find(|c| c.name == "gradients.concurrence-fd")
            .unwrap();
        assert!(!fd.passed);
        assert!(fd.worst_at.unwrap()[1] > 0.9);
    }

    #[test]
    fn single_suite_only_runs_its_claims() {
        let report = verify(Suite::Pure, &small()).unwrap();
        assert_eq!(report.claims.len(), 1);
        assert_eq!(report.claims[0].name, "pure.singlet-extractable");
    }

    #[test]
    fn tight_tolerance_fails() {
        let mut cfg = small();
        cfg.tolerances.oracle = 0.0;
        cfg.tolerances.bound = -1.0;
        let report = verify(Suite::Bound, &cfg).unwrap();
        assert!(!report.passed);
        assert!(report.failures().any(|c| c.name == "bound.upper"));
    }

    #[test]
    fn nan_residual_fails() {
        let mut c = Claim::at_most(Suite::Oracle, "x", 1.0);
        c.observe(0.5, [0.0, 0.0]);
        c.observe(f64::NAN, [1.0, 1.0]);
        c.observe(0.1, [2.0, 2.0]);
        let r = c.finish();
        assert!(!r.passed);
        assert_eq!(r.worst_at, Some([1.0, 1.0]));
    }
}
