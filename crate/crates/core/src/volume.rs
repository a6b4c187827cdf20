//! Monte-Carlo estimation of the nonlocal volume.
//!
//! Sample `i` measures with `sample_measurement_set(scenario, SeedSpec(seed, i))`,
//! so the full and correlator-only indicators, every angle of a curve, and
//! nested scenarios all see the same measurement directions for a given `i`.

use serde::{Serialize, Serializer};

use crate::behavior::{compute_behavior, to_correlators, Behavior, CorrelatorTable};
use crate::inequality::{cg_digits, cg_index};
use crate::error::{Error, Result};
use crate::par::map_indices;
use crate::polytope::{self, CORRELATION_SETTINGS_CAP, DEFAULT_ENUMERATION_CAP};
use crate::sampling::{sample_measurement_set, MeasurementSet, SeedSpec};
use crate::scenario::Scenario;
use crate::states::{make_ghz_family, StateVector};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;
/// A run aborts when more than this fraction of LP solves fail.
pub const MAX_FAILURE_RATE: f64 = 1e-3;
/// A 2x2 sub-block with CHSH above `2 (1 + margin)` is declared nonlocal
/// without an LP. The visibility of such a behavior is at most
/// `1 / (1 + margin)`, which is below the LP threshold.
pub const PRESCREEN_MARGIN: f64 = 2e-7;
/// Every coordinate within this of the product of its one-body marginals
/// counts as a product behavior, which is local.
pub const PRODUCT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Membership of the whole behavior in the local polytope.
    Full,
    /// Membership of the full-correlator table only.
    Correlation,
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::Full => "full",
            Variant::Correlation => "correlation",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EstimatorOptions {
    /// Thread count; `None` uses all cores.
    pub workers: Option<usize>,
    /// Skip the LP when a CHSH sub-block already certifies nonlocality or the
    /// behavior is a product.
    pub prescreen: bool,
}

impl Default for EstimatorOptions {
    fn default() -> Self {
        Self { workers: None, prescreen: true }
    }
}

impl EstimatorOptions {
    pub fn with_workers(workers: usize) -> Self {
        Self { workers: Some(workers), ..Self::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleOutcome {
    Local,
    Nonlocal,
    /// LP stalled or hit a singular basis.
    Failed,
}

impl SampleOutcome {
    pub fn is_hit(self) -> bool {
        self == SampleOutcome::Nonlocal
    }
}

fn serialize_label<S: Serializer>(s: &Scenario, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&s.label())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeEstimate {
    #[serde(serialize_with = "serialize_label")]
    pub scenario: Scenario,
    pub variant: Variant,
    pub theta: Option<f64>,
    pub samples: u64,
    pub hits: u64,
    pub failures: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

impl VolumeEstimate {
    pub fn from_outcomes(
        outcomes: &[SampleOutcome],
        scenario: &Scenario,
        variant: Variant,
        theta: Option<f64>,
        seed: u64,
    ) -> Result<Self> {
        let samples = outcomes.len() as u64;
        let hits = outcomes.iter().filter(|o| o.is_hit()).count() as u64;
        let failures = outcomes.iter().filter(|&&o| o == SampleOutcome::Failed).count() as u64;
        if samples == 0 {
            return Err(Error::InvalidArgument("no samples".into()));
        }
        if failures as f64 > MAX_FAILURE_RATE * samples as f64 {
            return Err(Error::TooManyFailures { failed: failures, samples });
        }
        let used = samples - failures;
        let p_hat = hits as f64 / used as f64;
        let (ci_low, ci_high) = wilson_interval(hits, used);
        Ok(Self { scenario: scenario.clone(), variant, theta, samples, hits, failures, p_hat, ci_low, ci_high, seed })
    }
}

/// Wilson score interval at 95%, clamped so that `lo <= hits/n <= hi`.
pub fn wilson_interval(hits: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = hits as f64 / nf;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = Z_95 / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    let lo = if hits == 0 { 0.0 } else { (center - half).clamp(0.0, p) };
    let hi = if hits == n { 1.0 } else { (center + half).clamp(p, 1.0) };
    (lo, hi)
}

/// Largest `|CHSH|` over all 2x2 sub-blocks of a bipartite correlator table
/// and all 8 relabelings.
pub fn max_chsh(c: &CorrelatorTable) -> f64 {
    let s = c.scenario();
    if !s.is_bipartite() {
        return 0.0;
    }
    let (ma, mb) = (s.settings()[0], s.settings()[1]);
    let e = |x: usize, y: usize| c.joint()[x * mb + y];
    let mut best = 0.0f64;
    for x0 in 0..ma {
        for x1 in x0 + 1..ma {
            for y0 in 0..mb {
                for y1 in y0 + 1..mb {
                    let (a, b, cc, d) = (e(x0, y0), e(x0, y1), e(x1, y0), e(x1, y1));
                    let total = a + b + cc + d;
                    for t in [d, cc, b, a] {
                        best = best.max((total - 2.0 * t).abs());
                    }
                }
            }
        }
    }
    best
}

/// Whether every correlator equals the product of the corresponding
/// one-body marginals (a product of local behaviors, hence local).
pub fn is_product(b: &Behavior) -> bool {
    let s = b.scenario();
    let cg = b.cg_vector();
    (1..cg.len()).all(|i| {
        let digits = cg_digits(s, i);
        if digits.iter().filter(|&&d| d > 0).count() < 2 {
            return true;
        }
        let product: f64 = digits
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 0)
            .map(|(p, &d)| {
                let mut single = vec![0; digits.len()];
                single[p] = d;
                cg[cg_index(s, &single)]
            })
            .product();
        (cg[i] - product).abs() <= PRODUCT_TOL
    })
}

fn check_inputs(state: &StateVector, scenario: &Scenario, samples: u64, variant: Variant) -> Result<()> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    if state.n_qubits() != scenario.n_parties() {
        return Err(Error::Dimension(format!(
            "{}-qubit state in scenario {}",
            state.n_qubits(),
            scenario.label()
        )));
    }
    match variant {
        Variant::Full if scenario.n_strategies() > DEFAULT_ENUMERATION_CAP => Err(Error::EnumerationCap {
            needed: scenario.n_strategies(),
            cap: DEFAULT_ENUMERATION_CAP,
        }),
        Variant::Correlation if scenario.total_settings() > CORRELATION_SETTINGS_CAP => Err(Error::EnumerationCap {
            needed: scenario.n_strategies(),
            cap: 1 << CORRELATION_SETTINGS_CAP,
        }),
        _ => Ok(()),
    }
}

/// Indicator for one state and measurement set.
pub fn sample_indicator(state: &StateVector, ms: &MeasurementSet, variant: Variant, prescreen: bool) -> Result<SampleOutcome> {
    let b = compute_behavior(state, ms)?;
    let c = to_correlators(&b);
    if prescreen {
        if max_chsh(&c) > 2.0 * (1.0 + PRESCREEN_MARGIN) {
            return Ok(SampleOutcome::Nonlocal);
        }
        if is_product(&b) {
            return Ok(SampleOutcome::Local);
        }
    }
    let verdict = match variant {
        Variant::Full => polytope::is_nonlocal(&b),
        Variant::Correlation => polytope::is_correlation_nonlocal(&c),
    };
    match verdict {
        Ok(false) => Ok(SampleOutcome::Local),
        Ok(true) => Ok(SampleOutcome::Nonlocal),
        Err(Error::LpStall { .. } | Error::LpSingular) => Ok(SampleOutcome::Failed),
        Err(e) => Err(e),
    }
}

/// Per-sample outcomes for `samples` draws, in sample order.
pub fn sample_outcomes(
    state: &StateVector,
    scenario: &Scenario,
    samples: u64,
    seed: u64,
    variant: Variant,
    opts: &EstimatorOptions,
) -> Result<Vec<SampleOutcome>> {
    check_inputs(state, scenario, samples, variant)?;
    map_indices(samples, opts.workers, |i| {
        let ms = sample_measurement_set(scenario, SeedSpec::new(seed, i));
        sample_indicator(state, &ms, variant, opts.prescreen)
    })
    .into_iter()
    .collect()
}

pub fn estimate_volume(
    state: &StateVector,
    scenario: &Scenario,
    samples: u64,
    seed: u64,
    variant: Variant,
    opts: &EstimatorOptions,
) -> Result<VolumeEstimate> {
    let outcomes = sample_outcomes(state, scenario, samples, seed, variant, opts)?;
    VolumeEstimate::from_outcomes(&outcomes, scenario, variant, None, seed)
}

pub fn estimate_nonlocal_volume(state: &StateVector, scenario: &Scenario, samples: u64, seed: u64) -> Result<VolumeEstimate> {
    estimate_volume(state, scenario, samples, seed, Variant::Full, &EstimatorOptions::default())
}

pub fn estimate_correlation_volume(state: &StateVector, scenario: &Scenario, samples: u64, seed: u64) -> Result<VolumeEstimate> {
    estimate_volume(state, scenario, samples, seed, Variant::Correlation, &EstimatorOptions::default())
}

fn family_states(thetas: &[f64], n: usize) -> Result<Vec<StateVector>> {
    thetas
        .iter()
        .map(|&t| {
            if !t.is_finite() || !(0.0..=std::f64::consts::FRAC_PI_2).contains(&t) {
                return Err(Error::InvalidArgument(format!("theta {t} outside [0, pi/2]")));
            }
            make_ghz_family(n, t)
        })
        .collect()
}

/// Outcomes `[theta][sample]` for `cos t |0..0> + sin t |1..1>` with every
/// angle measured by the same draw per sample.
pub fn curve_outcomes(
    thetas: &[f64],
    scenario: &Scenario,
    samples: u64,
    seed: u64,
    variant: Variant,
    opts: &EstimatorOptions,
) -> Result<Vec<Vec<SampleOutcome>>> {
    let states = family_states(thetas, scenario.n_parties())?;
    if let Some(s) = states.first() {
        check_inputs(s, scenario, samples, variant)?;
    }
    let rows: Vec<Vec<SampleOutcome>> = map_indices(samples, opts.workers, |i| {
        let ms = sample_measurement_set(scenario, SeedSpec::new(seed, i));
        states
            .iter()
            .map(|st| sample_indicator(st, &ms, variant, opts.prescreen))
            .collect::<Result<Vec<_>>>()
    })
    .into_iter()
    .collect::<Result<_>>()?;
    Ok((0..states.len()).map(|t| rows.iter().map(|r| r[t]).collect()).collect())
}

/// Paired-sample estimates along a grid of angles in `[0, pi/2]`.
pub fn estimate_curve(
    thetas: &[f64],
    scenario: &Scenario,
    samples: u64,
    seed: u64,
    variant: Variant,
    opts: &EstimatorOptions,
) -> Result<Vec<VolumeEstimate>> {
    curve_outcomes(thetas, scenario, samples, seed, variant, opts)?
        .iter()
        .zip(thetas)
        .map(|(o, &t)| VolumeEstimate::from_outcomes(o, scenario, variant, Some(t), seed))
        .collect()
}
