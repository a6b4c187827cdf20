use rand::Rng;
use serde::Serialize;

use super::trial_rng;
use crate::error::{Error, Result};
use crate::inequality::BellInequality;
use crate::par::map_indices;
use crate::sampling::{sample_measurement_set, MeasurementSet, SeedSpec};
use crate::scenario::Scenario;
use crate::states::{bell_operator, expectation, make_ghz_family, make_ghz_minus};

/// Values of a correlation operator on `|GHZ+>`, `|GHZ->` and the family
/// state at `theta`, against `(b+ + b-)/2 + sin(2 theta) (b+ - b-)/2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub n_parties: usize,
    pub theta: f64,
    pub b_plus: f64,
    pub b_minus: f64,
    pub b_theta_direct: f64,
    pub b_theta_reconstructed: f64,
    pub residual: f64,
}

fn require_correlation(ineq: &BellInequality) -> Result<()> {
    if !ineq.is_correlation_inequality() {
        return Err(Error::InvalidArgument("inequality has marginal terms".into()));
    }
    Ok(())
}

/// The identity evaluated for any number of parties. It holds for even `n`
/// only; for odd `n` the residual is generally nonzero.
pub fn decomposition_report(ineq: &BellInequality, ms: &MeasurementSet, theta: f64) -> Result<DecompositionReport> {
    require_correlation(ineq)?;
    if !theta.is_finite() {
        return Err(Error::InvalidArgument("theta must be finite".into()));
    }
    let n = ineq.scenario().n_parties();
    let op = bell_operator(ineq, ms)?;
    let b_plus = expectation(&make_ghz_family(n, std::f64::consts::FRAC_PI_4)?, &op)?;
    let b_minus = expectation(&make_ghz_minus(n)?, &op)?;
    let b_theta_direct = expectation(&make_ghz_family(n, theta)?, &op)?;
    let b_theta_reconstructed = 0.5 * (b_plus + b_minus) + 0.5 * (2.0 * theta).sin() * (b_plus - b_minus);
    Ok(DecompositionReport {
        n_parties: n,
        theta,
        b_plus,
        b_minus,
        b_theta_direct,
        b_theta_reconstructed,
        residual: (b_theta_direct - b_theta_reconstructed).abs(),
    })
}

/// [`decomposition_report`] restricted to the cases where the identity is
/// claimed: correlation inequalities with an even number of parties.
pub fn check_decomposition(ineq: &BellInequality, ms: &MeasurementSet, theta: f64) -> Result<DecompositionReport> {
    let n = ineq.scenario().n_parties();
    if n % 2 == 1 {
        return Err(Error::InvalidArgument(format!("decomposition needs an even number of parties, got {n}")));
    }
    decomposition_report(ineq, ms, theta)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionSuite {
    pub scenario: String,
    pub trials: u64,
    pub tolerance: f64,
    /// Trials with residual at or above `tolerance`.
    pub above_tolerance: u64,
    pub max_residual: f64,
    /// Trial attaining `max_residual`.
    pub worst: Option<DecompositionReport>,
}

/// Random Gaussian correlation operators, Haar measurements and angles in
/// `[0, pi/4]`. Odd party counts are allowed here so that the failure of the
/// identity can be exhibited.
pub fn decomposition_suite(
    scenario: &Scenario,
    trials: u64,
    seed: u64,
    tolerance: f64,
    workers: Option<usize>,
) -> Result<DecompositionSuite> {
    let reports = map_indices(trials, workers, |t| {
        let mut rng = trial_rng(seed, t);
        let coeffs = (0..scenario.n_setting_tuples())
            .map(|_| rng.sample(rand_distr::StandardNormal))
            .collect();
        let ineq = BellInequality::correlation(scenario.clone(), coeffs)?;
        let theta = rng.random_range(0.0..=std::f64::consts::FRAC_PI_4);
        let ms = sample_measurement_set(scenario, SeedSpec::new(seed, t));
        decomposition_report(&ineq, &ms, theta)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let above_tolerance = reports.iter().filter(|r| r.residual >= tolerance).count() as u64;
    let worst = reports.iter().max_by(|a, b| a.residual.total_cmp(&b.residual)).cloned();
    Ok(DecompositionSuite {
        scenario: scenario.label(),
        trials,
        tolerance,
        above_tolerance,
        max_residual: worst.as_ref().map_or(0.0, |w| w.residual),
        worst,
    })
}
