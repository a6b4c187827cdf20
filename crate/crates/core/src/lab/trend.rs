use serde::Serialize;

use crate::error::{Error, Result};
use crate::par::map_indices;
use crate::sampling::{sample_measurement_set, SeedSpec};
use crate::scenario::Scenario;
use crate::states::StateVector;
use crate::volume::{sample_indicator, EstimatorOptions, SampleOutcome, Variant, VolumeEstimate};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrendReport {
    pub samples: u64,
    pub seed: u64,
    pub variant: Variant,
    /// One per scenario, smallest first.
    pub estimates: Vec<VolumeEstimate>,
    /// Samples whose indicator drops from nonlocal to local along the chain.
    pub monotonicity_violations: u64,
    /// `p_hat` strictly increases along the chain.
    pub strictly_increasing: bool,
}

/// Nonlocal volume along a chain of nested scenarios with one measurement
/// draw per sample shared by every scenario (the smaller ones keep a prefix of
/// the settings). Adding settings can only keep or create nonlocality, so the
/// per-sample indicator must be nondecreasing.
pub fn check_property3_trend(
    state: &StateVector,
    scenarios: &[Scenario],
    samples: u64,
    seed: u64,
    variant: Variant,
    opts: &EstimatorOptions,
) -> Result<TrendReport> {
    let Some(largest) = scenarios.last() else {
        return Err(Error::InvalidArgument("no scenarios".into()));
    };
    if let Some(w) = scenarios.windows(2).find(|w| !w[0].is_nested_in(&w[1])) {
        return Err(Error::Scenario(format!("{} is not nested in {}", w[0], w[1])));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    let rows: Vec<Vec<SampleOutcome>> = map_indices(samples, opts.workers, |i| {
        let ms = sample_measurement_set(largest, SeedSpec::new(seed, i));
        scenarios
            .iter()
            .map(|s| sample_indicator(state, &ms.restrict(s)?, variant, opts.prescreen))
            .collect::<Result<Vec<_>>>()
    })
    .into_iter()
    .collect::<Result<_>>()?;

    let monotonicity_violations = rows
        .iter()
        .filter(|r| {
            let decided: Vec<bool> = r.iter().filter(|o| **o != SampleOutcome::Failed).map(|o| o.is_hit()).collect();
            decided.windows(2).any(|w| w[0] && !w[1])
        })
        .count() as u64;
    let estimates = scenarios
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let column: Vec<SampleOutcome> = rows.iter().map(|r| r[k]).collect();
            VolumeEstimate::from_outcomes(&column, s, variant, None, seed)
        })
        .collect::<Result<Vec<_>>>()?;
    let strictly_increasing = estimates.windows(2).all(|w| w[0].p_hat < w[1].p_hat);
    Ok(TrendReport { samples, seed, variant, estimates, monotonicity_violations, strictly_increasing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{phi_plus, product_zero};

    fn chain() -> Vec<Scenario> {
        vec![Scenario::bipartite(2, 2).unwrap(), Scenario::bipartite(3, 4).unwrap()]
    }

    #[test]
    fn maximally_entangled_trend() {
        let r = check_property3_trend(&phi_plus(), &chain(), 400, 8, Variant::Full, &EstimatorOptions::default()).unwrap();
        assert_eq!(r.monotonicity_violations, 0);
        assert!(r.strictly_increasing, "{:?}", r.estimates);
    }

    #[test]
    fn product_is_zero() {
        let r = check_property3_trend(&product_zero(2).unwrap(), &chain(), 100, 8, Variant::Full, &EstimatorOptions::default())
            .unwrap();
        assert!(r.estimates.iter().all(|e| e.hits == 0));
    }

    #[test]
    fn rejects_unnested() {
        let bad = vec![Scenario::bipartite(3, 2).unwrap(), Scenario::bipartite(2, 4).unwrap()];
        assert!(check_property3_trend(&phi_plus(), &bad, 10, 0, Variant::Full, &EstimatorOptions::default()).is_err());
    }
}
