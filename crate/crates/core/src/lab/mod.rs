//! Executable checks of the analytic statements about the `cos t |0..0> +
//! sin t |1..1>` family: the decomposition identity, monotonicity of
//! correlation-inequality values, the CHSH family, the marginal-term
//! counterexample, local-unitary invariance and the settings trend.

mod chsh;
mod counterexample;
mod decomposition;
mod invariance;
mod report;
mod theorem;
mod trend;

pub use chsh::{
    chsh_family_measurements, chsh_family_value, chsh_grid, chsh_violation_threshold, strictness_witness,
    ChshFamilyPoint, ChshGridReport, StrictnessWitness,
};
pub use counterexample::{
    counterexample_bundle, verify_counterexample, Clause, CounterexampleBundle, CounterexampleReport,
    COUNTEREXAMPLE_TABLE,
};
pub use decomposition::{
    check_decomposition, decomposition_report, decomposition_suite, DecompositionReport, DecompositionSuite,
};
pub use invariance::{lu_invariance_suite, random_su2, InvarianceSuite};
pub use report::{run_lab, LabConfig, LabReport, SuiteSummary};
pub use theorem::{check_theorem1, monotonicity_suite, InequalityDraw, MonotonicitySuite, TheoremCheck, Verdict};
pub use trend::{check_property3_trend, TrendReport};

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::inequality::BellInequality;
use crate::polytope::local_bound;
use crate::scenario::Scenario;
use crate::sampling::SeedSpec;

/// Last usable slot, far above every measurement slot.
const LAB_SLOT: u64 = crate::sampling::SLOT_LIMIT - 1;

/// Correlation inequality with i.i.d. standard-normal coefficients and its
/// enumerated local bound.
pub fn random_correlation_inequality<R: Rng>(scenario: &Scenario, rng: &mut R) -> Result<BellInequality> {
    let coeffs = (0..scenario.n_setting_tuples()).map(|_| rng.sample(StandardNormal)).collect();
    let ineq = BellInequality::correlation(scenario.clone(), coeffs)?;
    let bound = local_bound(&ineq)?;
    Ok(ineq.with_local_bound(bound))
}

fn trial_rng(seed: u64, trial: u64) -> rand_chacha::ChaCha8Rng {
    SeedSpec::new(seed, trial).rng(LAB_SLOT)
}
