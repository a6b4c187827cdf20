use serde::Serialize;

use super::chsh::{chsh_grid, strictness_witness, ChshGridReport, StrictnessWitness};
use super::decomposition::{decomposition_suite, DecompositionSuite};
use super::invariance::{lu_invariance_suite, InvarianceSuite};
use super::theorem::{monotonicity_suite, InequalityDraw, MonotonicitySuite};
use crate::error::Result;
use crate::scenario::Scenario;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LabConfig {
    /// Trials per monotonicity scenario.
    pub theorem_trials: u64,
    /// Trials per decomposition party count.
    pub decomposition_trials: u64,
    pub invariance_trials: u64,
    pub seed: u64,
    pub workers: Option<usize>,
}

impl Default for LabConfig {
    fn default() -> Self {
        Self { theorem_trials: 10_000, decomposition_trials: 10_000, invariance_trials: 1_000, seed: 0, workers: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LabReport {
    pub config: LabConfig,
    pub summary: Vec<SuiteSummary>,
    pub monotonicity: Vec<MonotonicitySuite>,
    pub decomposition: Vec<DecompositionSuite>,
    /// Three parties, where the identity is expected to fail.
    pub odd_decomposition: DecompositionSuite,
    pub chsh_grid: ChshGridReport,
    pub strictness: Vec<StrictnessWitness>,
    pub invariance: InvarianceSuite,
}

impl LabReport {
    pub fn passed(&self) -> bool {
        self.summary.iter().all(|s| s.passed)
    }
}

const DECOMPOSITION_TOL: f64 = 1e-10;
const ODD_RESIDUAL: f64 = 1e-3;
const CHSH_TOL: f64 = 1e-12;
const INVARIANCE_TOL: f64 = 1e-10;

/// Runs every property suite. The marginal-term counterexample is separate,
/// see [`super::verify_counterexample`].
pub fn run_lab(config: &LabConfig) -> Result<LabReport> {
    let (seed, workers) = (config.seed, config.workers);
    let mut summary = Vec::new();

    let mut monotonicity = Vec::new();
    let runs = [
        (vec![2, 2], InequalityDraw::Gaussian),
        (vec![3, 3], InequalityDraw::Gaussian),
        (vec![2, 2, 2, 2], InequalityDraw::Gaussian),
        (vec![2, 2, 2, 2], InequalityDraw::Aligned),
    ];
    for (settings, draw) in runs {
        let s = monotonicity_suite(&Scenario::new(settings)?, draw, config.theorem_trials, seed, workers)?;
        summary.push(SuiteSummary {
            name: format!("monotonicity {} {:?}", s.scenario, draw).to_lowercase(),
            passed: s.passed(),
            detail: format!(
                "{} holds, {} vacuous, {} violations, side conditions {}/{}",
                s.holds, s.vacuous, s.violations, s.plus_minus_violations, s.average_violations
            ),
        });
        monotonicity.push(s);
    }

    let mut decomposition = Vec::new();
    for settings in [vec![2, 2], vec![3, 3], vec![2, 2, 2, 2]] {
        let s = decomposition_suite(&Scenario::new(settings)?, config.decomposition_trials, seed, DECOMPOSITION_TOL, workers)?;
        summary.push(SuiteSummary {
            name: format!("decomposition {}", s.scenario),
            passed: s.above_tolerance == 0,
            detail: format!("max residual {:.3e}", s.max_residual),
        });
        decomposition.push(s);
    }
    let odd = decomposition_suite(&Scenario::new(vec![2, 2, 2])?, config.decomposition_trials, seed, ODD_RESIDUAL, workers)?;
    summary.push(SuiteSummary {
        name: format!("odd-party residual {}", odd.scenario),
        passed: odd.max_residual > ODD_RESIDUAL,
        detail: format!("max residual {:.3e}", odd.max_residual),
    });

    let grid = chsh_grid(50, 50)?;
    summary.push(SuiteSummary {
        name: "chsh family grid".into(),
        passed: grid.max_deviation <= CHSH_TOL && grid.misclassified == 0,
        detail: format!("max deviation {:.3e}, {} misclassified", grid.max_deviation, grid.misclassified),
    });
    let pi4 = std::f64::consts::FRAC_PI_4;
    let strictness = [(0.0, 0.05), (0.2, 0.4), (0.6, pi4)]
        .iter()
        .map(|&(a, b)| strictness_witness(a, b))
        .collect::<Result<Vec<_>>>()?;
    summary.push(SuiteSummary {
        name: "strict inclusion witnesses".into(),
        passed: strictness.iter().all(|w| w.separates()),
        detail: format!("{} witnesses", strictness.len()),
    });

    let invariance = lu_invariance_suite(config.invariance_trials, seed, INVARIANCE_TOL, workers)?;
    summary.push(SuiteSummary {
        name: "local unitary invariance".into(),
        passed: invariance.passed(),
        detail: format!("max deviation {:.3e}", invariance.max_deviation),
    });

    Ok(LabReport {
        config: config.clone(),
        summary,
        monotonicity,
        decomposition,
        odd_decomposition: odd,
        chsh_grid: grid,
        strictness,
        invariance,
    })
}
