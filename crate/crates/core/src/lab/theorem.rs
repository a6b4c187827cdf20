use rand::Rng;
use serde::Serialize;

use super::{random_correlation_inequality, trial_rng};
use crate::behavior::{compute_behavior, to_correlators};
use crate::error::{Error, Result};
use crate::inequality::BellInequality;
use crate::par::map_indices;
use crate::polytope::local_bound;
use crate::sampling::{sample_measurement_set, MeasurementSet, SeedSpec};
use crate::scenario::Scenario;
use crate::states::{bell_operator, expectation, make_ghz_family, make_ghz_minus};

/// How the suite draws its correlation inequalities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InequalityDraw {
    /// I.i.d. standard-normal coefficients.
    Gaussian,
    /// Coefficients equal to the signs of the GHZ correlators of the drawn
    /// measurements, so that the premise is met in a fair share of trials.
    /// With four parties, Gaussian draws essentially never meet it.
    Aligned,
}

/// Slack for comparisons against the enumerated local bound.
const BOUND_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// `b(theta1) <= g`: nothing to check.
    Vacuous,
    Holds,
    Violated,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremCheck {
    pub n_parties: usize,
    pub theta1: f64,
    pub theta2: f64,
    pub local_bound: f64,
    pub b_theta1: f64,
    pub b_theta2: f64,
    pub b_plus: f64,
    pub b_minus: f64,
    pub verdict: Verdict,
    /// `b+ > b-` whenever the premise holds.
    pub plus_exceeds_minus: bool,
    /// `(b+ + b-)/2 <= g`.
    pub average_below_bound: bool,
}

/// If the state at `theta1` violates the correlation inequality, the state at
/// `theta2 > theta1` violates it by more. Also valid for any even number of
/// parties with the GHZ family.
pub fn check_theorem1(ineq: &BellInequality, ms: &MeasurementSet, theta1: f64, theta2: f64) -> Result<TheoremCheck> {
    if !ineq.is_correlation_inequality() {
        return Err(Error::InvalidArgument("inequality has marginal terms".into()));
    }
    let n = ineq.scenario().n_parties();
    if n % 2 == 1 {
        return Err(Error::InvalidArgument(format!("monotonicity needs an even number of parties, got {n}")));
    }
    let range = 0.0..=std::f64::consts::FRAC_PI_4;
    if !range.contains(&theta1) || !range.contains(&theta2) {
        return Err(Error::InvalidArgument("angles must lie in [0, pi/4]".into()));
    }
    if theta1 >= theta2 {
        return Err(Error::InvalidArgument(format!("need theta1 < theta2, got {theta1} and {theta2}")));
    }
    let g = match ineq.local_bound() {
        Some(g) => g,
        None => local_bound(ineq)?,
    };
    let op = bell_operator(ineq, ms)?;
    let b_theta1 = expectation(&make_ghz_family(n, theta1)?, &op)?;
    let b_theta2 = expectation(&make_ghz_family(n, theta2)?, &op)?;
    let b_plus = expectation(&make_ghz_family(n, std::f64::consts::FRAC_PI_4)?, &op)?;
    let b_minus = expectation(&make_ghz_minus(n)?, &op)?;

    let premise = b_theta1 > g + BOUND_TOL;
    let verdict = match (premise, b_theta2 > b_theta1) {
        (false, _) => Verdict::Vacuous,
        (true, true) => Verdict::Holds,
        (true, false) => Verdict::Violated,
    };
    Ok(TheoremCheck {
        n_parties: n,
        theta1,
        theta2,
        local_bound: g,
        b_theta1,
        b_theta2,
        b_plus,
        b_minus,
        verdict,
        plus_exceeds_minus: !premise || b_plus > b_minus,
        average_below_bound: 0.5 * (b_plus + b_minus) <= g + BOUND_TOL,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonotonicitySuite {
    pub scenario: String,
    pub draw: InequalityDraw,
    pub trials: u64,
    pub vacuous: u64,
    pub holds: u64,
    pub violations: u64,
    pub plus_minus_violations: u64,
    pub average_violations: u64,
    /// First trial failing any check.
    pub first_failure: Option<TheoremCheck>,
}

impl MonotonicitySuite {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.plus_minus_violations == 0 && self.average_violations == 0
    }
}

/// Random correlation inequalities, Haar measurements and sorted uniform
/// angle pairs in `[0, pi/4]`.
pub fn monotonicity_suite(
    scenario: &Scenario,
    draw: InequalityDraw,
    trials: u64,
    seed: u64,
    workers: Option<usize>,
) -> Result<MonotonicitySuite> {
    let checks = map_indices(trials, workers, |t| {
        let mut rng = trial_rng(seed, t);
        let ms = sample_measurement_set(scenario, SeedSpec::new(seed, t));
        let ineq = match draw {
            InequalityDraw::Gaussian => random_correlation_inequality(scenario, &mut rng)?,
            InequalityDraw::Aligned => {
                let ghz = make_ghz_family(scenario.n_parties(), std::f64::consts::FRAC_PI_4)?;
                let corr = to_correlators(&compute_behavior(&ghz, &ms)?);
                let coeffs = corr.joint().iter().map(|e| e.signum()).collect();
                let ineq = BellInequality::correlation(scenario.clone(), coeffs)?;
                let g = local_bound(&ineq)?;
                ineq.with_local_bound(g)
            }
        };
        let (theta1, theta2) = loop {
            let a: f64 = rng.random_range(0.0..=std::f64::consts::FRAC_PI_4);
            let b: f64 = rng.random_range(0.0..=std::f64::consts::FRAC_PI_4);
            if a != b {
                break (a.min(b), a.max(b));
            }
        };
        check_theorem1(&ineq, &ms, theta1, theta2)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let count = |f: &dyn Fn(&TheoremCheck) -> bool| checks.iter().filter(|c| f(c)).count() as u64;
    let failed = |c: &TheoremCheck| c.verdict == Verdict::Violated || !c.plus_exceeds_minus || !c.average_below_bound;
    Ok(MonotonicitySuite {
        scenario: scenario.label(),
        draw,
        trials,
        vacuous: count(&|c| c.verdict == Verdict::Vacuous),
        holds: count(&|c| c.verdict == Verdict::Holds),
        violations: count(&|c| c.verdict == Verdict::Violated),
        plus_minus_violations: count(&|c| !c.plus_exceeds_minus),
        average_violations: count(&|c| !c.average_below_bound),
        first_failure: checks.iter().find(|c| failed(c)).cloned(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_8, SQRT_2};

    fn tsirelson() -> MeasurementSet {
        let r = FRAC_1_SQRT_2;
        MeasurementSet::from_bloch(&[
            vec![[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]],
            vec![[r, 0.0, r], [r, 0.0, -r]],
        ])
        .unwrap()
    }

    #[test]
    fn chsh_tsirelson_pair() {
        let c = check_theorem1(&BellInequality::chsh(), &tsirelson(), FRAC_PI_8, FRAC_PI_4).unwrap();
        // the state at pi/8 has <XX> = sin(pi/4) and <ZZ> = 1
        let want = SQRT_2 * (FRAC_1_SQRT_2 + 1.0);
        assert_abs_diff_eq!(c.b_theta1, want, epsilon = 1e-12);
        assert_abs_diff_eq!(c.b_theta2, 2.0 * SQRT_2, epsilon = 1e-12);
        assert_eq!(c.verdict, Verdict::Holds);
        assert!(c.plus_exceeds_minus && c.average_below_bound);
    }

    #[test]
    fn vacuous_below_bound() {
        let c = check_theorem1(&BellInequality::chsh(), &tsirelson(), 0.0, 0.1).unwrap();
        assert_eq!(c.verdict, Verdict::Vacuous);
    }

    #[test]
    fn rejects_bad_input() {
        let ms = tsirelson();
        let chsh = BellInequality::chsh();
        assert!(check_theorem1(&chsh, &ms, 0.3, 0.3).is_err());
        assert!(check_theorem1(&chsh, &ms, 0.3, 0.2).is_err());
        assert!(check_theorem1(&chsh, &ms, 0.3, 1.0).is_err());
        let m = BellInequality::bipartite(&[vec![1.0, 1.0], vec![1.0, -1.0]], vec![0.5, 0.0], vec![0.0, 0.0]).unwrap();
        assert!(check_theorem1(&m, &ms, 0.1, 0.2).is_err());
    }

    #[test]
    fn small_suites_pass() {
        for settings in [vec![2, 2], vec![3, 3], vec![2, 2, 2, 2]] {
            let s = Scenario::new(settings).unwrap();
            for draw in [InequalityDraw::Gaussian, InequalityDraw::Aligned] {
                let suite = monotonicity_suite(&s, draw, 300, 9, None).unwrap();
                assert!(suite.passed(), "{suite:?}");
            }
        }
    }

    #[test]
    fn aligned_draws_meet_the_premise() {
        for (settings, trials) in [(vec![2, 2], 1000), (vec![2, 2, 2, 2], 4000)] {
            let s = Scenario::new(settings).unwrap();
            let suite = monotonicity_suite(&s, InequalityDraw::Aligned, trials, 2, None).unwrap();
            assert!(suite.passed() && suite.holds > 0, "{suite:?}");
        }
    }
}
