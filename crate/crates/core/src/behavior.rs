//! Behaviors `p(a|x)` of dichotomic measurements and their correlator form.
//!
//! Outcomes are stored as `+1`/`-1`. Within a setting tuple the outcome tuple
//! is a bit pattern, party 1 most significant, bit set meaning outcome `-1`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::inequality::{cg_digits, cg_index};
use crate::sampling::MeasurementSet;
use crate::scenario::Scenario;
use crate::states::{apply_single_qubit, StateVector};

pub use crate::inequality::BellInequality;

const CLAMP_TOL: f64 = 1e-10;
const SUM_TOL: f64 = 1e-9;
const NO_SIGNALING_TOL: f64 = 1e-9;

/// How much checking `Behavior` construction does.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Validation {
    /// Range, normalization and no-signaling.
    Full,
    /// Range clamping only; for validated pipelines in hot loops.
    RangeOnly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Behavior {
    scenario: Scenario,
    table: Vec<f64>,
}

/// Outcome sign of `party` inside outcome pattern `a` for `n` parties.
#[inline]
pub fn outcome_sign(a: usize, party: usize, n: usize) -> f64 {
    if (a >> (n - 1 - party)) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl Behavior {
    pub fn new(scenario: Scenario, table: Vec<f64>) -> Result<Self> {
        Self::with_validation(scenario, table, Validation::Full)
    }

    /// `table[x * 2^n + a]` for flat setting index `x` and outcome pattern `a`.
    pub fn with_validation(scenario: Scenario, mut table: Vec<f64>, validation: Validation) -> Result<Self> {
        let expected = scenario.n_setting_tuples() * scenario.n_outcome_tuples();
        if table.len() != expected {
            return Err(Error::Dimension(format!(
                "behavior table has {} entries, scenario {} needs {expected}",
                table.len(),
                scenario.label()
            )));
        }
        for p in table.iter_mut() {
            if !p.is_finite() || *p < -CLAMP_TOL || *p > 1.0 + CLAMP_TOL {
                let excess = if p.is_finite() { p.min(1.0 - *p).abs() } else { f64::INFINITY };
                return Err(Error::InvalidBehavior { what: "probability range", excess });
            }
            *p = p.clamp(0.0, 1.0);
        }
        let b = Self { scenario, table };
        if validation == Validation::Full {
            b.check_normalization()?;
            b.check_no_signaling()?;
        }
        Ok(b)
    }

    fn check_normalization(&self) -> Result<()> {
        let k = self.scenario.n_outcome_tuples();
        for chunk in self.table.chunks(k) {
            let excess = (chunk.iter().sum::<f64>() - 1.0).abs();
            if excess > SUM_TOL {
                return Err(Error::InvalidBehavior { what: "normalization", excess });
            }
        }
        Ok(())
    }

    /// Distribution of the other parties must not depend on any one party's setting.
    fn check_no_signaling(&self) -> Result<()> {
        let s = &self.scenario;
        let n = s.n_parties();
        let k = s.n_outcome_tuples();
        for party in 0..n {
            let bit = 1usize << (n - 1 - party);
            for flat in 0..s.n_setting_tuples() {
                let xs = s.unflatten_settings(flat);
                if xs[party] != 0 {
                    continue;
                }
                let base = &self.table[flat * k..(flat + 1) * k];
                for x in 1..s.settings()[party] {
                    let mut other = xs.clone();
                    other[party] = x;
                    let o = s.flatten_settings(&other);
                    let alt = &self.table[o * k..(o + 1) * k];
                    for a in (0..k).filter(|a| a & bit == 0) {
                        let excess = ((base[a] + base[a | bit]) - (alt[a] + alt[a | bit])).abs();
                        if excess > NO_SIGNALING_TOL {
                            return Err(Error::InvalidBehavior { what: "no-signaling", excess });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    /// `p(outcomes | settings)` with outcomes given as `+1`/`-1`.
    pub fn probability(&self, settings: &[usize], outcomes: &[i8]) -> f64 {
        let n = self.scenario.n_parties();
        let a = outcomes
            .iter()
            .fold(0usize, |acc, &o| (acc << 1) | usize::from(o < 0));
        debug_assert_eq!(outcomes.len(), n);
        self.table[self.scenario.flatten_settings(settings) * (1 << n) + a]
    }

    /// Uniformly random outcomes for every setting tuple.
    pub fn uniform(scenario: &Scenario) -> Behavior {
        let k = scenario.n_outcome_tuples();
        Behavior {
            scenario: scenario.clone(),
            table: vec![1.0 / k as f64; scenario.n_setting_tuples() * k],
        }
    }

    /// Behavior of a deterministic strategy, `outcomes[party][setting]` in `{+1,-1}`.
    pub fn deterministic(scenario: &Scenario, outcomes: &[Vec<i8>]) -> Result<Behavior> {
        if outcomes.len() != scenario.n_parties()
            || outcomes.iter().zip(scenario.settings()).any(|(o, &m)| o.len() != m)
        {
            return Err(Error::Dimension("strategy shape does not match scenario".into()));
        }
        let n = scenario.n_parties();
        let k = scenario.n_outcome_tuples();
        let mut table = vec![0.0; scenario.n_setting_tuples() * k];
        for flat in 0..scenario.n_setting_tuples() {
            let xs = scenario.unflatten_settings(flat);
            let a = (0..n).fold(0usize, |acc, p| (acc << 1) | usize::from(outcomes[p][xs[p]] < 0));
            table[flat * k + a] = 1.0;
        }
        Ok(Behavior { scenario: scenario.clone(), table })
    }

    /// Expectations of `prod_{i in S} a_i` for every party subset `S` and
    /// settings of the parties in `S`, in the layout of
    /// [`crate::inequality::cg_index`]. Entry 0 is the constant 1.
    pub fn cg_vector(&self) -> Vec<f64> {
        let s = &self.scenario;
        let n = s.n_parties();
        let k = s.n_outcome_tuples();
        (0..s.cg_dim())
            .map(|idx| {
                let digits = cg_digits(s, idx);
                let xs: Vec<usize> = digits.iter().map(|&d| d.saturating_sub(1)).collect();
                let row = &self.table[s.flatten_settings(&xs) * k..][..k];
                row.iter()
                    .enumerate()
                    .map(|(a, &p)| {
                        let sign: f64 = (0..n)
                            .filter(|&i| digits[i] > 0)
                            .map(|i| outcome_sign(a, i, n))
                            .product();
                        sign * p
                    })
                    .sum()
            })
            .collect()
    }

    /// Inverse of [`Behavior::cg_vector`]:
    /// `p(a|x) = 2^-n sum_S prod_{i in S} a_i E_S(x_S)`.
    pub fn from_cg_vector(scenario: &Scenario, cg: &[f64], validation: Validation) -> Result<Behavior> {
        if cg.len() != scenario.cg_dim() {
            return Err(Error::Dimension(format!(
                "coordinate vector of length {} for scenario {}",
                cg.len(),
                scenario.label()
            )));
        }
        let n = scenario.n_parties();
        let k = scenario.n_outcome_tuples();
        let scale = 1.0 / k as f64;
        let mut table = vec![0.0; scenario.n_setting_tuples() * k];
        for flat in 0..scenario.n_setting_tuples() {
            let xs = scenario.unflatten_settings(flat);
            for a in 0..k {
                let mut acc = 0.0;
                for subset in 0..k {
                    let mut digits = vec![0; n];
                    let mut sign = 1.0;
                    for i in 0..n {
                        if (subset >> (n - 1 - i)) & 1 == 1 {
                            digits[i] = xs[i] + 1;
                            sign *= outcome_sign(a, i, n);
                        }
                    }
                    acc += sign * cg[cg_index(scenario, &digits)];
                }
                table[flat * k + a] = acc * scale;
            }
        }
        Behavior::with_validation(scenario.clone(), table, validation)
    }

    /// Keeps the leading settings of each party as given by `sub`.
    pub fn restrict(&self, sub: &Scenario) -> Result<Behavior> {
        if !sub.is_nested_in(&self.scenario) {
            return Err(Error::Scenario(format!(
                "{} is not nested in {}",
                sub.label(),
                self.scenario.label()
            )));
        }
        let k = sub.n_outcome_tuples();
        let mut table = Vec::with_capacity(sub.n_setting_tuples() * k);
        for flat in 0..sub.n_setting_tuples() {
            let big = self.scenario.flatten_settings(&sub.unflatten_settings(flat));
            table.extend_from_slice(&self.table[big * k..(big + 1) * k]);
        }
        Ok(Behavior { scenario: sub.clone(), table })
    }
}

/// Full correlators plus single-body marginals.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelatorTable {
    scenario: Scenario,
    /// `<A_x1 ... A_xn>` indexed like `Scenario::flatten_settings`.
    joint: Vec<f64>,
    marginals: Vec<Vec<f64>>,
}

impl CorrelatorTable {
    pub fn new(scenario: Scenario, joint: Vec<f64>, marginals: Vec<Vec<f64>>) -> Result<Self> {
        if joint.len() != scenario.n_setting_tuples()
            || marginals.len() != scenario.n_parties()
            || marginals.iter().zip(scenario.settings()).any(|(c, &m)| c.len() != m)
        {
            return Err(Error::Dimension(format!(
                "correlator table shape does not match scenario {}",
                scenario.label()
            )));
        }
        Ok(Self { scenario, joint, marginals })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn joint(&self) -> &[f64] {
        &self.joint
    }

    pub fn joint_at(&self, xs: &[usize]) -> f64 {
        self.joint[self.scenario.flatten_settings(xs)]
    }

    pub fn marginals(&self) -> &[Vec<f64>] {
        &self.marginals
    }

    /// `p(ab|xy) = (1 + a<A_x> + b<B_y> + ab<A_xB_y>)/4`; bipartite only.
    pub fn to_behavior(&self) -> Result<Behavior> {
        if !self.scenario.is_bipartite() {
            return Err(Error::Scenario(
                "full behavior needs intermediate correlators for more than 2 parties".into(),
            ));
        }
        let s = &self.scenario;
        let mut cg = vec![0.0; s.cg_dim()];
        cg[0] = 1.0;
        for (x, &m) in self.marginals[0].iter().enumerate() {
            cg[cg_index(s, &[x + 1, 0])] = m;
        }
        for (y, &m) in self.marginals[1].iter().enumerate() {
            cg[cg_index(s, &[0, y + 1])] = m;
        }
        for (flat, &c) in self.joint.iter().enumerate() {
            let xs = s.unflatten_settings(flat);
            cg[cg_index(s, &[xs[0] + 1, xs[1] + 1])] = c;
        }
        Behavior::from_cg_vector(s, &cg, Validation::Full)
    }
}

/// `p(a|x) = || (P_{a1|x1} (x) ... (x) P_{an|xn}) psi ||^2`.
pub fn compute_behavior(state: &StateVector, ms: &MeasurementSet) -> Result<Behavior> {
    compute_behavior_with(state, ms, Validation::Full)
}

pub fn compute_behavior_with(state: &StateVector, ms: &MeasurementSet, validation: Validation) -> Result<Behavior> {
    let n = state.n_qubits();
    if ms.n_parties() != n {
        return Err(Error::Dimension(format!(
            "{} measured parties on a {n}-qubit state",
            ms.n_parties()
        )));
    }
    let scenario = ms.scenario();
    let k = scenario.n_outcome_tuples();
    let projectors: Vec<Vec<[nalgebra::Matrix2<Complex64>; 2]>> = ms
        .parties()
        .iter()
        .map(|p| p.iter().map(|o| [o.projector(true), o.projector(false)]).collect())
        .collect();
    let psi: Vec<Complex64> = state.amplitudes().iter().copied().collect();
    let mut table = vec![0.0; scenario.n_setting_tuples() * k];
    let mut work = psi.clone();
    for flat in 0..scenario.n_setting_tuples() {
        let xs = scenario.unflatten_settings(flat);
        for a in 0..k {
            work.copy_from_slice(&psi);
            for (party, &x) in xs.iter().enumerate() {
                let negative = (a >> (n - 1 - party)) & 1 == 1;
                apply_single_qubit(&mut work, n, party, &projectors[party][x][usize::from(negative)]);
            }
            table[flat * k + a] = work.iter().map(|c| c.norm_sqr()).sum();
        }
    }
    Behavior::with_validation(scenario, table, validation)
}

/// Full correlators `sum prod(a_i) p(a|x)` and single-body marginals.
pub fn to_correlators(b: &Behavior) -> CorrelatorTable {
    let s = b.scenario();
    let n = s.n_parties();
    let k = s.n_outcome_tuples();
    let joint = b
        .table
        .chunks(k)
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(a, &p)| (0..n).map(|i| outcome_sign(a, i, n)).product::<f64>() * p)
                .sum()
        })
        .collect();
    let marginals = (0..n)
        .map(|party| {
            (0..s.settings()[party])
                .map(|x| {
                    let mut xs = vec![0; n];
                    xs[party] = x;
                    let row = &b.table[s.flatten_settings(&xs) * k..][..k];
                    row.iter().enumerate().map(|(a, &p)| outcome_sign(a, party, n) * p).sum()
                })
                .collect()
        })
        .collect();
    CorrelatorTable { scenario: s.clone(), joint, marginals }
}

/// `sum g_x <A_x1..A_xn> + sum_i sum_x g^(i)_x <A^(i)_x>`.
pub fn evaluate_inequality(ineq: &BellInequality, b: &Behavior) -> Result<f64> {
    if ineq.scenario() != b.scenario() {
        return Err(Error::Dimension(format!(
            "inequality scenario {} vs behavior scenario {}",
            ineq.scenario().label(),
            b.scenario().label()
        )));
    }
    Ok(evaluate_on_correlators(ineq, &to_correlators(b)))
}

pub fn evaluate_on_correlators(ineq: &BellInequality, c: &CorrelatorTable) -> f64 {
    let joint: f64 = ineq.joint_coeffs().iter().zip(c.joint()).map(|(g, e)| g * e).sum();
    let marg: f64 = ineq
        .marginal_coeffs()
        .iter()
        .zip(c.marginals())
        .flat_map(|(g, e)| g.iter().zip(e).map(|(g, e)| g * e))
        .sum();
    joint + marg
}

/// `v b + (1 - v) uniform`.
pub fn mix_with_uniform(b: &Behavior, v: f64) -> Result<Behavior> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::InvalidArgument(format!("visibility {v} outside [0,1]")));
    }
    let u = (1.0 - v) / b.scenario.n_outcome_tuples() as f64;
    Ok(Behavior {
        scenario: b.scenario.clone(),
        table: b.table.iter().map(|p| v * p + u).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{sample_measurement_set, SeedSpec};
    use crate::states::{make_ghz_family, make_pure_two_qubit, phi_plus, Observable};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_4;

    fn zz() -> MeasurementSet {
        MeasurementSet::new(vec![vec![Observable::sigma_z()], vec![Observable::sigma_z()]]).unwrap()
    }

    #[test]
    fn phi_plus_zz() {
        let b = compute_behavior(&phi_plus(), &zz()).unwrap();
        assert_abs_diff_eq!(b.probability(&[0, 0], &[1, 1]), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(b.probability(&[0, 0], &[-1, -1]), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(b.probability(&[0, 0], &[1, -1]), 0.0, epsilon = 1e-15);
        let c = to_correlators(&b);
        assert_abs_diff_eq!(c.joint()[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.marginals()[0][0], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn psi_theta_zz() {
        let theta = 0.3_f64;
        let b = compute_behavior(&make_pure_two_qubit(theta), &zz()).unwrap();
        assert_abs_diff_eq!(b.probability(&[0, 0], &[1, 1]), theta.cos().powi(2), epsilon = 1e-15);
        assert_abs_diff_eq!(b.probability(&[0, 0], &[-1, -1]), theta.sin().powi(2), epsilon = 1e-15);
        let c = to_correlators(&b);
        assert_abs_diff_eq!(c.joint()[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.marginals()[0][0], (2.0 * theta).cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(c.marginals()[1][0], (2.0 * theta).cos(), epsilon = 1e-15);
    }

    #[test]
    fn product_state_sigma_x_marginal() {
        let ms = MeasurementSet::new(vec![
            vec![Observable::sigma_x()],
            vec![Observable::sigma_z(), Observable::sigma_x()],
        ])
        .unwrap();
        let b = compute_behavior(&make_pure_two_qubit(0.0), &ms).unwrap();
        for y in 0..2 {
            for a in [1, -1] {
                let pa = b.probability(&[0, y], &[a, 1]) + b.probability(&[0, y], &[a, -1]);
                assert_abs_diff_eq!(pa, 0.5, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn uniform_and_mixing() {
        let s = Scenario::bipartite(2, 3).unwrap();
        let u = Behavior::uniform(&s);
        let c = to_correlators(&u);
        assert!(c.joint().iter().chain(c.marginals().iter().flatten()).all(|v| v.abs() < 1e-15));
        let b = compute_behavior(&phi_plus(), &zz()).unwrap();
        assert_eq!(mix_with_uniform(&b, 1.0).unwrap(), b);
        assert_eq!(mix_with_uniform(&b, 0.0).unwrap(), Behavior::uniform(b.scenario()));
        let half = to_correlators(&mix_with_uniform(&b, 0.5).unwrap());
        assert_abs_diff_eq!(half.joint()[0], 0.5, epsilon = 1e-15);
        assert!(mix_with_uniform(&b, 1.5).is_err());
        assert!(mix_with_uniform(&b, -0.1).is_err());
    }

    #[test]
    fn invalid_tables_rejected() {
        let s = Scenario::bipartite(1, 1).unwrap();
        assert!(Behavior::new(s.clone(), vec![0.5, 0.5, 0.5, 0.5]).is_err());
        assert!(Behavior::new(s.clone(), vec![1.1, -0.1, 0.0, 0.0]).is_err());
        assert!(Behavior::new(s.clone(), vec![1.0, 0.0, 0.0]).is_err());
        let ok = Behavior::new(s, vec![1.0 + 5e-11, -5e-11, 0.0, 0.0]).unwrap();
        assert_eq!(ok.table()[0], 1.0);
        assert_eq!(ok.table()[1], 0.0);
        // signaling: Bob's marginal depends on Alice's setting
        let s = Scenario::bipartite(2, 1).unwrap();
        let t = vec![1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0];
        assert!(matches!(
            Behavior::new(s, t),
            Err(Error::InvalidBehavior { what: "no-signaling", .. })
        ));
    }

    #[test]
    fn chsh_on_tsirelson_measurements() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let ms = MeasurementSet::from_bloch(&[
            vec![[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]],
            vec![[r, 0.0, r], [r, 0.0, -r]],
        ])
        .unwrap();
        let b = compute_behavior(&phi_plus(), &ms).unwrap();
        let v = evaluate_inequality(&BellInequality::chsh(), &b).unwrap();
        assert_abs_diff_eq!(v, 2.0 * std::f64::consts::SQRT_2, epsilon = 1e-10);
        let zero = BellInequality::correlation(b.scenario().clone(), vec![0.0; 4]).unwrap();
        assert_eq!(evaluate_inequality(&zero, &b).unwrap(), 0.0);
        let other = Behavior::uniform(&Scenario::bipartite(2, 3).unwrap());
        assert!(evaluate_inequality(&BellInequality::chsh(), &other).is_err());
    }

    #[test]
    fn cg_roundtrip_and_restriction() {
        let s = Scenario::new(vec![3, 2, 2]).unwrap();
        let state = make_ghz_family(3, 0.4).unwrap();
        let ms = sample_measurement_set(&s, SeedSpec::new(9, 1));
        let b = compute_behavior(&state, &ms).unwrap();
        let back = Behavior::from_cg_vector(&s, &b.cg_vector(), Validation::Full).unwrap();
        for (p, q) in b.table().iter().zip(back.table()) {
            assert_abs_diff_eq!(p, q, epsilon = 1e-12);
        }
        let sub = Scenario::new(vec![2, 1, 2]).unwrap();
        let r = b.restrict(&sub).unwrap();
        Behavior::new(sub.clone(), r.table().to_vec()).unwrap();
        let direct = compute_behavior(&state, &ms.restrict(&sub).unwrap()).unwrap();
        assert_eq!(r, direct);
        assert!(b.restrict(&Scenario::new(vec![4, 1, 1]).unwrap()).is_err());
    }

    #[test]
    fn correlators_to_behavior_roundtrip() {
        let s = Scenario::bipartite(3, 4).unwrap();
        let ms = sample_measurement_set(&s, SeedSpec::new(3, 3));
        let b = compute_behavior(&make_pure_two_qubit(FRAC_PI_4 / 3.0), &ms).unwrap();
        let back = to_correlators(&b).to_behavior().unwrap();
        for (p, q) in b.table().iter().zip(back.table()) {
            assert_abs_diff_eq!(p, q, epsilon = 1e-12);
        }
    }

    #[test]
    fn deterministic_behavior_correlators() {
        let s = Scenario::bipartite(2, 2).unwrap();
        let b = Behavior::deterministic(&s, &[vec![1, -1], vec![-1, -1]]).unwrap();
        let c = to_correlators(&b);
        assert_eq!(c.marginals()[0], vec![1.0, -1.0]);
        assert_eq!(c.joint(), &[-1.0, -1.0, 1.0, 1.0]);
    }
}
