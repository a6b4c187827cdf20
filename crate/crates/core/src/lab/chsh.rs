use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use serde::Serialize;

use crate::behavior::{compute_behavior, evaluate_inequality};
use crate::error::{Error, Result};
use crate::inequality::BellInequality;
use crate::sampling::MeasurementSet;
use crate::states::make_pure_two_qubit;

/// `A0 = X`, `A1 = Z`, `B0,1 = cos(xi) X +- sin(xi) Z`.
pub fn chsh_family_measurements(xi: f64) -> Result<MeasurementSet> {
    let (s, c) = xi.sin_cos();
    MeasurementSet::from_bloch(&[
        vec![[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]],
        vec![[c, 0.0, s], [c, 0.0, -s]],
    ])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChshFamilyPoint {
    pub theta: f64,
    pub xi: f64,
    /// From the behavior of the measured state.
    pub value: f64,
    /// `2 (sin xi + sin(2 theta) cos xi)`.
    pub closed_form: f64,
}

impl ChshFamilyPoint {
    pub fn deviation(&self) -> f64 {
        (self.value - self.closed_form).abs()
    }
}

pub fn chsh_family_value(theta: f64, xi: f64) -> Result<ChshFamilyPoint> {
    if !theta.is_finite() || !xi.is_finite() {
        return Err(Error::InvalidArgument("angles must be finite".into()));
    }
    let b = compute_behavior(&make_pure_two_qubit(theta), &chsh_family_measurements(xi)?)?;
    let value = evaluate_inequality(&BellInequality::chsh(), &b)?;
    let closed_form = 2.0 * (xi.sin() + (2.0 * theta).sin() * xi.cos());
    Ok(ChshFamilyPoint { theta, xi, value, closed_form })
}

/// `(1 - sin xi) / cos xi`: the family violates CHSH iff `sin(2 theta)`
/// exceeds this.
pub fn chsh_violation_threshold(xi: f64) -> Result<f64> {
    if !(xi > 0.0 && xi < FRAC_PI_2) {
        return Err(Error::InvalidArgument(format!("xi must lie in (0, pi/2), got {xi}")));
    }
    let (s, c) = xi.sin_cos();
    Ok((1.0 - s) / c)
}

/// Angle `xi` whose family measurements violate CHSH on the state at
/// `theta2` but not at `theta1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StrictnessWitness {
    pub theta1: f64,
    pub theta2: f64,
    pub xi: f64,
    pub threshold: f64,
    pub chsh_theta1: f64,
    pub chsh_theta2: f64,
}

impl StrictnessWitness {
    pub fn separates(&self) -> bool {
        self.chsh_theta2 > 2.0 && self.chsh_theta1 <= 2.0
    }
}

/// Puts the threshold halfway between `sin(2 theta1)` and `sin(2 theta2)`;
/// since `(1 - sin xi)/cos xi = tan(pi/4 - xi/2)`, this inverts in closed form.
pub fn strictness_witness(theta1: f64, theta2: f64) -> Result<StrictnessWitness> {
    if !(0.0 <= theta1 && theta1 < theta2 && theta2 <= FRAC_PI_4) {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= theta1 < theta2 <= pi/4, got {theta1} and {theta2}"
        )));
    }
    let t = 0.5 * ((2.0 * theta1).sin() + (2.0 * theta2).sin());
    let xi = FRAC_PI_2 - 2.0 * t.atan();
    Ok(StrictnessWitness {
        theta1,
        theta2,
        xi,
        threshold: chsh_violation_threshold(xi)?,
        chsh_theta1: chsh_family_value(theta1, xi)?.value,
        chsh_theta2: chsh_family_value(theta2, xi)?.value,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChshGridReport {
    pub n_theta: usize,
    pub n_xi: usize,
    pub max_deviation: f64,
    /// Grid points where `value > 2` disagrees with `sin(2 theta) > t(xi)`.
    pub misclassified: u64,
    pub violating: u64,
}

/// `theta_i = i (pi/4)/(n_theta - 1)` and midpoint `xi_j = (j + 1/2)(pi/2)/n_xi`,
/// so no point sits on the excluded `xi` endpoints.
pub fn chsh_grid(n_theta: usize, n_xi: usize) -> Result<ChshGridReport> {
    if n_theta < 2 || n_xi < 1 {
        return Err(Error::InvalidArgument("grid needs at least 2 theta and 1 xi points".into()));
    }
    let mut report = ChshGridReport { n_theta, n_xi, max_deviation: 0.0, misclassified: 0, violating: 0 };
    for i in 0..n_theta {
        let theta = i as f64 * FRAC_PI_4 / (n_theta - 1) as f64;
        for j in 0..n_xi {
            let xi = (j as f64 + 0.5) * FRAC_PI_2 / n_xi as f64;
            let p = chsh_family_value(theta, xi)?;
            report.max_deviation = report.max_deviation.max(p.deviation());
            let violates = p.value > 2.0;
            report.violating += violates as u64;
            if violates != ((2.0 * theta).sin() > chsh_violation_threshold(xi)?) {
                report.misclassified += 1;
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_6, SQRT_2};

    #[test]
    fn substitutions() {
        assert_abs_diff_eq!(chsh_family_value(FRAC_PI_4, FRAC_PI_4).unwrap().value, 2.0 * SQRT_2, epsilon = 1e-12);
        for theta in [0.0, 0.2, 0.6] {
            let p = chsh_family_value(theta, 0.0).unwrap();
            assert_abs_diff_eq!(p.value, 2.0 * (2.0 * theta).sin(), epsilon = 1e-12);
        }
        for k in 1..20 {
            let xi = k as f64 * FRAC_PI_2 / 20.0;
            assert!(chsh_family_value(FRAC_PI_4, xi).unwrap().value > 2.0);
        }
    }

    #[test]
    fn thresholds() {
        assert_abs_diff_eq!(chsh_violation_threshold(FRAC_PI_6).unwrap(), 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert!(chsh_violation_threshold(FRAC_PI_2 - 1e-9).unwrap() < 1e-8);
        assert!(chsh_violation_threshold(0.0).is_err());
        assert!(chsh_violation_threshold(FRAC_PI_2).is_err());
    }

    #[test]
    fn witness_separates() {
        for (a, b) in [(0.0, 0.01), (0.3, 0.31), (0.1, FRAC_PI_4), (0.78, FRAC_PI_4)] {
            let w = strictness_witness(a, b).unwrap();
            assert!(w.separates(), "{w:?}");
        }
        assert!(strictness_witness(0.3, 0.3).is_err());
    }

    #[test]
    fn grid() {
        let r = chsh_grid(50, 50).unwrap();
        assert!(r.max_deviation < 1e-12);
        assert_eq!(r.misclassified, 0);
        assert!(r.violating > 0 && r.violating < 2500);
    }
}
