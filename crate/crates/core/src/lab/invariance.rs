use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::{Rng, RngCore};
use rand_distr::StandardNormal;
use serde::Serialize;

use super::trial_rng;
use crate::behavior::compute_behavior;
use crate::error::Result;
use crate::par::map_indices;
use crate::sampling::{rotate_measurement_set, sample_measurement_set, transpose, Rotation, SeedSpec};
use crate::scenario::Scenario;
use crate::states::{bloch_rotation, StateVector};

/// Haar-random element of SU(2) from a uniform unit quaternion.
pub fn random_su2<R: RngCore>(rng: &mut R) -> Matrix2<Complex64> {
    let q: [f64; 4] = loop {
        let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-8 {
            break q.map(|x| x / n);
        }
    };
    let [a, b, c, d] = q;
    Matrix2::new(
        Complex64::new(a, b),
        Complex64::new(c, d),
        Complex64::new(-c, d),
        Complex64::new(a, -b),
    )
}

fn random_state<R: RngCore>(n: usize, rng: &mut R) -> Result<StateVector> {
    let amps = (0..1usize << n)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    StateVector::normalized(amps)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvarianceSuite {
    pub trials: u64,
    pub tolerance: f64,
    /// Largest entrywise gap between the two behavior tables.
    pub max_deviation: f64,
    pub failures: u64,
}

impl InvarianceSuite {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Measuring `(V_1 x ... x V_n)|psi>` with Bloch vectors `n` gives the same
/// table as measuring `|psi>` with `R_i^T n`, where `R_i` is the rotation of
/// `V_i`. States are Gaussian, two or three parties with 1 to 3 settings each.
pub fn lu_invariance_suite(trials: u64, seed: u64, tolerance: f64, workers: Option<usize>) -> Result<InvarianceSuite> {
    let deviations = map_indices(trials, workers, |t| -> Result<f64> {
        let mut rng = trial_rng(seed, t);
        let n = rng.random_range(2..=3usize);
        let settings = (0..n).map(|_| rng.random_range(1..=3usize)).collect();
        let scenario = Scenario::new(settings)?;
        let psi = random_state(n, &mut rng)?;
        let us: Vec<_> = (0..n).map(|_| random_su2(&mut rng)).collect();
        let ms = sample_measurement_set(&scenario, SeedSpec::new(seed, t));

        let rotated_state = psi.apply_local(&us)?;
        let back: Vec<Rotation> = us.iter().map(|u| transpose(&bloch_rotation(u))).collect();
        let rotated_ms = rotate_measurement_set(&ms, &back)?;
        let lhs = compute_behavior(&rotated_state, &ms)?;
        let rhs = compute_behavior(&psi, &rotated_ms)?;
        Ok(lhs.table().iter().zip(rhs.table()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(InvarianceSuite {
        trials,
        tolerance,
        max_deviation: deviations.iter().copied().fold(0.0, f64::max),
        failures: deviations.iter().filter(|&&d| d > tolerance).count() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn su2_is_unitary_with_unit_determinant() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let u = random_su2(&mut rng);
            let id = u * u.adjoint();
            assert!((id - Matrix2::identity()).norm() < 1e-12);
            assert!((u.determinant() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn suite_passes() {
        let s = lu_invariance_suite(100, 2, 1e-10, None).unwrap();
        assert!(s.passed(), "{s:?}");
    }

    #[test]
    fn a_wrong_rotation_is_caught() {
        // using R instead of R^T must show a gap for a generic unitary
        let mut rng = trial_rng(5, 0);
        let scenario = Scenario::bipartite(2, 2).unwrap();
        let psi = random_state(2, &mut rng).unwrap();
        let us: Vec<_> = (0..2).map(|_| random_su2(&mut rng)).collect();
        let ms = sample_measurement_set(&scenario, SeedSpec::new(5, 0));
        let wrong: Vec<Rotation> = us.iter().map(bloch_rotation).collect();
        let lhs = compute_behavior(&psi.apply_local(&us).unwrap(), &ms).unwrap();
        let rhs = compute_behavior(&psi, &rotate_measurement_set(&ms, &wrong).unwrap()).unwrap();
        let gap = lhs.table().iter().zip(rhs.table()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(gap > 1e-3);
    }
}
