//! Measurements that are local on `|phi+>` but nonlocal on the partially
//! entangled state at `theta = 3 pi / 16`, with the inequality printed for them.

use serde::Serialize;

use crate::behavior::{compute_behavior, evaluate_inequality};
use crate::error::{Error, Result};
use crate::inequality::BellInequality;
use crate::polytope::{local_bound, visibility, VISIBILITY_TOL};
use crate::sampling::MeasurementSet;
use crate::states::{make_pure_two_qubit, phi_plus};

/// Collins–Gisin table, two decimals as printed: header holds the `<A_x>`
/// coefficients, each row starts with `<B_y>` followed by `<A_x B_y>`.
pub const COUNTEREXAMPLE_TABLE: &str = "\
,-0.25,0,0.25
-0.13,0.25,-0.25,-0.25
-0.13,0.25,0.25,-0.25
-0.01,0,0,0
0,-0.25,0,0.25
";

const ALICE: [[f64; 3]; 3] = [
    [0.0213, 0.9599, -0.2795],
    [0.3539, 0.9320, -0.0780],
    [0.8786, -0.4772, 0.0176],
];

const BOB: [[f64; 3]; 4] = [
    [0.8685, 0.2420, 0.4326],
    [0.0095, 0.6762, 0.7367],
    [-0.0025, 0.6456, -0.7636],
    [0.6437, 0.0175, -0.7651],
];

/// Printed vectors are 4-decimal truncations of unit vectors.
const NORM_TOL: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CounterexampleBundle {
    pub theta: f64,
    pub alice_bloch: Vec<[f64; 3]>,
    pub bob_bloch: Vec<[f64; 3]>,
    pub inequality: BellInequality,
}

impl CounterexampleBundle {
    pub fn measurements(&self) -> Result<MeasurementSet> {
        MeasurementSet::from_bloch(&[self.alice_bloch.clone(), self.bob_bloch.clone()])
    }
}

fn renormalize(v: [f64; 3]) -> Result<[f64; 3]> {
    let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::InvalidArgument(format!("printed vector {v:?} has norm {norm}")));
    }
    Ok(v.map(|c| c / norm))
}

pub fn counterexample_bundle() -> Result<CounterexampleBundle> {
    let inequality = BellInequality::from_csv_str(COUNTEREXAMPLE_TABLE)?;
    let bound = local_bound(&inequality)?;
    Ok(CounterexampleBundle {
        theta: 3.0 * std::f64::consts::PI / 16.0,
        alice_bloch: ALICE.iter().map(|&v| renormalize(v)).collect::<Result<_>>()?,
        bob_bloch: BOB.iter().map(|&v| renormalize(v)).collect::<Result<_>>()?,
        inequality: inequality.with_local_bound(bound),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Clause {
    pub id: char,
    pub statement: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub theta: f64,
    pub visibility_partial: f64,
    pub visibility_maximal: f64,
    pub table_value: f64,
    pub table_value_maximal: f64,
    pub table_local_bound: f64,
    /// `table_value - table_local_bound`; positive means violated.
    pub table_margin: f64,
    /// Separating inequality found by the LP for the partially entangled
    /// behavior, if any.
    pub lp_witness: Option<BellInequality>,
    pub lp_witness_value: Option<f64>,
    pub clauses: Vec<Clause>,
}

impl CounterexampleReport {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    pub fn failed_clauses(&self) -> Vec<char> {
        self.clauses.iter().filter(|c| !c.passed).map(|c| c.id).collect()
    }
}

/// Checks the four clauses. Every clause is evaluated even when an earlier
/// one fails.
pub fn verify_counterexample() -> Result<CounterexampleReport> {
    let bundle = counterexample_bundle()?;
    let ms = bundle.measurements()?;
    let scenario = bundle.inequality.scenario().clone();
    let partial = compute_behavior(&make_pure_two_qubit(bundle.theta), &ms)?;
    let maximal = compute_behavior(&phi_plus(), &ms)?;
    let vp = visibility(&partial)?;
    let vm = visibility(&maximal)?;
    let g = bundle.inequality.local_bound().expect("bundle carries its bound");
    let value = evaluate_inequality(&bundle.inequality, &partial)?;
    let value_max = evaluate_inequality(&bundle.inequality, &maximal)?;

    let (lp_witness, lp_witness_value) = match &vp.witness {
        Some(w) => {
            let ineq = w.to_inequality(&scenario)?;
            let v = evaluate_inequality(&ineq, &partial)?;
            (Some(ineq), Some(v))
        }
        None => (None, None),
    };

    let marginals: Vec<f64> = bundle.inequality.marginal_coeffs().iter().flatten().copied().collect();
    let clauses = vec![
        Clause {
            id: 'a',
            statement: "partially entangled behavior is nonlocal",
            passed: vp.visibility < 1.0 - VISIBILITY_TOL,
            detail: format!("visibility {:.9}", vp.visibility),
        },
        Clause {
            id: 'b',
            statement: "maximally entangled behavior is local",
            passed: vm.is_local,
            detail: format!("visibility {:.9}", vm.visibility),
        },
        Clause {
            id: 'c',
            statement: "table inequality exceeds its local bound on the partially entangled behavior",
            passed: value > g,
            detail: format!("value {value:.6}, local bound {g:.6}, margin {:.6}", value - g),
        },
        Clause {
            id: 'd',
            statement: "table inequality has marginal terms",
            passed: marginals.iter().any(|&c| c != 0.0),
            detail: format!("{} nonzero marginal coefficients", marginals.iter().filter(|&&c| c != 0.0).count()),
        },
    ];
    Ok(CounterexampleReport {
        theta: bundle.theta,
        visibility_partial: vp.visibility,
        visibility_maximal: vm.visibility,
        table_value: value,
        table_value_maximal: value_max,
        table_local_bound: g,
        table_margin: value - g,
        lp_witness,
        lp_witness_value,
        clauses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::enumerate_strategies;

    #[test]
    fn bundle_shape() {
        let b = counterexample_bundle().unwrap();
        assert_eq!(b.inequality.scenario().settings(), &[3, 4]);
        assert_eq!(b.inequality.marginal_coeffs()[0], vec![-0.25, 0.0, 0.25]);
        assert_eq!(b.inequality.joint_coeff(&[0, 0]), 0.25);
        assert_eq!(b.inequality.joint_coeff(&[1, 0]), -0.25);
        assert_eq!(b.inequality.joint_coeff(&[0, 3]), -0.25);
        for v in b.alice_bloch.iter().chain(&b.bob_bloch) {
            assert!((v.iter().map(|c| c * c).sum::<f64>() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn bound_matches_enumeration() {
        // independent oracle: evaluate every deterministic behavior directly
        let b = counterexample_bundle().unwrap();
        let s = b.inequality.scenario();
        let strategies = enumerate_strategies(s).unwrap();
        assert_eq!(strategies.len(), 128);
        let best = strategies
            .iter()
            .map(|d| evaluate_inequality(&b.inequality, &d.behavior(s).unwrap()).unwrap())
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((best - b.inequality.local_bound().unwrap()).abs() < 1e-12);
    }

    #[test]
    fn report_structure() {
        let r = verify_counterexample().unwrap();
        assert_eq!(r.clauses.len(), 4);
        let by_id = |id| r.clauses.iter().find(|c| c.id == id).unwrap().passed;
        assert!(by_id('a'));
        assert!(by_id('b'));
        assert!(by_id('d'));
        // the separating inequality the LP finds is violated by construction
        let w = r.lp_witness.as_ref().unwrap();
        assert!(r.lp_witness_value.unwrap() > w.local_bound().unwrap());
    }
}
