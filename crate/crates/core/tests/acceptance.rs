//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so that every criterion is reported even
//! when an earlier one fails. Criteria listed in `KNOWN_FAILURES` are expected
//! to fail and are printed as FAIL; the run exits nonzero if any other
//! criterion fails or if a known failure starts passing.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::time::{Duration, Instant};

use nlvol_core::behavior::{compute_behavior, mix_with_uniform, Behavior};
use nlvol_core::lab::{
    chsh_grid, decomposition_suite, lu_invariance_suite, monotonicity_suite, verify_counterexample, InequalityDraw,
};
use nlvol_core::polytope::{is_nonlocal, VISIBILITY_TOL};
use nlvol_core::sampling::{sample_measurement_set, SeedSpec};
use nlvol_core::states::{make_pure_two_qubit, phi_plus, product_zero, StateVector};
use nlvol_core::volume::{curve_outcomes, estimate_volume, EstimatorOptions, SampleOutcome, Variant, VolumeEstimate};
use nlvol_core::Scenario;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

const SEED: u64 = 20_240_601;

// criterion 1
const GOLDEN_SAMPLES: u64 = 100_000;
const GOLDEN_LOW: f64 = 0.2732;
const GOLDEN_HIGH: f64 = 0.2932;
const GOLDEN_SINGLE_THREAD_LIMIT: Duration = Duration::from_secs(120);
// criterion 2
const SEPARABLE_SAMPLES: u64 = 10_000;
// criterion 3
const POSITIVITY_SAMPLES: u64 = 100_000;
// criterion 4
const CURVE_SAMPLES: u64 = 20_000;
const CURVE_POINTS: usize = 9;
// criteria 5 and 6
const PROPERTY_TRIALS: u64 = 10_000;
const DECOMPOSITION_TOL: f64 = 1e-10;
const ODD_RESIDUAL: f64 = 1e-3;
// criterion 7
const CHSH_GRID: usize = 50;
const CHSH_TOL: f64 = 1e-12;
// criterion 8
const COUNTEREXAMPLE_LIMIT: Duration = Duration::from_secs(1);
// criterion 9
const ORACLE_TRIALS: u64 = 10_000;
const MAX_BAND_FRACTION: f64 = 0.005;
// criterion 10
const LU_TRIALS: u64 = 1_000;
const LU_TOL: f64 = 1e-10;
// criterion 11
const WORKER_COUNTS: [usize; 3] = [1, 4, 8];

/// Criteria expected to fail, with the reason.
const KNOWN_FAILURES: &[(u32, &str)] = &[(
    8,
    "the printed two-decimal inequality table is not violated by the printed measurements (clause c)",
)];

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn s(m_a: usize, m_b: usize) -> Scenario {
    Scenario::bipartite(m_a, m_b).unwrap()
}

fn golden_run(workers: usize) -> (VolumeEstimate, Duration) {
    let t = Instant::now();
    let e = estimate_volume(&phi_plus(), &s(2, 2), GOLDEN_SAMPLES, SEED, Variant::Full, &EstimatorOptions::with_workers(workers))
        .unwrap();
    (e, t.elapsed())
}

fn criterion1() -> Outcome {
    let (e, took) = golden_run(1);
    let in_range = (GOLDEN_LOW..=GOLDEN_HIGH).contains(&e.p_hat);
    outcome(
        in_range && took < GOLDEN_SINGLE_THREAD_LIMIT,
        format!(
            "p_hat {:.5} [{:.5}, {:.5}], target [{GOLDEN_LOW}, {GOLDEN_HIGH}], {:.2?} single-threaded",
            e.p_hat, e.ci_low, e.ci_high, took
        ),
    )
}

fn criterion2() -> Outcome {
    let e = estimate_volume(&product_zero(2).unwrap(), &s(2, 2), SEPARABLE_SAMPLES, SEED, Variant::Full, &EstimatorOptions::default())
        .unwrap();
    outcome(e.hits == 0 && e.p_hat == 0.0, format!("{} hits in {} samples", e.hits, e.samples))
}

fn criterion3() -> Outcome {
    let state = make_pure_two_qubit(PI / 16.0);
    let e = estimate_volume(&state, &s(2, 2), POSITIVITY_SAMPLES, SEED, Variant::Full, &EstimatorOptions::default()).unwrap();
    outcome(e.hits > 0, format!("{} hits in {} samples, p_hat {:.5}", e.hits, e.samples, e.p_hat))
}

fn hits(outcomes: &[SampleOutcome]) -> u64 {
    outcomes.iter().filter(|o| o.is_hit()).count() as u64
}

fn criterion4() -> Outcome {
    let grid: Vec<f64> = (0..CURVE_POINTS).map(|k| k as f64 * FRAC_PI_4 / (CURVE_POINTS - 1) as f64).collect();
    // mirrored angles pi/2 - theta, excluding pi/4 itself
    let mirrored: Vec<f64> = grid[..CURVE_POINTS - 1].iter().map(|t| FRAC_PI_2 - t).collect();
    let thetas: Vec<f64> = grid.iter().chain(&mirrored).copied().collect();
    let scenarios = [s(2, 2), s(3, 4), s(8, 8)];
    let opts = EstimatorOptions::default();
    let mut problems = Vec::new();
    let mut lines = Vec::new();

    for variant in [Variant::Full, Variant::Correlation] {
        let mut curves: Vec<Vec<u64>> = Vec::new();
        for sc in &scenarios {
            let t = Instant::now();
            let out = curve_outcomes(&thetas, sc, CURVE_SAMPLES, SEED, variant, &opts).unwrap();
            let ests: Vec<VolumeEstimate> = out[..CURVE_POINTS]
                .iter()
                .zip(&grid)
                .map(|(o, &th)| VolumeEstimate::from_outcomes(o, sc, variant, Some(th), SEED).unwrap())
                .collect();
            let h: Vec<u64> = out[..CURVE_POINTS].iter().map(|o| hits(o)).collect();
            let failures: u64 = out.iter().flatten().filter(|o| **o == SampleOutcome::Failed).count() as u64;
            lines.push(format!(
                "    {variant:<11} {:<10} hits {:?} failures {failures} ({:.1?})",
                sc.label(),
                h,
                t.elapsed()
            ));

            match variant {
                Variant::Correlation => {
                    let drops = (0..CURVE_SAMPLES as usize)
                        .filter(|&i| (1..CURVE_POINTS).any(|k| out[k - 1][i].is_hit() && !out[k][i].is_hit()))
                        .count();
                    if drops > 0 {
                        problems.push(format!("{variant} {}: {drops} samples decrease in theta", sc.label()));
                    }
                }
                Variant::Full => {
                    for k in 1..CURVE_POINTS {
                        if ests[k].p_hat < ests[k - 1].ci_low {
                            problems.push(format!("{variant} {}: drop at point {k}", sc.label()));
                        }
                    }
                }
            }
            for k in 0..CURVE_POINTS - 1 {
                let (a, b) = (hits(&out[k]), hits(&out[CURVE_POINTS + k]));
                if a != b {
                    problems.push(format!("{variant} {}: P({k}) has {a} hits, mirror has {b}", sc.label()));
                }
            }
            curves.push(h);
        }
        for (k, ((a, b), c)) in curves[0].iter().zip(&curves[1]).zip(&curves[2]).enumerate() {
            if !(c >= b && b >= a) {
                problems.push(format!("{variant}: scenario order broken at point {k}"));
            }
        }
    }
    for l in &lines {
        println!("{l}");
    }
    let detail = if problems.is_empty() {
        format!("{CURVE_POINTS} points + mirrors, {CURVE_SAMPLES} paired samples, 3 scenarios, both variants")
    } else {
        problems.join("; ")
    };
    outcome(problems.is_empty(), detail)
}

fn criterion5() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (settings, draw) in [
        (vec![2, 2], InequalityDraw::Gaussian),
        (vec![3, 3], InequalityDraw::Gaussian),
        (vec![2, 2], InequalityDraw::Aligned),
        (vec![3, 3], InequalityDraw::Aligned),
    ] {
        let r = monotonicity_suite(&Scenario::new(settings).unwrap(), draw, PROPERTY_TRIALS, SEED, None).unwrap();
        pass &= r.passed();
        parts.push(format!(
            "{} {draw:?}: {} non-vacuous, {} violations, side {}/{}",
            r.scenario, r.holds + r.violations, r.violations, r.plus_minus_violations, r.average_violations
        ));
    }
    outcome(pass, parts.join("; "))
}

fn criterion6() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for settings in [vec![2, 2], vec![2, 2, 2, 2]] {
        let r = decomposition_suite(&Scenario::new(settings).unwrap(), PROPERTY_TRIALS, SEED, DECOMPOSITION_TOL, None).unwrap();
        pass &= r.above_tolerance == 0;
        parts.push(format!("n={} max residual {:.2e}", r.worst.as_ref().map_or(0, |w| w.n_parties), r.max_residual));
    }
    let odd = decomposition_suite(&Scenario::new(vec![2, 2, 2]).unwrap(), PROPERTY_TRIALS, SEED, ODD_RESIDUAL, None).unwrap();
    pass &= odd.max_residual > ODD_RESIDUAL;
    parts.push(format!("n=3 max residual {:.3} ({} above {ODD_RESIDUAL})", odd.max_residual, odd.above_tolerance));
    outcome(pass, parts.join("; "))
}

fn criterion7() -> Outcome {
    let r = chsh_grid(CHSH_GRID, CHSH_GRID).unwrap();
    outcome(
        r.max_deviation <= CHSH_TOL && r.misclassified == 0,
        format!(
            "max deviation {:.2e}, {} misclassified, {} of {} points violate",
            r.max_deviation,
            r.misclassified,
            r.violating,
            CHSH_GRID * CHSH_GRID
        ),
    )
}

fn criterion8() -> Outcome {
    let t = Instant::now();
    let r = verify_counterexample().unwrap();
    let took = t.elapsed();
    let clauses: Vec<String> = r
        .clauses
        .iter()
        .map(|c| format!("({}) {} {}", c.id, if c.passed { "ok" } else { "FAILED" }, c.detail))
        .collect();
    outcome(r.passed() && took < COUNTEREXAMPLE_LIMIT, format!("{}; {took:.2?}", clauses.join("; ")))
}

/// Largest of the eight CHSH expressions, computed straight from the table.
fn chsh_oracle(b: &Behavior) -> f64 {
    let t = b.table();
    let e = |x: usize, y: usize| {
        let base = (2 * x + y) * 4;
        t[base] - t[base + 1] - t[base + 2] + t[base + 3]
    };
    let v = [e(0, 0), e(0, 1), e(1, 0), e(1, 1)];
    let mut best = f64::NEG_INFINITY;
    for minus in 0..4 {
        let sum: f64 = (0..4).map(|k| if k == minus { -v[k] } else { v[k] }).sum();
        best = best.max(sum.abs());
    }
    best
}

fn random_two_qubit_state(rng: &mut ChaCha8Rng) -> StateVector {
    let amps = (0..4).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
    StateVector::normalized(amps).unwrap()
}

fn criterion9() -> Outcome {
    let sc = s(2, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut band, mut disagree, mut nonlocal) = (0u64, 0u64, 0u64);
    for i in 0..ORACLE_TRIALS {
        let ms = sample_measurement_set(&sc, SeedSpec::new(SEED, i));
        let mut b = compute_behavior(&random_two_qubit_state(&mut rng), &ms).unwrap();
        if i % 2 == 1 {
            b = mix_with_uniform(&b, rng.random_range(0.6..1.0)).unwrap();
        }
        let chsh = chsh_oracle(&b);
        // CHSH scales linearly under uniform noise, so v* = min(1, 2/chsh)
        if (2.0 / chsh - 1.0).abs() <= VISIBILITY_TOL {
            band += 1;
            continue;
        }
        let oracle = chsh > 2.0;
        nonlocal += oracle as u64;
        if is_nonlocal(&b).unwrap() != oracle {
            disagree += 1;
        }
    }
    let fraction = band as f64 / ORACLE_TRIALS as f64;
    outcome(
        disagree == 0 && fraction < MAX_BAND_FRACTION,
        format!("{disagree} disagreements, {band} in band, {nonlocal} nonlocal of {ORACLE_TRIALS}"),
    )
}

fn criterion10() -> Outcome {
    let r = lu_invariance_suite(LU_TRIALS, SEED, LU_TOL, None).unwrap();
    outcome(r.passed(), format!("max entrywise deviation {:.2e} over {} trials", r.max_deviation, r.trials))
}

fn criterion11() -> Outcome {
    let runs: Vec<(usize, u64, Duration)> = WORKER_COUNTS
        .iter()
        .map(|&w| {
            let (e, took) = golden_run(w);
            (w, e.hits, took)
        })
        .collect();
    let same = runs.iter().all(|r| r.1 == runs[0].1);
    let detail: Vec<String> = runs.iter().map(|(w, h, t)| format!("{w} workers: {h} hits ({t:.2?})")).collect();
    outcome(same, detail.join(", "))
}

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "golden value, maximally entangled [2,2,2,2]", criterion1),
        (2, "separable state gives exactly zero", criterion2),
        (3, "strict positivity at theta = pi/16", criterion3),
        (4, "volume curves: monotone, ordered, symmetric", criterion4),
        (5, "monotonicity property suite", criterion5),
        (6, "decomposition identity", criterion6),
        (7, "CHSH family closed form and threshold", criterion7),
        (8, "marginal-term counterexample", criterion8),
        (9, "LP agrees with CHSH facets", criterion9),
        (10, "local unitary invariance", criterion10),
        (11, "determinism across worker counts", criterion11),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        let t = Instant::now();
        let o = run();
        let known = KNOWN_FAILURES.iter().find(|(k, _)| *k == id);
        println!(
            "criterion {id:>2} {} {name}: {} [{:.1?}]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed()
        );
        match (o.pass, known) {
            (false, Some((_, why))) => println!("             known failure: {why}"),
            (false, None) => unexpected.push(format!("criterion {id} failed")),
            (true, Some(_)) => unexpected.push(format!("criterion {id} passed but is listed as a known failure")),
            (true, None) => {}
        }
    }
    if !unexpected.is_empty() {
        eprintln!("{}", unexpected.join("\n"));
        std::process::exit(1);
    }
}
