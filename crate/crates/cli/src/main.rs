//! `nlvol`: nonlocal volume estimates, volume curves, theorem suites, the
//! marginal-term counterexample and local bounds of inequality files.
//!
//! Exit status is 0 on success, 1 when a check fails and 2 on bad input.

mod angle;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nlvol_core::lab::{run_lab, verify_counterexample, LabConfig};
use nlvol_core::polytope::local_bound;
use nlvol_core::states::make_ghz_family;
use nlvol_core::volume::{estimate_curve, estimate_volume, EstimatorOptions, Variant, VolumeEstimate};
use nlvol_core::{BellInequality, Error, Scenario};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "nlvol", version, about = "Nonlocal volume of cos(t)|0..0> + sin(t)|1..1> under random measurements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Full,
    Correlation,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Full => Variant::Full,
            VariantArg::Correlation => Variant::Correlation,
        }
    }
}

#[derive(clap::Args)]
struct OutputArgs {
    /// Write data here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Thread count; defaults to every core. Results do not depend on it.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
}

impl RunArgs {
    fn workers(&self) -> Option<usize> {
        self.workers.map(|w| w as usize)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the nonlocal volume at one angle.
    Volume {
        /// Settings per party, e.g. `3,4`.
        #[arg(long)]
        scenario: Scenario,
        /// Radians, `max`, or a multiple of pi such as `3pi/16`.
        #[arg(long, value_parser = angle::parse_angle)]
        theta: f64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, value_enum, default_value = "full")]
        variant: VariantArg,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Paired-sample volume curve on an even grid over [0, theta-max].
    Curve {
        #[arg(long)]
        scenario: Scenario,
        #[arg(long, default_value_t = 9, value_parser = clap::value_parser!(u64).range(2..))]
        points: u64,
        #[arg(long, default_value = "max", value_parser = angle::parse_angle)]
        theta_max: f64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, value_enum, default_value = "full")]
        variant: VariantArg,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the monotonicity, decomposition, CHSH-family and invariance suites.
    Theorems {
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 1_000, value_parser = clap::value_parser!(u64).range(1..))]
        invariance_trials: u64,
        #[command(flatten)]
        run: RunArgs,
        /// JSON report destination; stdout if absent.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check the marginal-term counterexample clause by clause.
    Counterexample {
        /// JSON report destination.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Enumerated local bound of a Collins–Gisin table file.
    LocalBound {
        #[arg(long)]
        inequality: PathBuf,
    },
}

enum Failure {
    /// Bad input: exit 2.
    Usage(String),
    /// A check or computation failed: exit 1.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TooManyFailures { .. } | Error::LpStall { .. } | Error::LpSingular => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

const CSV_HEADER: [&str; 8] = ["theta", "scenario", "samples", "hits", "p_hat", "ci_low", "ci_high", "seed"];

fn estimates_csv(rows: &[VolumeEstimate]) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Failure::Check(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for e in rows {
        w.write_record([
            e.theta.map_or(String::new(), |t| t.to_string()),
            e.scenario.label(),
            e.samples.to_string(),
            e.hits.to_string(),
            e.p_hat.to_string(),
            e.ci_low.to_string(),
            e.ci_high.to_string(),
            e.seed.to_string(),
        ])
        .map_err(io)?;
    }
    w.into_inner().map_err(|e| Failure::Check(e.to_string()))
}

fn json<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| Failure::Check(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes `data` to the file, or to stdout when no path is given.
fn emit(data: &[u8], output: Option<&PathBuf>) -> CliResult<()> {
    match output {
        Some(path) => fs::write(path, data).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout().write_all(data).map_err(|e| Failure::Check(e.to_string())),
    }
}

/// Summary lines go to stdout when the data went to a file, else to stderr.
fn summary(line: &str, output: Option<&PathBuf>) {
    if output.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn estimate_line(e: &VolumeEstimate) -> String {
    format!(
        "{} {} theta={:.6} p_hat={:.5} ci=[{:.5}, {:.5}] hits={}/{} failures={}",
        e.scenario.label(),
        e.variant,
        e.theta.unwrap_or(f64::NAN),
        e.p_hat,
        e.ci_low,
        e.ci_high,
        e.hits,
        e.samples,
        e.failures
    )
}

fn emit_estimates(rows: &[VolumeEstimate], out: &OutputArgs) -> CliResult<()> {
    let data = match out.format {
        Format::Csv => estimates_csv(rows)?,
        Format::Json => json(&rows)?,
    };
    emit(&data, out.output.as_ref())?;
    for e in rows {
        summary(&estimate_line(e), out.output.as_ref());
    }
    Ok(())
}

fn check_theta(name: &str, theta: f64) -> CliResult<()> {
    if (0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
        Ok(())
    } else {
        Err(Failure::Usage(format!("{name} {theta} outside [0, pi/2]")))
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Volume { scenario, theta, samples, variant, run, out } => {
            check_theta("theta", theta)?;
            let state = make_ghz_family(scenario.n_parties(), theta)?;
            let opts = EstimatorOptions { workers: run.workers(), ..EstimatorOptions::default() };
            let mut e = estimate_volume(&state, &scenario, samples, run.seed, variant.into(), &opts)?;
            e.theta = Some(theta);
            emit_estimates(&[e], &out)
        }
        Command::Curve { scenario, points, theta_max, samples, variant, run, out } => {
            check_theta("theta-max", theta_max)?;
            let thetas: Vec<f64> = (0..points).map(|k| k as f64 * theta_max / (points - 1) as f64).collect();
            let opts = EstimatorOptions { workers: run.workers(), ..EstimatorOptions::default() };
            let rows = estimate_curve(&thetas, &scenario, samples, run.seed, variant.into(), &opts)?;
            emit_estimates(&rows, &out)
        }
        Command::Theorems { trials, invariance_trials, run, output } => {
            let config = LabConfig {
                theorem_trials: trials,
                decomposition_trials: trials,
                invariance_trials,
                seed: run.seed,
                workers: run.workers(),
            };
            let report = run_lab(&config)?;
            emit(&json(&report)?, output.as_ref())?;
            for s in &report.summary {
                summary(&format!("{} {}: {}", if s.passed { "PASS" } else { "FAIL" }, s.name, s.detail), output.as_ref());
            }
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Check("theorem suites failed".into()))
            }
        }
        Command::Counterexample { output } => {
            let report = verify_counterexample()?;
            if let Some(path) = &output {
                emit(&json(&report)?, Some(path))?;
            }
            for c in &report.clauses {
                println!("({}) {} {}: {}", c.id, if c.passed { "PASS" } else { "FAIL" }, c.statement, c.detail);
            }
            if report.passed() {
                Ok(())
            } else {
                let ids: String = report.failed_clauses().iter().collect();
                Err(Failure::Check(format!("counterexample clause(s) {ids} failed")))
            }
        }
        Command::LocalBound { inequality } => {
            let text = fs::read_to_string(&inequality)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", inequality.display())))?;
            let ineq = BellInequality::from_csv_str(&text)?;
            println!("{}", local_bound(&ineq)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("nlvol: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("nlvol: {msg}");
            ExitCode::from(2)
        }
    }
}
