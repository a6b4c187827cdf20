//! Linear Bell functionals over marginals and full correlators, and their
//! Collins–Gisin table file format.
//!
//! File layout (bipartite only), `m_A + 1` columns by `m_B + 1` rows:
//!
//! ```text
//!         , <A_0>   , <A_1>   , ...
//! <B_0>   , <A_0B_0>, <A_1B_0>, ...
//! <B_1>   , <A_0B_1>, <A_1B_1>, ...
//! ```
//!
//! The top-left cell is empty. A comment line `# local_bound = <value>`
//! anywhere in the file records a known local bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::Scenario;

const LOCAL_BOUND_KEY: &str = "local_bound";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellInequality {
    scenario: Scenario,
    /// Coefficients of full correlators, indexed like `Scenario::flatten_settings`.
    joint_coeffs: Vec<f64>,
    /// Single-body coefficients, one list per party.
    marginal_coeffs: Vec<Vec<f64>>,
    local_bound: Option<f64>,
}

impl BellInequality {
    pub fn new(scenario: Scenario, joint_coeffs: Vec<f64>, marginal_coeffs: Vec<Vec<f64>>) -> Result<Self> {
        if joint_coeffs.len() != scenario.n_setting_tuples() {
            return Err(Error::Dimension(format!(
                "{} joint coefficients for scenario {}",
                joint_coeffs.len(),
                scenario.label()
            )));
        }
        if marginal_coeffs.len() != scenario.n_parties()
            || marginal_coeffs.iter().zip(scenario.settings()).any(|(c, &m)| c.len() != m)
        {
            return Err(Error::Dimension(format!(
                "marginal coefficient shape does not match scenario {}",
                scenario.label()
            )));
        }
        if joint_coeffs.iter().chain(marginal_coeffs.iter().flatten()).any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coefficient".into()));
        }
        Ok(Self { scenario, joint_coeffs, marginal_coeffs, local_bound: None })
    }

    /// Full-correlator inequality (all marginal coefficients zero).
    pub fn correlation(scenario: Scenario, joint_coeffs: Vec<f64>) -> Result<Self> {
        let marginals = scenario.settings().iter().map(|&m| vec![0.0; m]).collect();
        Self::new(scenario, joint_coeffs, marginals)
    }

    /// `<A0B0> + <A0B1> + <A1B0> - <A1B1> <= 2`.
    pub fn chsh() -> Self {
        let s = Scenario::bipartite(2, 2).expect("valid");
        Self::correlation(s, vec![1.0, 1.0, 1.0, -1.0])
            .expect("valid")
            .with_local_bound(2.0)
    }

    /// Bipartite constructor from a joint table `joint[x][y]` (rows = Alice).
    pub fn bipartite(joint: &[Vec<f64>], marg_a: Vec<f64>, marg_b: Vec<f64>) -> Result<Self> {
        let m_a = joint.len();
        let m_b = joint.first().map_or(0, Vec::len);
        if joint.iter().any(|r| r.len() != m_b) {
            return Err(Error::Dimension("ragged joint coefficient table".into()));
        }
        let scenario = Scenario::bipartite(m_a, m_b)?;
        Self::new(scenario, joint.concat(), vec![marg_a, marg_b])
    }

    pub fn with_local_bound(mut self, bound: f64) -> Self {
        self.local_bound = Some(bound);
        self
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn joint_coeffs(&self) -> &[f64] {
        &self.joint_coeffs
    }

    pub fn joint_coeff(&self, xs: &[usize]) -> f64 {
        self.joint_coeffs[self.scenario.flatten_settings(xs)]
    }

    pub fn marginal_coeffs(&self) -> &[Vec<f64>] {
        &self.marginal_coeffs
    }

    pub fn local_bound(&self) -> Option<f64> {
        self.local_bound
    }

    pub fn is_correlation_inequality(&self) -> bool {
        self.marginal_coeffs.iter().flatten().all(|&c| c == 0.0)
    }

    /// Coefficients in the full coordinate space of size `Scenario::cg_dim`
    /// (see [`crate::behavior::Behavior::cg_vector`]); the constant slot is 0.
    pub fn cg_coefficients(&self) -> Vec<f64> {
        let s = &self.scenario;
        let mut out = vec![0.0; s.cg_dim()];
        for (flat, &g) in self.joint_coeffs.iter().enumerate() {
            let digits: Vec<usize> = s.unflatten_settings(flat).iter().map(|x| x + 1).collect();
            out[cg_index(s, &digits)] = g;
        }
        for (party, coeffs) in self.marginal_coeffs.iter().enumerate() {
            for (x, &g) in coeffs.iter().enumerate() {
                let mut digits = vec![0; s.n_parties()];
                digits[party] = x + 1;
                out[cg_index(s, &digits)] += g;
            }
        }
        out
    }

    /// Parses the Collins–Gisin table format described in the module docs.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut bound = None;
        let mut body = String::new();
        for line in text.lines() {
            let trimmed = line.trim();
            if let Some(comment) = trimmed.strip_prefix('#') {
                if let Some((key, value)) = comment.split_once('=') {
                    if key.trim() == LOCAL_BOUND_KEY {
                        let v: f64 = value.trim().parse().map_err(|_| {
                            Error::Format(format!("bad local bound {:?}", value.trim()))
                        })?;
                        bound = Some(v);
                    }
                }
                continue;
            }
            if trimmed.is_empty() {
                continue;
            }
            body.push_str(line);
            body.push('\n');
        }
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(body.as_bytes());
        let mut rows: Vec<Vec<String>> = Vec::new();
        for rec in reader.records() {
            let rec = rec.map_err(|e| Error::Format(e.to_string()))?;
            rows.push(rec.iter().map(str::to_owned).collect());
        }
        if rows.len() < 2 {
            return Err(Error::Format("need a header row and at least one B row".into()));
        }
        let width = rows[0].len();
        if width < 2 || rows.iter().any(|r| r.len() != width) {
            return Err(Error::Format("rows must all have the same width >= 2".into()));
        }
        if !rows[0][0].is_empty() {
            return Err(Error::Format("top-left cell must be empty".into()));
        }
        let parse = |s: &str| -> Result<f64> {
            s.parse::<f64>().map_err(|_| Error::Format(format!("bad number {s:?}")))
        };
        let marg_a = rows[0][1..].iter().map(|s| parse(s)).collect::<Result<Vec<_>>>()?;
        let m_a = marg_a.len();
        let m_b = rows.len() - 1;
        let mut marg_b = Vec::with_capacity(m_b);
        let mut joint = vec![vec![0.0; m_b]; m_a];
        for (y, row) in rows[1..].iter().enumerate() {
            marg_b.push(parse(&row[0])?);
            for (x, cell) in row[1..].iter().enumerate() {
                joint[x][y] = parse(cell)?;
            }
        }
        let ineq = Self::bipartite(&joint, marg_a, marg_b)?;
        Ok(match bound {
            Some(b) => ineq.with_local_bound(b),
            None => ineq,
        })
    }

    pub fn to_csv_string(&self) -> Result<String> {
        if !self.scenario.is_bipartite() {
            return Err(Error::Format("table format is bipartite only".into()));
        }
        let (m_a, m_b) = (self.scenario.settings()[0], self.scenario.settings()[1]);
        let mut out = String::new();
        if let Some(b) = self.local_bound {
            out.push_str(&format!("# {LOCAL_BOUND_KEY} = {b}\n"));
        }
        let head: Vec<String> = self.marginal_coeffs[0].iter().map(|c| c.to_string()).collect();
        out.push_str(&format!(",{}\n", head.join(",")));
        for y in 0..m_b {
            let mut row = vec![self.marginal_coeffs[1][y].to_string()];
            row.extend((0..m_a).map(|x| self.joint_coeff(&[x, y]).to_string()));
            out.push_str(&row.join(","));
            out.push('\n');
        }
        Ok(out)
    }
}

/// Flat index in the marginal-plus-correlator coordinate space: one digit per
/// party in `0..=m_i`, `0` meaning the party is absent and `x + 1` meaning
/// setting `x`. Party 1 is most significant.
pub fn cg_index(scenario: &Scenario, digits: &[usize]) -> usize {
    digits
        .iter()
        .zip(scenario.settings())
        .fold(0, |acc, (&d, &m)| acc * (m + 1) + d)
}

pub fn cg_digits(scenario: &Scenario, mut index: usize) -> Vec<usize> {
    let mut digits = vec![0; scenario.n_parties()];
    for (slot, &m) in digits.iter_mut().zip(scenario.settings()).rev() {
        *slot = index % (m + 1);
        index /= m + 1;
    }
    digits
}
