use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bell scenario with dichotomic outcomes: per-party setting counts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scenario {
    settings: Vec<usize>,
}

/// Per-party limit, so measurement RNG slots never overlap across parties.
pub const MAX_SETTINGS: usize = 1 << 16;

impl Scenario {
    pub fn new(settings: Vec<usize>) -> Result<Self> {
        if settings.len() < 2 {
            return Err(Error::Scenario(format!(
                "need at least 2 parties, got {}",
                settings.len()
            )));
        }
        if settings.contains(&0) {
            return Err(Error::Scenario("every party needs at least one setting".into()));
        }
        if settings.iter().any(|&m| m > MAX_SETTINGS) {
            return Err(Error::Scenario(format!("more than {MAX_SETTINGS} settings for one party")));
        }
        if settings.len() > crate::states::MAX_QUBITS {
            return Err(Error::Scenario(format!("{} parties is too many", settings.len())));
        }
        Ok(Self { settings })
    }

    pub fn bipartite(m_a: usize, m_b: usize) -> Result<Self> {
        Self::new(vec![m_a, m_b])
    }

    pub fn settings(&self) -> &[usize] {
        &self.settings
    }

    pub fn n_parties(&self) -> usize {
        self.settings.len()
    }

    pub fn is_bipartite(&self) -> bool {
        self.settings.len() == 2
    }

    /// Number of setting tuples `prod m_i`.
    pub fn n_setting_tuples(&self) -> usize {
        self.settings.iter().product()
    }

    pub fn n_outcome_tuples(&self) -> usize {
        1 << self.settings.len()
    }

    pub fn total_settings(&self) -> usize {
        self.settings.iter().sum()
    }

    /// Dimension of the marginal-plus-correlator coordinate space including
    /// the constant coordinate: `prod (m_i + 1)`.
    pub fn cg_dim(&self) -> usize {
        self.settings.iter().map(|m| m + 1).product()
    }

    /// Number of deterministic strategies `prod 2^m_i`.
    pub fn n_strategies(&self) -> u128 {
        let bits = self.total_settings();
        if bits >= 128 {
            u128::MAX
        } else {
            1u128 << bits
        }
    }

    /// Row-major index of a setting tuple, party 1 most significant.
    pub fn flatten_settings(&self, xs: &[usize]) -> usize {
        debug_assert_eq!(xs.len(), self.settings.len());
        xs.iter().zip(&self.settings).fold(0, |acc, (&x, &m)| {
            debug_assert!(x < m);
            acc * m + x
        })
    }

    pub fn unflatten_settings(&self, mut flat: usize) -> Vec<usize> {
        let mut xs = vec![0; self.settings.len()];
        for (slot, &m) in xs.iter_mut().zip(&self.settings).rev() {
            *slot = flat % m;
            flat /= m;
        }
        xs
    }

    /// `[m_1,...,m_n,2,...,2]`.
    pub fn label(&self) -> String {
        let parts: Vec<String> = self
            .settings
            .iter()
            .map(|m| m.to_string())
            .chain(std::iter::repeat_n("2".to_string(), self.settings.len()))
            .collect();
        format!("[{}]", parts.join(","))
    }

    /// True if `self` keeps a prefix of every party's settings of `other`.
    pub fn is_nested_in(&self, other: &Scenario) -> bool {
        self.settings.len() == other.settings.len()
            && self.settings.iter().zip(&other.settings).all(|(a, b)| a <= b)
    }
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.label())
    }
}

impl std::str::FromStr for Scenario {
    type Err = Error;

    /// Parses `"3,4"` (setting counts only).
    fn from_str(s: &str) -> Result<Self> {
        let settings = s
            .trim()
            .trim_start_matches('[')
            .trim_end_matches(']')
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Scenario(format!("bad setting count {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Scenario::new(settings)
    }
}
