//! Membership in the local polytope via a visibility LP over deterministic
//! strategies.
//!
//! A strategy is a bit pattern over all `(party, setting)` pairs, party 1
//! setting 0 in the most significant bit, bit set meaning outcome `-1`.
//! Enumeration order is numeric order of that pattern.
//!
//! The LP works in marginal-plus-correlator coordinates (see
//! [`Behavior::cg_vector`]) where the uniform behavior sits at the origin:
//!
//! ```text
//! max v  s.t.  sum_l q_l = 1,   sum_l q_l V_l[c] - v t[c] = 0,   v + s = 1,   q, v, s >= 0
//! ```
//!
//! Columns are generated from strategy indices on demand; pricing maximizes
//! a linear functional over strategies by enumerating every party but the
//! last and choosing the last party's outcomes in closed form.

use std::cell::RefCell;

use serde::Serialize;

use crate::behavior::{Behavior, BellInequality, CorrelatorTable};
use crate::error::{Error, Result};
use crate::inequality::{cg_digits, cg_index};
use crate::scenario::Scenario;
use crate::simplex::{self, ColumnSource, SimplexOptions, Status};

/// Default cap on the number of strategies `prod 2^m_i`.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 20;
/// Cap on total settings for the correlator-only LP.
pub const CORRELATION_SETTINGS_CAP: usize = 30;
/// `is_local` iff `v* >= 1 - VISIBILITY_TOL`.
pub const VISIBILITY_TOL: f64 = 1e-7;

/// Outcome assignment for every `(party, setting)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeterministicStrategy {
    pub index: u64,
    pub outcomes: Vec<Vec<i8>>,
}

impl DeterministicStrategy {
    pub fn from_index(scenario: &Scenario, index: u64) -> Self {
        let total = scenario.total_settings();
        let mut bit = total;
        let outcomes = scenario
            .settings()
            .iter()
            .map(|&m| {
                (0..m)
                    .map(|_| {
                        bit -= 1;
                        if (index >> bit) & 1 == 1 {
                            -1
                        } else {
                            1
                        }
                    })
                    .collect()
            })
            .collect();
        Self { index, outcomes }
    }

    pub fn behavior(&self, scenario: &Scenario) -> Result<Behavior> {
        Behavior::deterministic(scenario, &self.outcomes)
    }
}

fn check_cap(scenario: &Scenario, cap: u128) -> Result<()> {
    let needed = scenario.n_strategies();
    if scenario.total_settings() > 63 || needed > cap {
        return Err(Error::EnumerationCap { needed, cap });
    }
    Ok(())
}

/// Every deterministic strategy, in enumeration order.
pub fn enumerate_strategies(scenario: &Scenario) -> Result<Vec<DeterministicStrategy>> {
    enumerate_strategies_capped(scenario, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_strategies_capped(scenario: &Scenario, cap: u128) -> Result<Vec<DeterministicStrategy>> {
    check_cap(scenario, cap)?;
    Ok((0..scenario.n_strategies() as u64)
        .map(|i| DeterministicStrategy::from_index(scenario, i))
        .collect())
}

/// Per-party bit offsets (from the least significant end) and widths.
#[derive(Clone, Debug)]
struct StrategyLayout {
    settings: Vec<usize>,
    /// Shift of party `p`'s block; setting `x` sits at bit `shift + m_p - 1 - x`.
    shifts: Vec<usize>,
}

impl StrategyLayout {
    fn new(scenario: &Scenario) -> Self {
        let settings = scenario.settings().to_vec();
        let mut shifts = vec![0; settings.len()];
        let mut acc = 0;
        for p in (0..settings.len()).rev() {
            shifts[p] = acc;
            acc += settings[p];
        }
        Self { settings, shifts }
    }

    #[inline]
    fn sign(&self, index: u64, party: usize, setting: usize) -> f64 {
        let bit = self.shifts[party] + self.settings[party] - 1 - setting;
        if (index >> bit) & 1 == 1 {
            -1.0
        } else {
            1.0
        }
    }

    fn compose(&self, per_party: &[u64]) -> u64 {
        per_party.iter().zip(&self.shifts).fold(0, |acc, (&b, &s)| acc | (b << s))
    }
}

/// Vertex of strategy `index` in the full coordinate space (Kronecker product
/// of the per-party vectors `(1, s(0), ..., s(m-1))`).
pub fn strategy_cg_vector(scenario: &Scenario, index: u64) -> Vec<f64> {
    let layout = StrategyLayout::new(scenario);
    let mut out = vec![1.0];
    for (p, &m) in scenario.settings().iter().enumerate() {
        let local: Vec<f64> = std::iter::once(1.0)
            .chain((0..m).map(|x| layout.sign(index, p, x)))
            .collect();
        out = out.iter().flat_map(|&a| local.iter().map(move |&b| a * b)).collect();
    }
    out
}

/// Coordinate row `u` of the last party given a fixed prefix strategy:
/// `u[j] = sum_i P_i w[i * width + j]` with `P` the prefix parties' Kronecker vector.
fn prefix_row(scenario: &Scenario, layout: &StrategyLayout, w: &[f64], prefix: u64, pv: &mut [f64], u: &mut [f64]) {
    let n = scenario.n_parties();
    let m_last = scenario.settings()[n - 1];
    let width = m_last + 1;
    let full_prefix = prefix << m_last;
    pv[0] = 1.0;
    let mut len = 1;
    for (p, &m) in scenario.settings()[..n - 1].iter().enumerate() {
        let stride = m + 1;
        for i in (0..len).rev() {
            let base = pv[i];
            pv[i * stride] = base;
            for x in 0..m {
                pv[i * stride + x + 1] = base * layout.sign(full_prefix, p, x);
            }
        }
        len *= stride;
    }
    u.iter_mut().for_each(|v| *v = 0.0);
    for (i, &f) in pv[..len].iter().enumerate() {
        for (uj, &wj) in u.iter_mut().zip(&w[i * width..(i + 1) * width]) {
            *uj += f * wj;
        }
    }
}

/// Best last-party response to `u`: `u[0] + sum |u[x+1]|`, negative entries
/// answered with `-1`. Zero entries take `+1`.
#[inline]
fn best_response(u: &[f64]) -> (u64, f64) {
    let m = u.len() - 1;
    let mut value = u[0];
    let mut bits = 0u64;
    for (x, &c) in u[1..].iter().enumerate() {
        value += c.abs();
        bits |= u64::from(c < 0.0) << (m - 1 - x);
    }
    (bits, value)
}

/// Maximizes `w . V_l` over strategies `l`, scanning prefixes in index order.
/// Ties resolve to the earliest strategy in enumeration order.
fn max_strategy(scenario: &Scenario, layout: &StrategyLayout, w: &[f64]) -> (u64, f64) {
    let m_last = *scenario.settings().last().expect("nonempty");
    let prefix_bits = scenario.total_settings() - m_last;
    let mut pv = vec![0.0; w.len() / (m_last + 1)];
    let mut u = vec![0.0; m_last + 1];
    let mut best = (0u64, f64::NEG_INFINITY);
    for prefix in 0..(1u64 << prefix_bits) {
        prefix_row(scenario, layout, w, prefix, &mut pv, &mut u);
        let (bits, value) = best_response(&u);
        if value > best.1 {
            best = ((prefix << m_last) | bits, value);
        }
    }
    best
}

/// Same maximization walked in Gray-code order over prefixes, so each step
/// only touches the coordinates that involve the flipped setting.
#[derive(Clone, Debug)]
struct GrayPricer {
    m_last: usize,
    prefix_bits: usize,
    prefix_dim: usize,
    /// For each prefix bit (least significant first), the prefix-vector
    /// entries that change sign when it flips.
    flips: Vec<Vec<usize>>,
}

impl GrayPricer {
    fn new(scenario: &Scenario, layout: &StrategyLayout) -> Self {
        let n = scenario.n_parties();
        let m_last = scenario.settings()[n - 1];
        let prefix_settings = &scenario.settings()[..n - 1];
        let prefix_bits: usize = prefix_settings.iter().sum();
        let prefix_dim: usize = prefix_settings.iter().map(|m| m + 1).product();
        let prefix_scenario_digits = |mut i: usize| {
            let mut d = vec![0; n - 1];
            for (slot, &m) in d.iter_mut().zip(prefix_settings).rev() {
                *slot = i % (m + 1);
                i /= m + 1;
            }
            d
        };
        let flips = (0..prefix_bits)
            .map(|b| {
                let full_bit = b + m_last;
                let p = (0..n - 1)
                    .find(|&p| layout.shifts[p] <= full_bit && full_bit < layout.shifts[p] + layout.settings[p])
                    .expect("bit belongs to a prefix party");
                let x = layout.shifts[p] + layout.settings[p] - 1 - full_bit;
                (0..prefix_dim).filter(|&i| prefix_scenario_digits(i)[p] == x + 1).collect()
            })
            .collect();
        Self { m_last, prefix_bits, prefix_dim, flips }
    }

    fn max(&self, w: &[f64], pv: &mut Vec<f64>, u: &mut Vec<f64>) -> (u64, f64) {
        let width = self.m_last + 1;
        pv.clear();
        pv.resize(self.prefix_dim, 1.0);
        u.clear();
        u.resize(width, 0.0);
        for i in 0..self.prefix_dim {
            for (uj, &wj) in u.iter_mut().zip(&w[i * width..(i + 1) * width]) {
                *uj += wj;
            }
        }
        let mut best = best_response(u);
        let mut gray = 0u64;
        for step in 1..(1u64 << self.prefix_bits) {
            let b = step.trailing_zeros() as usize;
            gray ^= 1 << b;
            for &i in &self.flips[b] {
                let f = 2.0 * pv[i];
                for (uj, &wj) in u.iter_mut().zip(&w[i * width..(i + 1) * width]) {
                    *uj -= f * wj;
                }
                pv[i] = -pv[i];
            }
            let (bits, value) = best_response(u);
            if value > best.1 {
                best = ((gray << self.m_last) | bits, value);
            }
        }
        best
    }
}

/// Largest value of `ineq` over local behaviors (attained at a strategy).
pub fn local_bound(ineq: &BellInequality) -> Result<f64> {
    local_bound_argmax(ineq).map(|(_, v)| v)
}

/// Local bound together with the first maximizing strategy.
pub fn local_bound_argmax(ineq: &BellInequality) -> Result<(DeterministicStrategy, f64)> {
    let s = ineq.scenario();
    check_cap(s, DEFAULT_ENUMERATION_CAP)?;
    let layout = StrategyLayout::new(s);
    let (index, value) = max_strategy(s, &layout, &ineq.cg_coefficients());
    Ok((DeterministicStrategy::from_index(s, index), value))
}

/// Convex weights over strategies.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalModel {
    /// `(strategy index, weight)` for the support, in basis order.
    pub support: Vec<(u64, f64)>,
}

impl LocalModel {
    pub fn total_weight(&self) -> f64 {
        self.support.iter().map(|(_, q)| q).sum()
    }

    /// Mixture of the strategies' coordinate vectors.
    pub fn cg_vector(&self, scenario: &Scenario) -> Vec<f64> {
        let mut out = vec![0.0; scenario.cg_dim()];
        for &(index, q) in &self.support {
            for (o, v) in out.iter_mut().zip(strategy_cg_vector(scenario, index)) {
                *o += q * v;
            }
        }
        out
    }
}

/// Bell inequality read off the LP duals: `coefficients . t <= bound` for
/// every local point, while the tested point scores 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    /// Coefficients in full coordinate layout; the constant slot is 0.
    pub coefficients: Vec<f64>,
    pub bound: f64,
}

impl Witness {
    /// Bipartite witness as a Collins–Gisin inequality.
    pub fn to_inequality(&self, scenario: &Scenario) -> Result<BellInequality> {
        if !scenario.is_bipartite() {
            return Err(Error::Scenario("witness conversion is bipartite only".into()));
        }
        let (m_a, m_b) = (scenario.settings()[0], scenario.settings()[1]);
        let c = |d: [usize; 2]| self.coefficients[cg_index(scenario, &d)];
        let joint: Vec<Vec<f64>> = (0..m_a)
            .map(|x| (0..m_b).map(|y| c([x + 1, y + 1])).collect())
            .collect();
        let marg_a = (0..m_a).map(|x| c([x + 1, 0])).collect();
        let marg_b = (0..m_b).map(|y| c([0, y + 1])).collect();
        Ok(BellInequality::bipartite(&joint, marg_a, marg_b)?.with_local_bound(self.bound))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalityVerdict {
    pub visibility: f64,
    pub is_local: bool,
    pub model: Option<LocalModel>,
    /// Separating inequality, present when nonlocal.
    pub witness: Option<Witness>,
    pub iterations: usize,
    pub degenerate_pivots: usize,
}

/// Which coordinates the LP constrains.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Coordinates {
    /// Marginals and every correlator.
    Full,
    /// Full-body correlators only.
    Correlators,
}

struct VisibilityLp<'a> {
    scenario: &'a Scenario,
    layout: StrategyLayout,
    pricer: GrayPricer,
    /// Full-layout indices constrained by rows `1..=coords.len()`.
    coords: Vec<usize>,
    /// Strategy bits whose parity gives the sign of each constrained coordinate.
    masks: Vec<u64>,
    target: Vec<f64>,
    rhs: Vec<f64>,
    n_strategies: usize,
    /// Pricing scratch: weights in full layout, prefix vector, last-party row.
    scratch: RefCell<(Vec<f64>, Vec<f64>, Vec<f64>)>,
}

impl<'a> VisibilityLp<'a> {
    fn new(scenario: &'a Scenario, kind: Coordinates, target_full: &[f64]) -> Self {
        let layout = StrategyLayout::new(scenario);
        let coords: Vec<usize> = (1..scenario.cg_dim())
            .filter(|&i| match kind {
                Coordinates::Full => true,
                Coordinates::Correlators => cg_digits(scenario, i).iter().all(|&d| d > 0),
            })
            .collect();
        let masks = coords
            .iter()
            .map(|&c| {
                cg_digits(scenario, c)
                    .iter()
                    .enumerate()
                    .filter(|(_, &d)| d > 0)
                    .fold(0u64, |acc, (p, &d)| {
                        acc | 1 << (layout.shifts[p] + layout.settings[p] - d)
                    })
            })
            .collect();
        let target = coords.iter().map(|&i| target_full[i]).collect();
        let rows = coords.len() + 2;
        let mut rhs = vec![0.0; rows];
        rhs[0] = 1.0;
        rhs[rows - 1] = 1.0;
        Self {
            scenario,
            pricer: GrayPricer::new(scenario, &layout),
            layout,
            coords,
            masks,
            target,
            rhs,
            n_strategies: scenario.n_strategies() as usize,
            scratch: RefCell::new((vec![0.0; scenario.cg_dim()], Vec::new(), Vec::new())),
        }
    }

    fn v_column(&self) -> usize {
        self.n_strategies
    }

    fn slack_column(&self) -> usize {
        self.n_strategies + 1
    }

    /// Pricing weights `w` with `w . V_l` equal to the reduced cost of strategy `l`.
    fn load_weights(&self, y: &[f64], w: &mut [f64]) {
        w.iter_mut().for_each(|v| *v = 0.0);
        w[0] = -y[0];
        for (k, &c) in self.coords.iter().enumerate() {
            w[c] = -y[k + 1];
        }
    }

    fn v_reduced_cost(&self, y: &[f64]) -> f64 {
        let last = y.len() - 1;
        1.0 + self.target.iter().zip(&y[1..last]).map(|(t, yk)| t * yk).sum::<f64>() - y[last]
    }

    /// Feasible starting basis: per-party point sets whose product contains
    /// the uniform behavior, plus the slack of `v <= 1`.
    fn initial_basis(&self, kind: Coordinates) -> Vec<usize> {
        let settings = self.scenario.settings();
        let per_party: Vec<Vec<u64>> = settings
            .iter()
            .map(|&m| {
                let all_minus = (1u64 << m) - 1;
                // all +1, then one setting flipped for x = 1..m-1
                let mut pts: Vec<u64> = std::iter::once(0u64)
                    .chain((1..m).map(|x| 1u64 << (m - 1 - x)))
                    .collect();
                if kind == Coordinates::Full {
                    pts.insert(1, all_minus);
                }
                pts
            })
            .collect();
        let mut basis = Vec::with_capacity(self.rhs.len());
        let mut choice = vec![0usize; settings.len()];
        loop {
            let bits: Vec<u64> = choice.iter().enumerate().map(|(p, &c)| per_party[p][c]).collect();
            basis.push(self.layout.compose(&bits) as usize);
            let mut p = settings.len();
            loop {
                if p == 0 {
                    break;
                }
                p -= 1;
                choice[p] += 1;
                if choice[p] < per_party[p].len() {
                    break;
                }
                choice[p] = 0;
                if p == 0 {
                    p = usize::MAX;
                    break;
                }
            }
            if p == usize::MAX || choice.iter().all(|&c| c == 0) {
                break;
            }
        }
        if kind == Coordinates::Correlators {
            // party 1 all -1, everyone else all +1
            let mut bits = vec![0u64; settings.len()];
            bits[0] = (1u64 << settings[0]) - 1;
            basis.push(self.layout.compose(&bits) as usize);
        }
        basis.push(self.slack_column());
        basis
    }
}

impl ColumnSource for VisibilityLp<'_> {
    fn n_rows(&self) -> usize {
        self.rhs.len()
    }

    fn n_columns(&self) -> usize {
        self.n_strategies + 2
    }

    fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    fn cost(&self, j: usize) -> f64 {
        if j == self.v_column() {
            1.0
        } else {
            0.0
        }
    }

    fn column(&self, j: usize, out: &mut [f64]) {
        let last = out.len() - 1;
        out.iter_mut().for_each(|o| *o = 0.0);
        if j == self.v_column() {
            for (o, t) in out[1..last].iter_mut().zip(&self.target) {
                *o = -t;
            }
            out[last] = 1.0;
        } else if j == self.slack_column() {
            out[last] = 1.0;
        } else {
            out[0] = 1.0;
            let index = j as u64;
            for (o, &mask) in out[1..last].iter_mut().zip(&self.masks) {
                *o = if (index & mask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            }
        }
    }

    fn price(&self, y: &[f64]) -> (usize, f64) {
        let mut scratch = self.scratch.borrow_mut();
        let (w, pv, u) = &mut *scratch;
        self.load_weights(y, w);
        let (index, value) = self.pricer.max(w, pv, u);
        let mut best = (index as usize, value);
        let v_rc = self.v_reduced_cost(y);
        if v_rc > best.1 {
            best = (self.v_column(), v_rc);
        }
        let s_rc = -y[y.len() - 1];
        if s_rc > best.1 {
            best = (self.slack_column(), s_rc);
        }
        best
    }

    fn price_first(&self, y: &[f64], tol: f64) -> Option<usize> {
        let mut scratch = self.scratch.borrow_mut();
        let (w, pv, u) = &mut *scratch;
        self.load_weights(y, w);
        let m_last = *self.scenario.settings().last().expect("nonempty");
        let prefix_bits = self.scenario.total_settings() - m_last;
        pv.resize(self.pricer.prefix_dim, 0.0);
        u.resize(m_last + 1, 0.0);
        for prefix in 0..(1u64 << prefix_bits) {
            prefix_row(self.scenario, &self.layout, w, prefix, pv, u);
            if best_response(u).1 <= tol {
                continue;
            }
            for bits in 0..(1u64 << m_last) {
                let value = u[0]
                    + (0..m_last)
                        .map(|x| if (bits >> (m_last - 1 - x)) & 1 == 1 { -u[x + 1] } else { u[x + 1] })
                        .sum::<f64>();
                if value > tol {
                    return Some(((prefix << m_last) | bits) as usize);
                }
            }
        }
        if self.v_reduced_cost(y) > tol {
            return Some(self.v_column());
        }
        (-y[y.len() - 1] > tol).then_some(self.slack_column())
    }

    /// Any feasible point has `sum q = 1`, `v <= 1` and `s <= 1`, so
    /// `v* <= objective + 3 max(0, best reduced cost)`.
    fn upper_bound(&self, objective: f64, best_rc: f64) -> Option<f64> {
        Some(objective + 3.0 * best_rc.max(0.0))
    }
}

fn solve_visibility(scenario: &Scenario, kind: Coordinates, target_full: &[f64]) -> Result<LocalityVerdict> {
    let lp = VisibilityLp::new(scenario, kind, target_full);
    let basis = lp.initial_basis(kind);
    let sol = simplex::solve(&lp, basis, &SimplexOptions::default())?;
    let visibility = sol.value_of(lp.v_column()).clamp(0.0, 1.0);
    let is_local = visibility >= 1.0 - VISIBILITY_TOL;
    let model = is_local.then(|| LocalModel {
        support: sol
            .basis
            .iter()
            .zip(&sol.basic_values)
            .filter(|(&j, &q)| j < lp.n_strategies && q > 0.0)
            .map(|(&j, &q)| (j as u64, q))
            .collect(),
    });
    let witness = (!is_local).then(|| {
        let mut coefficients = vec![0.0; scenario.cg_dim()];
        for (k, &c) in lp.coords.iter().enumerate() {
            coefficients[c] = -sol.duals[k + 1];
        }
        Witness { coefficients, bound: sol.duals[0] }
    });
    Ok(LocalityVerdict { visibility, is_local, model, witness, iterations: sol.iterations, degenerate_pivots: sol.degenerate_pivots })
}

/// Largest `v <= 1` such that `v b + (1 - v) uniform` is local.
pub fn visibility(b: &Behavior) -> Result<LocalityVerdict> {
    visibility_of_cg(b.scenario(), &b.cg_vector())
}

/// [`visibility`] on a precomputed full coordinate vector.
pub fn visibility_of_cg(scenario: &Scenario, cg: &[f64]) -> Result<LocalityVerdict> {
    check_cap(scenario, DEFAULT_ENUMERATION_CAP)?;
    if cg.len() != scenario.cg_dim() {
        return Err(Error::Dimension("coordinate vector length".into()));
    }
    solve_visibility(scenario, Coordinates::Full, cg)
}

/// Same answer as `!visibility(b)?.is_local`, but the solve stops as soon as
/// either side of the threshold is certified: a feasible visibility at or
/// above it, or a Lagrangian upper bound below it.
pub fn is_nonlocal(b: &Behavior) -> Result<bool> {
    check_cap(b.scenario(), DEFAULT_ENUMERATION_CAP)?;
    decide(b.scenario(), Coordinates::Full, &b.cg_vector())
}

/// Early-stopping counterpart of `!correlation_membership(c)?.is_local`.
pub fn is_correlation_nonlocal(c: &CorrelatorTable) -> Result<bool> {
    let full = correlator_target(c)?;
    decide(c.scenario(), Coordinates::Correlators, &full)
}

fn decide(scenario: &Scenario, kind: Coordinates, target_full: &[f64]) -> Result<bool> {
    let lp = VisibilityLp::new(scenario, kind, target_full);
    let basis = lp.initial_basis(kind);
    let threshold = 1.0 - VISIBILITY_TOL;
    let opts = SimplexOptions {
        stop_at_objective: Some(threshold),
        stop_below_bound: Some(threshold),
        ..SimplexOptions::default()
    };
    let sol = simplex::solve(&lp, basis, &opts)?;
    Ok(match sol.status {
        Status::TargetReached => false,
        Status::BoundBelow => true,
        Status::Optimal => sol.value_of(lp.v_column()) < threshold,
    })
}

fn correlator_target(c: &CorrelatorTable) -> Result<Vec<f64>> {
    let s = c.scenario();
    if s.total_settings() > CORRELATION_SETTINGS_CAP {
        return Err(Error::EnumerationCap {
            needed: s.n_strategies(),
            cap: 1u128 << CORRELATION_SETTINGS_CAP,
        });
    }
    let mut full = vec![0.0; s.cg_dim()];
    full[0] = 1.0;
    for (flat, &v) in c.joint().iter().enumerate() {
        let digits: Vec<usize> = s.unflatten_settings(flat).iter().map(|x| x + 1).collect();
        full[cg_index(s, &digits)] = v;
    }
    Ok(full)
}

/// Visibility of the full-correlator table alone against the convex hull of
/// `a_1 (x) ... (x) a_n` sign tensors; marginals are ignored.
pub fn correlation_membership(c: &CorrelatorTable) -> Result<LocalityVerdict> {
    let full = correlator_target(c)?;
    solve_visibility(c.scenario(), Coordinates::Correlators, &full)
}
