//! Dense revised simplex for `max c.x  s.t.  A x = b, x >= 0` with columns
//! supplied on demand.
//!
//! The basis inverse is kept explicitly and updated with elementary row
//! operations, then rebuilt from scratch every `refactor_every` pivots.
//! Pricing is Dantzig (largest reduced cost) and falls back to Bland's
//! smallest-index rule after a run of degenerate pivots, until the next
//! pivot that makes progress.

use crate::error::{Error, Result};

/// Source of LP columns. Column count may be far larger than what fits in
/// memory; only `n_rows`-sized vectors are ever materialized.
pub trait ColumnSource {
    fn n_rows(&self) -> usize;
    fn n_columns(&self) -> usize;
    fn rhs(&self) -> &[f64];
    fn cost(&self, j: usize) -> f64;
    /// Writes column `j` of `A` into `out` (length `n_rows`).
    fn column(&self, j: usize, out: &mut [f64]);

    /// Column maximizing the reduced cost `c_j - y.a_j`, with that value.
    fn price(&self, y: &[f64]) -> (usize, f64) {
        let mut col = vec![0.0; self.n_rows()];
        let mut best = (0, f64::NEG_INFINITY);
        for j in 0..self.n_columns() {
            self.column(j, &mut col);
            let rc = self.cost(j) - dot(y, &col);
            if rc > best.1 {
                best = (j, rc);
            }
        }
        best
    }

    /// Smallest column index with reduced cost above `tol`.
    fn price_first(&self, y: &[f64], tol: f64) -> Option<usize> {
        let mut col = vec![0.0; self.n_rows()];
        (0..self.n_columns()).find(|&j| {
            self.column(j, &mut col);
            self.cost(j) - dot(y, &col) > tol
        })
    }

    /// Upper bound on the optimum given the current objective and the
    /// largest reduced cost, when the feasible region is known to be bounded.
    fn upper_bound(&self, _objective: f64, _best_rc: f64) -> Option<f64> {
        None
    }
}

/// Why [`solve`] returned.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Optimal,
    /// Objective reached `SimplexOptions::stop_at_objective`.
    TargetReached,
    /// `ColumnSource::upper_bound` fell below `SimplexOptions::stop_below_bound`.
    BoundBelow,
}

#[derive(Clone, Debug)]
pub struct SimplexOptions {
    /// Smallest admissible pivot element.
    pub pivot_tol: f64,
    /// Reduced cost needed to enter the basis.
    pub optimality_tol: f64,
    /// Primal infeasibility tolerated by the ratio test.
    pub feasibility_tol: f64,
    pub max_iterations: usize,
    pub refactor_every: usize,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub degenerate_limit: usize,
    /// Return early once the objective is at least this.
    pub stop_at_objective: Option<f64>,
    /// Return early once the upper bound is below this.
    pub stop_below_bound: Option<f64>,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            pivot_tol: 1e-10,
            optimality_tol: 1e-10,
            feasibility_tol: 1e-9,
            max_iterations: 1_000_000,
            refactor_every: 200,
            degenerate_limit: 50,
            stop_at_objective: None,
            stop_below_bound: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SimplexSolution {
    pub status: Status,
    pub objective: f64,
    /// Best known upper bound on the optimum (the objective when optimal).
    pub upper_bound: f64,
    /// Basic column indices with their values.
    pub basis: Vec<usize>,
    pub basic_values: Vec<f64>,
    /// Simplex multipliers `y = c_B B^-1`.
    pub duals: Vec<f64>,
    pub iterations: usize,
    /// Pivots that did not move the primal point.
    pub degenerate_pivots: usize,
}

impl SimplexSolution {
    pub fn value_of(&self, column: usize) -> f64 {
        self.basis
            .iter()
            .position(|&b| b == column)
            .map_or(0.0, |i| self.basic_values[i])
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Row-major square matrix.
struct Square {
    n: usize,
    data: Vec<f64>,
}

impl Square {
    fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    fn mul_vec(&self, v: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = dot(self.row(i), v);
        }
    }

    /// `out = v^T M`.
    fn vec_mul(&self, v: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0.0 {
                continue;
            }
            for (o, &m) in out.iter_mut().zip(self.row(i)) {
                *o += vi * m;
            }
        }
    }
}

/// Gauss–Jordan inverse with partial pivoting of the matrix whose columns are `cols`.
fn invert_columns(cols: &[Vec<f64>], pivot_tol: f64) -> Result<Square> {
    let n = cols.len();
    // augmented rows [A | I], width 2n
    let w = 2 * n;
    let mut a = vec![0.0; n * w];
    for (j, c) in cols.iter().enumerate() {
        for (i, &v) in c.iter().enumerate() {
            a[i * w + j] = v;
        }
    }
    for i in 0..n {
        a[i * w + n + i] = 1.0;
    }
    let mut pivot_row = vec![0.0; w];
    for k in 0..n {
        let p = (k..n)
            .max_by(|&r, &s| a[r * w + k].abs().total_cmp(&a[s * w + k].abs()))
            .expect("nonempty");
        let piv = a[p * w + k];
        if piv.abs() < pivot_tol {
            return Err(Error::LpSingular);
        }
        if p != k {
            let (lo, hi) = a.split_at_mut(p * w);
            lo[k * w..(k + 1) * w].swap_with_slice(&mut hi[..w]);
        }
        let inv_piv = 1.0 / piv;
        for (dst, src) in pivot_row[k..].iter_mut().zip(&mut a[k * w + k..(k + 1) * w]) {
            *src *= inv_piv;
            *dst = *src;
        }
        for (r, row) in a.chunks_exact_mut(w).enumerate() {
            if r == k {
                continue;
            }
            let f = row[k];
            if f == 0.0 {
                continue;
            }
            for (v, &pv) in row[k..].iter_mut().zip(&pivot_row[k..]) {
                *v -= f * pv;
            }
        }
    }
    let mut data = vec![0.0; n * n];
    for (dst, row) in data.chunks_exact_mut(n).zip(a.chunks_exact(w)) {
        dst.copy_from_slice(&row[n..]);
    }
    Ok(Square { n, data })
}

struct State<'a, S: ColumnSource> {
    src: &'a S,
    opts: &'a SimplexOptions,
    basis: Vec<usize>,
    binv: Square,
    x: Vec<f64>,
}

impl<S: ColumnSource> State<'_, S> {
    fn refactor(&mut self) -> Result<()> {
        let m = self.src.n_rows();
        let cols: Vec<Vec<f64>> = self
            .basis
            .iter()
            .map(|&j| {
                let mut c = vec![0.0; m];
                self.src.column(j, &mut c);
                c
            })
            .collect();
        self.binv = invert_columns(&cols, self.opts.pivot_tol)?;
        self.binv.mul_vec(self.src.rhs(), &mut self.x);
        for v in self.x.iter_mut() {
            if *v < 0.0 && *v > -1e-9 {
                *v = 0.0;
            }
        }
        Ok(())
    }

    fn duals(&self, y: &mut [f64]) {
        let cb: Vec<f64> = self.basis.iter().map(|&j| self.src.cost(j)).collect();
        self.binv.vec_mul(&cb, y);
    }
}

/// Solves from a primal-feasible starting basis (`initial_basis.len() == n_rows`).
pub fn solve<S: ColumnSource>(src: &S, initial_basis: Vec<usize>, opts: &SimplexOptions) -> Result<SimplexSolution> {
    let m = src.n_rows();
    if initial_basis.len() != m {
        return Err(Error::Dimension(format!(
            "basis of size {} for {m} rows",
            initial_basis.len()
        )));
    }
    let mut st = State {
        src,
        opts,
        basis: initial_basis,
        binv: Square { n: m, data: vec![0.0; m * m] },
        x: vec![0.0; m],
    };
    st.refactor()?;
    if let Some(v) = st.x.iter().copied().find(|&v| v < -1e-9) {
        return Err(Error::InvalidArgument(format!("starting basis is infeasible ({v:e})")));
    }

    let mut y = vec![0.0; m];
    let mut col = vec![0.0; m];
    let mut d = vec![0.0; m];
    let mut degenerate_run = 0usize;
    let mut degenerate_total = 0usize;
    let mut since_refactor = 0usize;

    for iteration in 0..opts.max_iterations {
        st.duals(&mut y);
        let objective: f64 = st.basis.iter().zip(&st.x).map(|(&j, &v)| src.cost(j) * v).sum();
        let finish = |st: State<'_, S>, y: Vec<f64>, status, upper_bound| SimplexSolution {
            status,
            objective,
            upper_bound,
            basis: st.basis,
            basic_values: st.x,
            duals: y,
            iterations: iteration,
            degenerate_pivots: degenerate_total,
        };
        if opts.stop_at_objective.is_some_and(|t| objective >= t) {
            return Ok(finish(st, y, Status::TargetReached, f64::INFINITY));
        }
        let bland = degenerate_run >= opts.degenerate_limit;
        let (q, r, step) = if bland {
            let Some(q) = src.price_first(&y, opts.optimality_tol) else {
                return Ok(finish(st, y, Status::Optimal, objective));
            };
            src.column(q, &mut col);
            st.binv.mul_vec(&col, &mut d);
            let (r, step) = ratio_test(&st.x, &d, &st.basis, true, opts)?;
            (q, r, step)
        } else {
            let (q, rc) = src.price(&y);
            if let (Some(limit), Some(ub)) = (opts.stop_below_bound, src.upper_bound(objective, rc)) {
                if ub < limit {
                    return Ok(finish(st, y, Status::BoundBelow, ub));
                }
            }
            if rc <= opts.optimality_tol {
                return Ok(finish(st, y, Status::Optimal, objective));
            }
            src.column(q, &mut col);
            st.binv.mul_vec(&col, &mut d);
            let (r, step) = ratio_test(&st.x, &d, &st.basis, false, opts)?;
            (q, r, step)
        };

        for (i, xi) in st.x.iter_mut().enumerate() {
            if i != r {
                *xi -= step * d[i];
                if *xi < 0.0 {
                    *xi = 0.0;
                }
            }
        }
        st.x[r] = step;
        if step > 1e-12 {
            degenerate_run = 0;
        } else {
            degenerate_run += 1;
            degenerate_total += 1;
        }

        // Row operations on B^-1.
        let piv = d[r];
        let n = m;
        {
            let data = &mut st.binv.data;
            for j in 0..n {
                data[r * n + j] /= piv;
            }
            let pivot_row: Vec<f64> = data[r * n..(r + 1) * n].to_vec();
            for (i, &di) in d.iter().enumerate() {
                if i == r || di == 0.0 {
                    continue;
                }
                for (v, &p) in data[i * n..(i + 1) * n].iter_mut().zip(&pivot_row) {
                    *v -= di * p;
                }
            }
        }
        st.basis[r] = q;

        since_refactor += 1;
        if since_refactor >= opts.refactor_every {
            st.refactor()?;
            since_refactor = 0;
        }
    }
    Err(Error::LpStall { iterations: opts.max_iterations })
}

/// Harris two-pass ratio test: bound the step with a small feasibility
/// relaxation, then take the largest pivot among rows within the bound.
/// Under Bland the smallest basic column index wins instead.
fn ratio_test(x: &[f64], d: &[f64], basis: &[usize], bland: bool, opts: &SimplexOptions) -> Result<(usize, f64)> {
    let dmax = d.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let ptol = opts.pivot_tol.max(1e-9 * dmax);
    let mut bound = f64::INFINITY;
    for (&xi, &di) in x.iter().zip(d) {
        if di > ptol {
            bound = bound.min((xi.max(0.0) + opts.feasibility_tol) / di);
        }
    }
    if !bound.is_finite() {
        return Err(Error::InvalidArgument("linear program is unbounded".into()));
    }
    let mut leave: Option<usize> = None;
    for (i, &di) in d.iter().enumerate() {
        if di <= ptol || x[i].max(0.0) / di > bound {
            continue;
        }
        leave = match leave {
            None => Some(i),
            Some(r) => {
                let better = if bland { basis[i] < basis[r] } else { di > d[r] };
                Some(if better { i } else { r })
            }
        };
    }
    let r = leave.expect("row attaining the bound");
    Ok((r, x[r].max(0.0) / d[r]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Materialized column list for tests.
    struct Dense {
        cols: Vec<Vec<f64>>,
        cost: Vec<f64>,
        rhs: Vec<f64>,
    }

    impl ColumnSource for Dense {
        fn n_rows(&self) -> usize {
            self.rhs.len()
        }
        fn n_columns(&self) -> usize {
            self.cols.len()
        }
        fn rhs(&self) -> &[f64] {
            &self.rhs
        }
        fn cost(&self, j: usize) -> f64 {
            self.cost[j]
        }
        fn column(&self, j: usize, out: &mut [f64]) {
            out.copy_from_slice(&self.cols[j]);
        }
    }

    #[test]
    fn small_lp_with_slacks() {
        // max 3x + 2y  s.t. x + y <= 4, x + 3y <= 6, x <= 3
        let lp = Dense {
            cols: vec![
                vec![1.0, 1.0, 1.0],
                vec![1.0, 3.0, 0.0],
                vec![1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0],
            ],
            cost: vec![3.0, 2.0, 0.0, 0.0, 0.0],
            rhs: vec![4.0, 6.0, 3.0],
        };
        let sol = solve(&lp, vec![2, 3, 4], &SimplexOptions::default()).unwrap();
        assert_abs_diff_eq!(sol.objective, 11.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.value_of(0), 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.value_of(1), 1.0, epsilon = 1e-12);
        // strong duality: y.b equals the objective
        assert_abs_diff_eq!(dot(&sol.duals, &lp.rhs), 11.0, epsilon = 1e-12);
    }

    #[test]
    fn beale_cycling_example_terminates() {
        // Classic cycling instance under the textbook largest-coefficient rule.
        // max 0.75x4 - 20x5 + 0.5x6 - 6x7 with slacks x1..x3.
        let lp = Dense {
            cols: vec![
                vec![1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0],
                vec![0.25, 0.5, 0.0],
                vec![-8.0, -12.0, 0.0],
                vec![-1.0, -0.5, 1.0],
                vec![9.0, 3.0, 0.0],
            ],
            cost: vec![0.0, 0.0, 0.0, 0.75, -20.0, 0.5, -6.0],
            rhs: vec![0.0, 0.0, 1.0],
        };
        let opts = SimplexOptions { degenerate_limit: 2, ..Default::default() };
        let sol = solve(&lp, vec![0, 1, 2], &opts).unwrap();
        assert_abs_diff_eq!(sol.objective, 1.25, epsilon = 1e-12);
    }

    #[test]
    fn errors() {
        let lp = Dense { cols: vec![vec![1.0], vec![-1.0]], cost: vec![0.0, 1.0], rhs: vec![1.0] };
        assert!(matches!(
            solve(&lp, vec![0], &SimplexOptions::default()),
            Err(Error::InvalidArgument(_))
        ));
        assert!(solve(&lp, vec![0, 1], &SimplexOptions::default()).is_err());
        let singular = Dense { cols: vec![vec![0.0]], cost: vec![0.0], rhs: vec![1.0] };
        assert_eq!(solve(&singular, vec![0], &SimplexOptions::default()).unwrap_err(), Error::LpSingular);
        let stall = Dense {
            cols: vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]],
            cost: vec![0.0, 0.0, 1.0],
            rhs: vec![1.0, 1.0],
        };
        let opts = SimplexOptions { max_iterations: 0, ..Default::default() };
        assert!(matches!(solve(&stall, vec![0, 1], &opts), Err(Error::LpStall { .. })));
    }
}
