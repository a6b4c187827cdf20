//! Pure qubit states, dichotomic observables, Bell operators and their Pauli
//! expansions.
//!
//! Basis ordering: party 1 is the most significant qubit, so the amplitude of
//! `|a_1 a_2 ... a_n>` lives at index `a_1 2^(n-1) + ... + a_n`.

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;

use crate::behavior::BellInequality;
use crate::error::{Error, Result};
use crate::sampling::MeasurementSet;

pub type CMatrix = DMatrix<Complex64>;

/// Largest party count handled by the dense representation.
pub const MAX_QUBITS: usize = 10;

const NORM_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Single-qubit Pauli labels, `I` included.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> Matrix2<Complex64> {
        match self {
            Pauli::I => Matrix2::new(ONE, ZERO, ZERO, ONE),
            Pauli::X => Matrix2::new(ZERO, ONE, ONE, ZERO),
            Pauli::Y => Matrix2::new(ZERO, -I, I, ZERO),
            Pauli::Z => Matrix2::new(ONE, ZERO, ZERO, -ONE),
        }
    }

    fn index(self) -> usize {
        self as usize
    }

    fn from_index(i: usize) -> Pauli {
        Pauli::ALL[i]
    }
}

pub(crate) fn to_dense(m: &Matrix2<Complex64>) -> CMatrix {
    DMatrix::from_fn(2, 2, |r, c| m[(r, c)])
}

/// Kronecker product of a list of square matrices, first factor most significant.
pub fn kron_all<'a, It>(factors: It) -> CMatrix
where
    It: IntoIterator<Item = &'a CMatrix>,
{
    let mut out = DMatrix::from_element(1, 1, ONE);
    for f in factors {
        out = out.kronecker(f);
    }
    out
}

/// Normalized state vector of `n_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: DVector<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes that are already normalized to within `1e-12`.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n_qubits = qubit_count(amplitudes.len())?;
        let amplitudes = DVector::from_vec(amplitudes);
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidArgument(format!(
                "state norm {norm} differs from 1"
            )));
        }
        Ok(Self { n_qubits, amplitudes })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n_qubits = qubit_count(amplitudes.len())?;
        let mut amplitudes = DVector::from_vec(amplitudes);
        let norm = amplitudes.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidArgument("cannot normalize a zero vector".into()));
        }
        amplitudes.unscale_mut(norm);
        Ok(Self { n_qubits, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    /// Applies `op` (dimension `2^n`) and renormalizes.
    pub fn apply(&self, op: &CMatrix) -> Result<StateVector> {
        if op.nrows() != self.dim() || op.ncols() != self.dim() {
            return Err(Error::Dimension(format!(
                "operator {}x{} on state of dimension {}",
                op.nrows(),
                op.ncols(),
                self.dim()
            )));
        }
        StateVector::normalized((op * &self.amplitudes).iter().copied().collect())
    }

    /// Applies one 2x2 operator per party (a product operator).
    pub fn apply_local(&self, ops: &[Matrix2<Complex64>]) -> Result<StateVector> {
        if ops.len() != self.n_qubits {
            return Err(Error::Dimension(format!(
                "{} local operators for {} qubits",
                ops.len(),
                self.n_qubits
            )));
        }
        let mut amps = self.amplitudes.clone();
        for (party, op) in ops.iter().enumerate() {
            apply_single_qubit(amps.as_mut_slice(), self.n_qubits, party, op);
        }
        StateVector::normalized(amps.iter().copied().collect())
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }
}

fn qubit_count(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::Dimension(format!(
            "amplitude vector length {len} is not 2^n with n >= 1"
        )));
    }
    let n = len.trailing_zeros() as usize;
    if n > MAX_QUBITS {
        return Err(Error::Dimension(format!("{n} qubits exceeds limit {MAX_QUBITS}")));
    }
    Ok(n)
}

/// In-place `op` on qubit `party` (0 = most significant).
pub(crate) fn apply_single_qubit(
    amps: &mut [Complex64],
    n_qubits: usize,
    party: usize,
    op: &Matrix2<Complex64>,
) {
    let stride = 1usize << (n_qubits - 1 - party);
    let dim = amps.len();
    let mut base = 0;
    while base < dim {
        for i in base..base + stride {
            let a0 = amps[i];
            let a1 = amps[i + stride];
            amps[i] = op[(0, 0)] * a0 + op[(0, 1)] * a1;
            amps[i + stride] = op[(1, 0)] * a0 + op[(1, 1)] * a1;
        }
        base += 2 * stride;
    }
}

/// `cos(theta)|00> + sin(theta)|11>`.
///
/// The natural parameter range is `[0, pi/4]`; other angles are accepted and
/// give LU-equivalent (or sign-flipped) states.
pub fn make_pure_two_qubit(theta: f64) -> StateVector {
    make_ghz_family(2, theta).expect("two parties is always valid")
}

/// `cos(theta)|0...0> + sin(theta)|1...1>` on `n >= 2` qubits.
pub fn make_ghz_family(n: usize, theta: f64) -> Result<StateVector> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("GHZ family needs n >= 2, got {n}")));
    }
    if n > MAX_QUBITS {
        return Err(Error::InvalidArgument(format!("{n} qubits exceeds limit {MAX_QUBITS}")));
    }
    if !theta.is_finite() {
        return Err(Error::InvalidArgument("theta must be finite".into()));
    }
    let dim = 1usize << n;
    let mut amps = vec![ZERO; dim];
    amps[0] = Complex64::new(theta.cos(), 0.0);
    amps[dim - 1] = Complex64::new(theta.sin(), 0.0);
    Ok(StateVector { n_qubits: n, amplitudes: DVector::from_vec(amps) })
}

/// `(|0...0> - |1...1>)/sqrt(2)`.
pub fn make_ghz_minus(n: usize) -> Result<StateVector> {
    make_ghz_family(n, -std::f64::consts::FRAC_PI_4)
}

pub fn phi_plus() -> StateVector {
    make_pure_two_qubit(std::f64::consts::FRAC_PI_4)
}

pub fn phi_minus() -> StateVector {
    make_pure_two_qubit(-std::f64::consts::FRAC_PI_4)
}

/// Product state `|0...0>`.
pub fn product_zero(n: usize) -> Result<StateVector> {
    make_ghz_family(n, 0.0)
}

/// Two-outcome observable `n . sigma` with unit Bloch vector `n`.
///
/// Outcome `+1` is the projector `(1 + n.sigma)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Observable {
    bloch: [f64; 3],
}

impl Observable {
    /// Normalizes `v`; fails on zero or non-finite input.
    pub fn from_bloch(v: [f64; 3]) -> Result<Self> {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidArgument(format!("bad Bloch vector {v:?}")));
        }
        Ok(Self { bloch: [v[0] / norm, v[1] / norm, v[2] / norm] })
    }

    pub fn sigma_x() -> Self {
        Self { bloch: [1.0, 0.0, 0.0] }
    }

    pub fn sigma_y() -> Self {
        Self { bloch: [0.0, 1.0, 0.0] }
    }

    pub fn sigma_z() -> Self {
        Self { bloch: [0.0, 0.0, 1.0] }
    }

    pub fn bloch(&self) -> [f64; 3] {
        self.bloch
    }

    pub fn matrix(&self) -> Matrix2<Complex64> {
        let [x, y, z] = self.bloch;
        Matrix2::new(
            Complex64::new(z, 0.0),
            Complex64::new(x, -y),
            Complex64::new(x, y),
            Complex64::new(-z, 0.0),
        )
    }

    /// Projector onto outcome `+1` (`positive`) or `-1`.
    pub fn projector(&self, positive: bool) -> Matrix2<Complex64> {
        let s = if positive { 0.5 } else { -0.5 };
        let [x, y, z] = self.bloch;
        Matrix2::new(
            Complex64::new(0.5 + s * z, 0.0),
            Complex64::new(s * x, -s * y),
            Complex64::new(s * x, s * y),
            Complex64::new(0.5 - s * z, 0.0),
        )
    }
}

/// Hermitian operator on `n_parties` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct BellOperator {
    n_parties: usize,
    matrix: CMatrix,
}

impl BellOperator {
    /// Symmetrizes `(m + m^dagger)/2` after checking that `m` is Hermitian to `1e-10`.
    pub fn from_matrix(n_parties: usize, matrix: CMatrix) -> Result<Self> {
        let dim = 1usize << n_parties;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::Dimension(format!(
                "{}x{} matrix for {n_parties} qubits",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let adj = matrix.adjoint();
        let asym = (&matrix - &adj).iter().map(|c| c.norm()).fold(0.0, f64::max);
        if asym > HERMITIAN_TOL {
            return Err(Error::InvalidArgument(format!(
                "operator is not Hermitian (asymmetry {asym:e})"
            )));
        }
        let matrix = (matrix + adj).scale(0.5);
        Ok(Self { n_parties, matrix })
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// Bell operator `sum g_x A_x1 (x) ... (x) A_xn` plus single-body marginal terms
/// `g^(i)_x 1 (x) .. A_x .. (x) 1`.
pub fn bell_operator(inequality: &BellInequality, measurements: &MeasurementSet) -> Result<BellOperator> {
    let scenario = inequality.scenario();
    if scenario.settings() != measurements.scenario_settings().as_slice() {
        return Err(Error::Dimension(format!(
            "inequality scenario {} vs measurement settings {:?}",
            scenario.label(),
            measurements.scenario_settings()
        )));
    }
    let n = scenario.n_parties();
    if n > MAX_QUBITS {
        return Err(Error::Dimension(format!("{n} parties exceeds limit {MAX_QUBITS}")));
    }
    let dim = 1usize << n;
    let obs: Vec<Vec<CMatrix>> = measurements
        .parties()
        .iter()
        .map(|p| p.iter().map(|o| to_dense(&o.matrix())).collect())
        .collect();
    let id = to_dense(&Pauli::I.matrix());

    let mut total = DMatrix::from_element(dim, dim, ZERO);
    for (flat, &g) in inequality.joint_coeffs().iter().enumerate() {
        if g == 0.0 {
            continue;
        }
        let xs = scenario.unflatten_settings(flat);
        let term = kron_all(xs.iter().enumerate().map(|(p, &x)| &obs[p][x]));
        total += term * Complex64::new(g, 0.0);
    }
    for (party, coeffs) in inequality.marginal_coeffs().iter().enumerate() {
        for (x, &g) in coeffs.iter().enumerate() {
            if g == 0.0 {
                continue;
            }
            let term = kron_all((0..n).map(|p| if p == party { &obs[p][x] } else { &id }));
            total += term * Complex64::new(g, 0.0);
        }
    }
    BellOperator::from_matrix(n, total)
}

/// `<psi| op |psi>`; the imaginary rounding residue is dropped.
pub fn expectation(state: &StateVector, op: &BellOperator) -> Result<f64> {
    if op.matrix.nrows() != state.dim() {
        return Err(Error::Dimension(format!(
            "operator on {} qubits, state on {}",
            op.n_parties, state.n_qubits
        )));
    }
    let applied = &op.matrix * &state.amplitudes;
    Ok(state.amplitudes.dotc(&applied).re)
}

/// Real coefficients of an operator in the n-qubit Pauli basis.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliDecomposition {
    n_qubits: usize,
    /// Indexed by the base-4 word, first party most significant.
    coefficients: Vec<f64>,
}

impl PauliDecomposition {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn coefficient(&self, word: &[Pauli]) -> f64 {
        assert_eq!(word.len(), self.n_qubits, "Pauli word length");
        self.coefficients[word_index(word)]
    }

    /// Iterates `(word, coefficient)` over all `4^n` words.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<Pauli>, f64)> + '_ {
        self.coefficients
            .iter()
            .enumerate()
            .map(move |(i, &c)| (index_word(i, self.n_qubits), c))
    }

    /// Largest `|c|` over words containing at least one identity factor.
    pub fn max_identity_bearing(&self) -> f64 {
        self.iter()
            .filter(|(w, _)| w.contains(&Pauli::I))
            .map(|(_, c)| c.abs())
            .fold(0.0, f64::max)
    }

    pub fn reconstruct(&self) -> CMatrix {
        let dim = 1usize << self.n_qubits;
        let mut out = DMatrix::from_element(dim, dim, ZERO);
        for (i, &c) in self.coefficients.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let word = index_word(i, self.n_qubits);
            let (mask, phases) = word_action(&word);
            for col in 0..dim {
                let row = col ^ mask;
                out[(row, col)] += phases(col) * c;
            }
        }
        out
    }
}

fn word_index(word: &[Pauli]) -> usize {
    word.iter().fold(0, |acc, p| acc * 4 + p.index())
}

fn index_word(mut index: usize, n: usize) -> Vec<Pauli> {
    let mut word = vec![Pauli::I; n];
    for slot in word.iter_mut().rev() {
        *slot = Pauli::from_index(index % 4);
        index /= 4;
    }
    word
}

/// A Pauli word maps basis state `|c>` to `phase(c) |c ^ mask>`.
fn word_action(word: &[Pauli]) -> (usize, impl Fn(usize) -> Complex64 + '_) {
    let n = word.len();
    let mut mask = 0usize;
    for (q, p) in word.iter().enumerate() {
        if matches!(p, Pauli::X | Pauli::Y) {
            mask |= 1 << (n - 1 - q);
        }
    }
    let phase = move |col: usize| {
        let mut ph = ONE;
        for (q, p) in word.iter().enumerate() {
            let bit = (col >> (n - 1 - q)) & 1;
            match p {
                Pauli::I | Pauli::X => {}
                // Y|0> = i|1>, Y|1> = -i|0>
                Pauli::Y => ph *= if bit == 0 { I } else { -I },
                Pauli::Z => {
                    if bit == 1 {
                        ph = -ph;
                    }
                }
            }
        }
        ph
    };
    (mask, phase)
}

/// `c_T = Tr(op sigma_T) / 2^n` for every Pauli word `T`.
pub fn pauli_decompose(op: &BellOperator) -> PauliDecomposition {
    pauli_decompose_matrix(op.n_parties, &op.matrix)
}

pub fn pauli_decompose_matrix(n_qubits: usize, m: &CMatrix) -> PauliDecomposition {
    let dim = 1usize << n_qubits;
    assert_eq!(m.nrows(), dim, "matrix dimension");
    let words = 1usize << (2 * n_qubits);
    let scale = 1.0 / dim as f64;
    let coefficients = (0..words)
        .map(|i| {
            let word = index_word(i, n_qubits);
            let (mask, phase) = word_action(&word);
            // Tr(op sigma) = sum_col op[col ^ mask, ...]: sigma[row, col] = phase(col) at row = col ^ mask
            let mut tr = ZERO;
            for col in 0..dim {
                tr += m[(col, col ^ mask)] * phase(col);
            }
            tr.re * scale
        })
        .collect();
    PauliDecomposition { n_qubits, coefficients }
}

/// Rotation `R` with `V (n.sigma) V^dagger = (R n).sigma` for a 2x2 unitary `V`.
pub fn bloch_rotation(v: &Matrix2<Complex64>) -> [[f64; 3]; 3] {
    let paulis = [Pauli::X.matrix(), Pauli::Y.matrix(), Pauli::Z.matrix()];
    let mut r = [[0.0; 3]; 3];
    for (i, si) in paulis.iter().enumerate() {
        for (j, sj) in paulis.iter().enumerate() {
            r[i][j] = 0.5 * (si * v * sj * v.adjoint()).trace().re;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_8, SQRT_2};

    #[test]
    fn pure_two_qubit_examples() {
        let s = make_pure_two_qubit(FRAC_PI_4);
        assert_abs_diff_eq!(s.amplitude(0).re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitude(3).re, FRAC_1_SQRT_2, epsilon = 1e-15);
        let s = make_pure_two_qubit(0.0);
        assert_eq!(s.amplitude(0), ONE);
        assert_eq!(s.amplitude(3), ZERO);
        let s = make_pure_two_qubit(FRAC_PI_8);
        assert_abs_diff_eq!(s.amplitude(0).re, 0.923880, epsilon = 1e-6);
        assert_abs_diff_eq!(s.amplitude(3).re, 0.382683, epsilon = 1e-6);
        assert_abs_diff_eq!(s.amplitudes().norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn ghz_family_examples() {
        for theta in [0.0, 0.3, FRAC_PI_4] {
            assert_eq!(make_ghz_family(2, theta).unwrap(), make_pure_two_qubit(theta));
        }
        let g = make_ghz_family(3, FRAC_PI_4).unwrap();
        assert_eq!(g.dim(), 8);
        assert_abs_diff_eq!(g.amplitude(0).re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(g.amplitude(7).re, FRAC_1_SQRT_2, epsilon = 1e-15);
        let g = make_ghz_family(4, 0.0).unwrap();
        assert_eq!(g.amplitude(0), ONE);
        assert!(g.amplitudes().iter().skip(1).all(|a| *a == ZERO));
        assert!(make_ghz_family(1, 0.1).is_err());
    }

    #[test]
    fn state_constructor_checks_norm() {
        assert!(StateVector::new(vec![ONE, ONE]).is_err());
        assert!(StateVector::new(vec![ONE, ZERO, ZERO]).is_err());
        assert!(StateVector::normalized(vec![ONE, ONE]).is_ok());
        assert!(StateVector::normalized(vec![ZERO, ZERO]).is_err());
    }

    #[test]
    fn observable_invariants() {
        let o = Observable::from_bloch([0.3, -1.2, 0.5]).unwrap();
        let m = o.matrix();
        assert_abs_diff_eq!((m * m - Matrix2::identity()).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m.trace().norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((m - m.adjoint()).norm(), 0.0, epsilon = 1e-15);
        let diff = o.projector(true) - o.projector(false);
        assert_abs_diff_eq!((diff - m).norm(), 0.0, epsilon = 1e-15);
        assert!(Observable::from_bloch([0.0; 3]).is_err());
    }

    #[test]
    fn expectation_examples() {
        let zz = BellOperator::from_matrix(
            2,
            to_dense(&Pauli::Z.matrix()).kronecker(&to_dense(&Pauli::Z.matrix())),
        )
        .unwrap();
        let zx = BellOperator::from_matrix(
            2,
            to_dense(&Pauli::Z.matrix()).kronecker(&to_dense(&Pauli::X.matrix())),
        )
        .unwrap();
        assert_abs_diff_eq!(expectation(&phi_plus(), &zz).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(expectation(&phi_plus(), &zx).unwrap(), 0.0, epsilon = 1e-15);
        for theta in [0.0, 0.1, 0.5, FRAC_PI_4] {
            let v = expectation(&make_pure_two_qubit(theta), &zz).unwrap();
            assert_abs_diff_eq!(v, 1.0, epsilon = 1e-15);
        }
        assert!(expectation(&make_ghz_family(3, 0.2).unwrap(), &zz).is_err());
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = DMatrix::from_element(2, 2, ZERO);
        m[(0, 1)] = ONE;
        assert!(BellOperator::from_matrix(1, m).is_err());
    }

    #[test]
    fn pauli_examples() {
        let zz = BellOperator::from_matrix(
            2,
            to_dense(&Pauli::Z.matrix()).kronecker(&to_dense(&Pauli::Z.matrix())),
        )
        .unwrap();
        let d = pauli_decompose(&zz);
        for (w, c) in d.iter() {
            let want = if w == [Pauli::Z, Pauli::Z] { 1.0 } else { 0.0 };
            assert_abs_diff_eq!(c, want, epsilon = 1e-15);
        }
        let id = BellOperator::from_matrix(2, CMatrix::identity(4, 4)).unwrap();
        assert_abs_diff_eq!(pauli_decompose(&id).coefficient(&[Pauli::I, Pauli::I]), 1.0);
        // Y (x) X has an imaginary-looking matrix but real coefficient
        let yx = BellOperator::from_matrix(
            2,
            to_dense(&Pauli::Y.matrix()).kronecker(&to_dense(&Pauli::X.matrix())),
        )
        .unwrap();
        let d = pauli_decompose(&yx);
        assert_abs_diff_eq!(d.coefficient(&[Pauli::Y, Pauli::X]), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!((d.reconstruct() - yx.matrix()).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn schmidt_identity_from_phi_plus() {
        for theta in [0.0, 0.2, FRAC_PI_8, 0.7, FRAC_PI_4] {
            let (c, s) = (theta.cos(), theta.sin());
            let local = Pauli::I.matrix() * Complex64::new((c + s) / SQRT_2, 0.0)
                + Pauli::Z.matrix() * Complex64::new((c - s) / SQRT_2, 0.0);
            let op = to_dense(&local).kronecker(&to_dense(&Pauli::I.matrix()));
            let out = &op * phi_plus().amplitudes();
            let want = make_pure_two_qubit(theta);
            assert_abs_diff_eq!((out - want.amplitudes()).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn bloch_rotation_of_hadamard_swaps_x_and_z() {
        let h = (Pauli::X.matrix() + Pauli::Z.matrix()) * Complex64::new(FRAC_1_SQRT_2, 0.0);
        let r = bloch_rotation(&h);
        assert_abs_diff_eq!(r[0][2], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r[2][0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r[1][1], -1.0, epsilon = 1e-15);
    }
}
