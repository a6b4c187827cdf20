//! Haar-random dichotomic qubit measurements with counter-based seeding.
//!
//! Every random draw is addressed by `(master_seed, stream_index, slot)`: the
//! ChaCha key comes from the master seed, the stream index selects the ChaCha
//! stream, and the slot selects a disjoint region of that stream's keystream.
//! The measurement for `(party, setting)` always uses the same slot, so a
//! smaller scenario sees exactly the leading settings of a larger one.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::Scenario;
use crate::states::Observable;

const MIN_GAUSSIAN_NORM: f64 = 1e-6;
const GRAM_TOL: f64 = 1e-10;
/// Words reserved per slot (2^40 32-bit words).
const SLOT_SHIFT: u32 = 40;
const SETTING_SLOTS: u64 = 1 << 16;
/// ChaCha word positions wrap at 2^68, so slots must stay below 2^28.
pub const SLOT_LIMIT: u64 = 1 << (68 - SLOT_SHIFT);

/// Address of one independent random stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        Self { master_seed, stream_index }
    }

    /// Generator positioned at the start of `slot` within this stream.
    ///
    /// Panics if `slot >= SLOT_LIMIT`.
    pub fn rng(&self, slot: u64) -> ChaCha8Rng {
        assert!(slot < SLOT_LIMIT, "slot {slot} aliases a lower slot");
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng.set_word_pos(u128::from(slot) << SLOT_SHIFT);
        rng
    }
}

/// Slot used by the measurement of `(party, setting)`.
pub fn measurement_slot(party: usize, setting: usize) -> u64 {
    party as u64 * SETTING_SLOTS + setting as u64
}

/// Uniform point on the unit sphere: three standard normals, normalized.
pub fn sample_sphere<R: RngCore>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        ];
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if norm >= MIN_GAUSSIAN_NORM {
            return [v[0] / norm, v[1] / norm, v[2] / norm];
        }
    }
}

/// Bloch-uniform unit vector drawn from slot 0 of `seed`.
pub fn sample_bloch_uniform(seed: SeedSpec) -> [f64; 3] {
    sample_sphere(&mut seed.rng(0))
}

/// Per-party lists of dichotomic observables.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementSet {
    parties: Vec<Vec<Observable>>,
}

impl MeasurementSet {
    pub fn new(parties: Vec<Vec<Observable>>) -> Result<Self> {
        if parties.len() < 2 {
            return Err(Error::Scenario("measurement set needs at least 2 parties".into()));
        }
        if parties.iter().any(Vec::is_empty) {
            return Err(Error::Scenario("every party needs at least one observable".into()));
        }
        Ok(Self { parties })
    }

    /// Builds from raw Bloch vectors, normalizing each.
    pub fn from_bloch(parties: &[Vec<[f64; 3]>]) -> Result<Self> {
        let parties = parties
            .iter()
            .map(|p| p.iter().map(|&v| Observable::from_bloch(v)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(parties)
    }

    pub fn parties(&self) -> &[Vec<Observable>] {
        &self.parties
    }

    pub fn n_parties(&self) -> usize {
        self.parties.len()
    }

    pub fn observable(&self, party: usize, setting: usize) -> &Observable {
        &self.parties[party][setting]
    }

    pub fn scenario_settings(&self) -> Vec<usize> {
        self.parties.iter().map(Vec::len).collect()
    }

    pub fn scenario(&self) -> Scenario {
        Scenario::new(self.scenario_settings()).expect("validated on construction")
    }

    /// Keeps the leading settings of each party, as given by `sub`.
    pub fn restrict(&self, sub: &Scenario) -> Result<MeasurementSet> {
        if !sub.is_nested_in(&self.scenario()) {
            return Err(Error::Scenario(format!(
                "{} is not nested in {}",
                sub.label(),
                self.scenario().label()
            )));
        }
        Ok(MeasurementSet {
            parties: self
                .parties
                .iter()
                .zip(sub.settings())
                .map(|(p, &m)| p[..m].to_vec())
                .collect(),
        })
    }
}

/// One independent Haar-random observable per `(party, setting)`.
pub fn sample_measurement_set(scenario: &Scenario, seed: SeedSpec) -> MeasurementSet {
    let parties = scenario
        .settings()
        .iter()
        .enumerate()
        .map(|(party, &m)| {
            (0..m)
                .map(|x| {
                    let v = sample_sphere(&mut seed.rng(measurement_slot(party, x)));
                    Observable::from_bloch(v).expect("unit vector")
                })
                .collect()
        })
        .collect();
    MeasurementSet { parties }
}

pub type Rotation = [[f64; 3]; 3];

pub fn rotate_vector(r: &Rotation, v: [f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (i, row) in r.iter().enumerate() {
        out[i] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
    }
    out
}

pub fn compose(a: &Rotation, b: &Rotation) -> Rotation {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn transpose(r: &Rotation) -> Rotation {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = r[j][i];
        }
    }
    out
}

fn check_rotation(r: &Rotation) -> Result<()> {
    let gram = compose(&transpose(r), r);
    let mut residual: f64 = 0.0;
    for (i, row) in gram.iter().enumerate() {
        for (j, &g) in row.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            residual = residual.max((g - want).abs());
        }
    }
    if residual > GRAM_TOL {
        return Err(Error::InvalidArgument(format!(
            "matrix is not orthogonal (Gram residual {residual:e})"
        )));
    }
    let det = r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
        - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
        + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
    if det < 0.0 {
        return Err(Error::InvalidArgument("rotation has determinant -1".into()));
    }
    Ok(())
}

/// Multiplies every Bloch vector of party `i` by `rotations[i]`.
pub fn rotate_measurement_set(ms: &MeasurementSet, rotations: &[Rotation]) -> Result<MeasurementSet> {
    if rotations.len() != ms.n_parties() {
        return Err(Error::Dimension(format!(
            "{} rotations for {} parties",
            rotations.len(),
            ms.n_parties()
        )));
    }
    for r in rotations {
        check_rotation(r)?;
    }
    let parties = ms
        .parties
        .iter()
        .zip(rotations)
        .map(|(p, r)| {
            p.iter()
                .map(|o| Observable::from_bloch(rotate_vector(r, o.bloch())))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    MeasurementSet::new(parties)
}

/// Haar-random rotation (via a uniform unit quaternion) drawn from `rng`.
pub fn sample_rotation<R: RngCore>(rng: &mut R) -> Rotation {
    let q: [f64; 4] = loop {
        let q: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(rng));
        let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n >= MIN_GAUSSIAN_NORM {
            break q.map(|x| x / n);
        }
    };
    let [w, x, y, z] = q;
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ]
}
