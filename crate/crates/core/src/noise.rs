//! Uncorrelated single-qubit Pauli noise.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stab::{LocalCliffordLayer, Pauli, PauliString};

const NORM_TOL: f64 = 1e-12;

/// The four standard single-parameter channels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NoiseKind {
    /// Bit flip.
    BF,
    /// Phase flip.
    PF,
    /// Bit-phase flip.
    BPF,
    /// Depolarizing.
    DP,
}

impl NoiseKind {
    pub const ALL: [NoiseKind; 4] = [NoiseKind::BF, NoiseKind::PF, NoiseKind::BPF, NoiseKind::DP];

    /// Probability vector `(q0, qx, qy, qz)` at strength `q`.
    pub fn probabilities(self, q: f64) -> [f64; 4] {
        match self {
            NoiseKind::BF => [1.0 - q / 2.0, q / 2.0, 0.0, 0.0],
            NoiseKind::PF => [1.0 - q / 2.0, 0.0, 0.0, q / 2.0],
            NoiseKind::BPF => [1.0 - q / 2.0, 0.0, q / 2.0, 0.0],
            NoiseKind::DP => [1.0 - 0.75 * q, q / 4.0, q / 4.0, q / 4.0],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NoiseKind::BF => "BF",
            NoiseKind::PF => "PF",
            NoiseKind::BPF => "BPF",
            NoiseKind::DP => "DP",
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "BF" => Ok(NoiseKind::BF),
            "PF" => Ok(NoiseKind::PF),
            "BPF" => Ok(NoiseKind::BPF),
            "DP" => Ok(NoiseKind::DP),
            other => Err(Error::OutOfRange(format!("unknown noise kind `{other}`"))),
        }
    }
}

fn pauli_index(p: Pauli) -> usize {
    match p {
        Pauli::I => 0,
        Pauli::X => 1,
        Pauli::Y => 2,
        Pauli::Z => 3,
    }
}

const PAULIS: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

/// Per-qubit Pauli error probabilities, indexed `(I, X, Y, Z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseModel {
    probs: Vec<[f64; 4]>,
}

impl NoiseModel {
    pub fn new(probs: Vec<[f64; 4]>) -> Result<Self> {
        for (i, p) in probs.iter().enumerate() {
            if p.iter().any(|&v| v.is_nan() || v < 0.0) {
                return Err(Error::OutOfRange(format!(
                    "negative probability on qubit {i}"
                )));
            }
            let s: f64 = p.iter().sum();
            if (s - 1.0).abs() > NORM_TOL {
                return Err(Error::OutOfRange(format!(
                    "probabilities on qubit {i} sum to {s}"
                )));
            }
        }
        Ok(NoiseModel { probs })
    }

    pub fn noiseless(n: usize) -> Self {
        NoiseModel {
            probs: vec![[1.0, 0.0, 0.0, 0.0]; n],
        }
    }

    pub fn n(&self) -> usize {
        self.probs.len()
    }

    pub fn qubit(&self, i: usize) -> [f64; 4] {
        self.probs[i]
    }

    pub fn probs(&self) -> &[[f64; 4]] {
        &self.probs
    }

    pub fn prob(&self, i: usize, p: Pauli) -> f64 {
        self.probs[i][pauli_index(p)]
    }

    /// True when qubit `i` carries an X or Y component, the part that
    /// does not commute with a Z measurement.
    pub fn flips_z(&self, i: usize) -> bool {
        self.probs[i][1] + self.probs[i][2] > 0.0
    }

    /// Restriction to the given qubits, in order.
    pub fn select(&self, qubits: &[usize]) -> NoiseModel {
        NoiseModel {
            probs: qubits.iter().map(|&i| self.probs[i]).collect(),
        }
    }

    pub fn to_json(&self) -> NoiseJson {
        NoiseJson::PerQubit {
            per_qubit: self.probs.clone(),
        }
    }

    /// Builds a model for `n` qubits; a per-qubit spec must list exactly `n`.
    pub fn from_json(j: &NoiseJson, n: usize) -> Result<NoiseModel> {
        match j {
            NoiseJson::Standard { kind, q } => {
                let kind: NoiseKind = kind.parse()?;
                standard_channel(kind, *q, n)
            }
            NoiseJson::PerQubit { per_qubit } => {
                if per_qubit.len() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "noise lists {} qubits, state has {n}",
                        per_qubit.len()
                    )));
                }
                NoiseModel::new(per_qubit.clone())
            }
        }
    }
}

/// Noise file contents: a named channel or explicit per-qubit vectors.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NoiseJson {
    PerQubit { per_qubit: Vec<[f64; 4]> },
    Standard { kind: String, q: f64 },
}

pub fn standard_channel(kind: NoiseKind, q: f64, n: usize) -> Result<NoiseModel> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::OutOfRange(format!(
            "noise strength {q} outside [0,1]"
        )));
    }
    Ok(NoiseModel {
        probs: vec![kind.probabilities(q); n],
    })
}

/// Noise seen after applying `u` to the noisy state: an error `σ` before
/// the layer becomes `Mσ` after it.
pub fn transform_noise(m: &NoiseModel, u: &LocalCliffordLayer) -> Result<NoiseModel> {
    if m.n() != u.n() {
        return Err(Error::DimensionMismatch(format!(
            "noise on {} qubits, layer on {}",
            m.n(),
            u.n()
        )));
    }
    let probs = m
        .probs
        .iter()
        .zip(u.ops())
        .map(|(p, c)| {
            let mut out = [0.0; 4];
            for s in PAULIS {
                out[pauli_index(c.apply(s))] = p[pauli_index(s)];
            }
            out
        })
        .collect();
    Ok(NoiseModel { probs })
}

/// Per-qubit factor: `Σ_α q_α (±1)` with sign set by commutation with `s`.
pub fn qubit_factor(p: &[f64; 4], s: Pauli) -> f64 {
    PAULIS
        .iter()
        .map(|&e| {
            if e.commutes_with(s) {
                p[pauli_index(e)]
            } else {
                -p[pauli_index(e)]
            }
        })
        .sum()
}

/// Expectation of `s` on a noisy +1 eigenstate of `s`.
pub fn stabilizer_expectation(s: &PauliString, m: &NoiseModel) -> f64 {
    s.support()
        .into_iter()
        .map(|i| qubit_factor(&m.probs[i], s.get(i)))
        .product()
}
