//! Dense state-vector reference simulation for small registers.
//!
//! Qubit `i` is bit `i` of the amplitude index.

use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::stab::{Pauli, PauliString, StabilizerTableau};

pub type C64 = Complex<f64>;

/// Largest register the dense routines accept.
pub const MAX_QUBITS: usize = 20;

#[derive(Clone, Debug)]
pub struct StateVector {
    n: usize,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn zero(n: usize) -> Result<Self> {
        check_size(n, MAX_QUBITS)?;
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[0] = C64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) {
        let s = self.norm_sqr().sqrt();
        for a in &mut self.amps {
            *a /= s;
        }
    }

    /// Applies the Hermitian Pauli product `p` (Y = iXZ on each qubit).
    pub fn apply_pauli(&mut self, p: &PauliString) {
        let (xmask, zmask, ny) = masks(p);
        let phase = [
            C64::new(1.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(-1.0, 0.0),
            C64::new(0.0, -1.0),
        ][ny % 4];
        let mut out = vec![C64::new(0.0, 0.0); self.amps.len()];
        for (j, a) in self.amps.iter().enumerate() {
            let sign = if (j & zmask).count_ones() % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            out[j ^ xmask] = *a * phase * sign;
        }
        self.amps = out;
    }

    pub fn expectation(&self, p: &PauliString) -> f64 {
        let mut v = self.clone();
        v.apply_pauli(p);
        self.amps
            .iter()
            .zip(&v.amps)
            .map(|(a, b)| (a.conj() * b).re)
            .sum()
    }

    /// Applies a 2×2 unitary (row-major) to qubit `q`.
    pub fn apply_single(&mut self, q: usize, u: [[C64; 2]; 2]) {
        let bit = 1 << q;
        for j in 0..self.amps.len() {
            if j & bit == 0 {
                let (a0, a1) = (self.amps[j], self.amps[j | bit]);
                self.amps[j] = u[0][0] * a0 + u[0][1] * a1;
                self.amps[j | bit] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
    }

    /// The +1 eigenstate of every generator of `t`.
    pub fn from_tableau(t: &StabilizerTableau) -> Result<Self> {
        let n = t.n_qubits();
        check_size(n, MAX_QUBITS)?;
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut amps: Vec<C64> = (0..1usize << n)
            .map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let gens = t.generators();
        for g in &gens {
            let mut v = StateVector {
                n,
                amps: amps.clone(),
            };
            v.apply_pauli(g);
            for (a, b) in amps.iter_mut().zip(&v.amps) {
                *a = (*a + b) * 0.5;
            }
        }
        let mut s = StateVector { n, amps };
        if s.norm_sqr() < 1e-300 {
            return Err(Error::InvalidTableau("projection vanished".into()));
        }
        s.normalize();
        Ok(s)
    }

    pub fn graph_state(g: &Graph) -> Result<Self> {
        let n = g.n();
        check_size(n, MAX_QUBITS)?;
        let h = 1.0 / ((1usize << n) as f64).sqrt();
        let edges = g.edges();
        let amps = (0..1usize << n)
            .map(|j| {
                let odd = edges
                    .iter()
                    .filter(|&&(u, v)| (j >> u) & (j >> v) & 1 == 1)
                    .count()
                    % 2;
                C64::new(if odd == 1 { -h } else { h }, 0.0)
            })
            .collect();
        Ok(StateVector { n, amps })
    }
}

fn masks(p: &PauliString) -> (usize, usize, usize) {
    let (mut xm, mut zm, mut ny) = (0, 0, 0);
    for i in 0..p.n() {
        let (z, x) = p.get(i).bits();
        if x {
            xm |= 1 << i;
        }
        if z {
            zm |= 1 << i;
        }
        if z && x {
            ny += 1;
        }
    }
    (xm, zm, ny)
}

pub fn check_size(n: usize, max: usize) -> Result<()> {
    if n > max {
        return Err(Error::TooLarge(format!(
            "{n} qubits exceeds the dense limit of {max}"
        )));
    }
    Ok(())
}

/// Rows are the bra eigenvectors of `p`: row 0 for eigenvalue +1, row 1 for −1.
pub fn measurement_basis(p: Pauli) -> [[C64; 2]; 2] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64, im: f64| C64::new(re, im);
    match p {
        Pauli::Z | Pauli::I => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
        Pauli::X => [[c(r, 0.0), c(r, 0.0)], [c(r, 0.0), c(-r, 0.0)]],
        Pauli::Y => [[c(r, 0.0), c(0.0, -r)], [c(r, 0.0), c(0.0, r)]],
    }
}

/// 2×2 matrix of a single-qubit Pauli.
pub fn pauli_matrix(p: Pauli) -> [[C64; 2]; 2] {
    let o = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    match p {
        Pauli::I => [[one, o], [o, one]],
        Pauli::X => [[o, one], [one, o]],
        Pauli::Y => [[o, -i], [i, o]],
        Pauli::Z => [[one, o], [o, -one]],
    }
}
