//! Lower bounds on the localizable entanglement of a qubit pair: negativity,
//! the witness-based bound (WLB) and the measurement-based bound (MLB).

use nalgebra::{Matrix4, SymmetricEigen};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::codes::WitnessConstruction;
use crate::dense::{self, measurement_basis, pauli_matrix, StateVector, C64};
use crate::error::{Error, Result};
use crate::graph::{alc_create_link, random_simple_path_with, shortest_path, Graph, LcRecord};
use crate::noise::{stabilizer_expectation, transform_noise, NoiseModel};
use crate::stab::{
    stab_to_graph, ControlChoice, GraphConversionResult, LocalCliffordLayer, Pauli, PauliString,
    StabilizerTableau,
};

const EIG_TOL: f64 = 1e-12;
const STATE_TOL: f64 = 1e-10;

/// Largest register for [`mlb_dense`].
pub const MLB_DENSE_MAX: usize = 14;
/// Largest register for [`witness_decomposition_check`].
pub const WITNESS_DENSE_MAX: usize = 12;
/// Largest register for [`rle_exhaustive`].
pub const RLE_MAX: usize = 9;

const PAULIS: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

/// Density matrix of a qubit pair, basis index `2·bit_a + bit_b`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoQubitState {
    rho: Matrix4<C64>,
}

impl TwoQubitState {
    pub fn new(rho: Matrix4<C64>) -> Result<Self> {
        if (rho - rho.adjoint()).norm() > STATE_TOL {
            return Err(Error::InvalidState("matrix is not Hermitian".into()));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = SymmetricEigen::new(rho).eigenvalues.min();
        if min < -STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min}")));
        }
        Ok(TwoQubitState { rho })
    }

    pub fn from_pure(psi: [C64; 4]) -> Result<Self> {
        let v = nalgebra::Vector4::from(psi);
        let n = v.norm_squared();
        TwoQubitState::new(v * v.adjoint() / C64::new(n, 0.0))
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.rho
    }
}

fn partial_transpose(rho: &Matrix4<C64>) -> Matrix4<C64> {
    Matrix4::from_fn(|i, j| {
        let (ia, ib) = (i / 2, i % 2);
        let (ja, jb) = (j / 2, j % 2);
        rho[(2 * ia + jb, 2 * ja + ib)]
    })
}

/// Negativity of a possibly unnormalized pair state; scales linearly with the trace.
fn negativity_raw(rho: &Matrix4<C64>) -> f64 {
    let tr = rho.trace().re;
    if tr <= 0.0 {
        return 0.0;
    }
    let eig = SymmetricEigen::new(partial_transpose(rho)).eigenvalues;
    let neg: f64 = eig.iter().filter(|&&l| l < -EIG_TOL * tr).map(|l| -l).sum();
    2.0 * neg
}

/// Twice the summed magnitude of the negative partial-transpose eigenvalues.
pub fn negativity(s: &TwoQubitState) -> f64 {
    negativity_raw(&s.rho)
}

/// `½[ω_x + ω_z + ω_xz − 1]` with each ω an exact noisy stabilizer expectation.
pub fn wlb(w: &WitnessConstruction, m: &NoiseModel) -> Result<f64> {
    w.check()?;
    if m.n() != w.sx.n() {
        return Err(Error::InvalidWitness(format!(
            "witness on {} qubits, noise on {}",
            w.sx.n(),
            m.n()
        )));
    }
    let ox = stabilizer_expectation(&w.sx, m);
    let oz = stabilizer_expectation(&w.sz, m);
    let oxz = stabilizer_expectation(&w.product(), m);
    Ok(0.5 * (ox + oz + oxz - 1.0))
}

/// Pauli error patterns with nonzero probability, with their probabilities.
fn error_patterns(m: &NoiseModel) -> Vec<(PauliString, f64)> {
    let n = m.n();
    let mut out = vec![(PauliString::identity(n), 1.0)];
    for q in 0..n {
        let mut next = Vec::with_capacity(out.len() * 4);
        for (p, pr) in &out {
            for s in PAULIS {
                let ps = m.prob(q, s);
                if ps > 0.0 {
                    let mut e = p.clone();
                    e.set(q, s);
                    next.push((e, pr * ps));
                }
            }
        }
        out = next;
    }
    out
}

fn pattern_count(m: &NoiseModel) -> f64 {
    m.probs()
        .iter()
        .map(|p| p.iter().filter(|&&x| x > 0.0).count() as f64)
        .product()
}

/// 4×4 matrix of `p ⊗ q` in the pair basis.
fn pair_operator(p: Pauli, q: Pauli) -> Matrix4<C64> {
    let (a, b) = (pauli_matrix(p), pauli_matrix(q));
    Matrix4::from_fn(|i, j| a[i / 2][j / 2] * b[i % 2][j % 2])
}

/// Direct witness expectation against its projector decomposition.
///
/// Returns `(Tr(𝒲ρ), Σ_k p_k Tr(W^k ρ^k))` where `𝒲 = ¼(I − S^x − S^z − S^xS^z)`
/// and `k` runs over projection outcomes in the witness bases outside the pair.
pub fn witness_decomposition_check(
    w: &WitnessConstruction,
    t: &StabilizerTableau,
    m: &NoiseModel,
) -> Result<(f64, f64)> {
    w.check()?;
    let n = t.n_qubits();
    dense::check_size(n, WITNESS_DENSE_MAX)?;
    if m.n() != n || w.sx.n() != n {
        return Err(Error::DimensionMismatch(
            "witness, state and noise sizes differ".into(),
        ));
    }
    if pattern_count(m) * (1u64 << n) as f64 > (1u64 << 30) as f64 {
        return Err(Error::TooLarge(
            "too many error patterns for the dense check".into(),
        ));
    }
    let psi = StateVector::from_tableau(t)?;
    let (a, b) = (w.a, w.b);
    let fixed: Vec<(usize, Pauli)> = (0..n)
        .filter(|&i| i != a && i != b)
        .filter_map(|i| {
            let p = if w.sx.get(i) != Pauli::I {
                w.sx.get(i)
            } else {
                w.sz.get(i)
            };
            (p != Pauli::I).then_some((i, p))
        })
        .collect();
    let sx_ab = pair_operator(w.sx.get(a), w.sx.get(b));
    let sz_ab = pair_operator(w.sz.get(a), w.sz.get(b));
    let id = Matrix4::<C64>::identity();
    let half = C64::new(0.5, 0.0);
    let quarter = C64::new(0.25, 0.0);

    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for (e, pe) in error_patterns(m) {
        let mut phi = psi.clone();
        phi.apply_pauli(&e);
        let ex = phi.expectation(&w.sx);
        let ez = phi.expectation(&w.sz);
        let mut v = phi.clone();
        v.apply_pauli(&w.sz);
        v.apply_pauli(&w.sx);
        let exz: f64 = phi
            .amplitudes()
            .iter()
            .zip(v.amplitudes())
            .map(|(x, y)| (x.conj() * y).re)
            .sum();
        lhs += pe * 0.25 * (1.0 - ex - ez - exz);

        let mut rot = phi;
        for &(i, p) in &fixed {
            rot.apply_single(i, measurement_basis(p));
        }
        let mut blocks = vec![Matrix4::<C64>::zeros(); 1 << fixed.len()];
        let amps = rot.amplitudes();
        let mut by_rest: std::collections::HashMap<usize, [C64; 4]> =
            std::collections::HashMap::new();
        for (j, amp) in amps.iter().enumerate() {
            let ab = 2 * ((j >> a) & 1) + ((j >> b) & 1);
            let rest = j & !(1 << a) & !(1 << b);
            by_rest.entry(rest).or_insert([C64::new(0.0, 0.0); 4])[ab] = *amp;
        }
        for (rest, v) in by_rest {
            let k = fixed
                .iter()
                .enumerate()
                .fold(0, |acc, (x, &(i, _))| acc | (((rest >> i) & 1) << x));
            let vv = nalgebra::Vector4::from(v);
            blocks[k] += vv * vv.adjoint();
        }
        for (k, rho_k) in blocks.iter().enumerate() {
            let sign = |s: &PauliString| {
                let flips = fixed
                    .iter()
                    .enumerate()
                    .filter(|(x, &(i, _))| s.get(i) != Pauli::I && (k >> x) & 1 == 1)
                    .count();
                if flips % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            };
            let (eta_x, eta_z) = (C64::new(sign(&w.sx), 0.0), C64::new(sign(&w.sz), 0.0));
            let wk = id * half - (id + sx_ab * eta_x) * (id + sz_ab * eta_z) * quarter;
            rhs += pe * (wk * rho_k).trace().re;
        }
    }
    Ok((lhs, rhs))
}

fn check_pair(n: usize, a: usize, b: usize) -> Result<()> {
    if a >= n || b >= n {
        return Err(Error::NodeOutOfRange { node: a.max(b), n });
    }
    if a == b {
        return Err(Error::OutOfRange("pair qubits must differ".into()));
    }
    Ok(())
}

/// Applies a two-qubit uncorrelated Pauli channel to a pair state.
fn pair_channel(rho: &Matrix4<C64>, pa: [f64; 4], pb: [f64; 4]) -> Matrix4<C64> {
    let mut out = Matrix4::zeros();
    for (i, &sa) in PAULIS.iter().enumerate() {
        for (j, &sb) in PAULIS.iter().enumerate() {
            let p = pa[i] * pb[j];
            if p > 0.0 {
                let e = pair_operator(sa, sb);
                out += e * rho * e.adjoint() * C64::new(p, 0.0);
            }
        }
    }
    out
}

/// Probability that a Pauli error flips the outcome of measuring `setting`.
fn flip_probability(p: &[f64; 4], setting: Pauli) -> f64 {
    PAULIS
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.commutes_with(setting))
        .map(|(i, _)| p[i])
        .sum()
}

/// Average pair negativity after measuring every other qubit in `setting`.
///
/// Errors on measured qubits only relabel outcomes (anticommuting part) or act
/// trivially (commuting part), so the exact average follows from the pure-state
/// conditional pair states by convolving outcome flips, then applying the pair
/// noise. Entries of `setting` at `a` and `b` are ignored.
pub fn mlb_dense(
    t: &StabilizerTableau,
    a: usize,
    b: usize,
    m: &NoiseModel,
    setting: &[Pauli],
) -> Result<f64> {
    let n = t.n_qubits();
    dense::check_size(n, MLB_DENSE_MAX)?;
    check_pair(n, a, b)?;
    if setting.len() != n || m.n() != n {
        return Err(Error::DimensionMismatch(
            "setting, noise and state sizes differ".into(),
        ));
    }
    let measured: Vec<usize> = (0..n).filter(|&i| i != a && i != b).collect();
    if measured.iter().any(|&i| setting[i] == Pauli::I) {
        return Err(Error::OutOfRange(
            "every measured qubit needs a Pauli basis".into(),
        ));
    }
    let mut psi = StateVector::from_tableau(t)?;
    for &i in &measured {
        psi.apply_single(i, measurement_basis(setting[i]));
    }
    let mut blocks = vec![[C64::new(0.0, 0.0); 4]; 1 << measured.len()];
    for (j, amp) in psi.amplitudes().iter().enumerate() {
        let ab = 2 * ((j >> a) & 1) + ((j >> b) & 1);
        let s = measured
            .iter()
            .enumerate()
            .fold(0, |acc, (x, &i)| acc | (((j >> i) & 1) << x));
        blocks[s][ab] = *amp;
    }
    let mut rhos: Vec<Matrix4<C64>> = blocks
        .iter()
        .map(|v| {
            let vv = nalgebra::Vector4::from(*v);
            vv * vv.adjoint()
        })
        .collect();
    for (x, &i) in measured.iter().enumerate() {
        let f = flip_probability(&m.qubit(i), setting[i]);
        if f == 0.0 {
            continue;
        }
        let bit = 1 << x;
        for s in 0..rhos.len() {
            if s & bit == 0 {
                let (r0, r1) = (rhos[s], rhos[s | bit]);
                rhos[s] = r0 * C64::new(1.0 - f, 0.0) + r1 * C64::new(f, 0.0);
                rhos[s | bit] = r1 * C64::new(1.0 - f, 0.0) + r0 * C64::new(f, 0.0);
            }
        }
    }
    let (pa, pb) = (m.qubit(a), m.qubit(b));
    Ok(rhos
        .iter()
        .map(|r| negativity_raw(&pair_channel(r, pa, pb)))
        .sum())
}

/// Measured neighbors of the pair whose noise does not commute with a Z measurement.
pub fn relevant_neighborhood(g: &Graph, a: usize, b: usize, m: &NoiseModel) -> Result<Vec<usize>> {
    check_pair(g.n(), a, b)?;
    if !g.has_edge(a, b) {
        return Err(Error::LinkMissing(a, b));
    }
    let mut nb = g.neighborhood(a).or(g.neighborhood(b));
    nb.set(a, false);
    nb.set(b, false);
    Ok(nb.ones().filter(|&i| m.flips_z(i)).collect())
}

/// Outcome of one MLB evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct MlbResult {
    pub value: f64,
    /// Measurement basis per qubit on the original state; `I` at the pair.
    pub setting: Vec<Pauli>,
    /// Size of the relevant neighborhood.
    pub n: usize,
    pub n_lc: usize,
    pub path: Vec<usize>,
    pub controls: Vec<usize>,
    pub sample: Option<usize>,
}

/// Exact MLB of a graph state holding the link `(a, b)` with Z measurements
/// elsewhere.
///
/// Only the pair and its relevant neighborhood enter: a flip on a measured
/// neighbor `k` toggles Z corrections on `a` (if `k ∈ N_a`) and on `b` (if
/// `k ∈ N_b`), so the flips reduce to a distribution over the two parities.
pub fn mlb_neighborhood(g: &Graph, a: usize, b: usize, m: &NoiseModel) -> Result<MlbResult> {
    if m.n() != g.n() {
        return Err(Error::DimensionMismatch(
            "graph and noise sizes differ".into(),
        ));
    }
    let rel = relevant_neighborhood(g, a, b, m)?;
    let mut parity = [1.0, 0.0, 0.0, 0.0];
    for &k in &rel {
        let p = m.qubit(k);
        let f = p[1] + p[2];
        let code = 2 * g.has_edge(k, a) as usize + g.has_edge(k, b) as usize;
        let mut next = [0.0; 4];
        for (s, &ps) in parity.iter().enumerate() {
            next[s] += ps * (1.0 - f);
            next[s ^ code] += ps * f;
        }
        parity = next;
    }
    let h = C64::new(0.5, 0.0);
    let base = nalgebra::Vector4::new(h, h, h, -h);
    let mut rho = Matrix4::<C64>::zeros();
    for (s, &ps) in parity.iter().enumerate() {
        if ps == 0.0 {
            continue;
        }
        let za = if s & 2 != 0 { Pauli::Z } else { Pauli::I };
        let zb = if s & 1 != 0 { Pauli::Z } else { Pauli::I };
        let v = pair_operator(za, zb) * base;
        rho += v * v.adjoint() * C64::new(ps, 0.0);
    }
    let value = negativity_raw(&pair_channel(&rho, m.qubit(a), m.qubit(b)));
    let setting = (0..g.n())
        .map(|i| if i == a || i == b { Pauli::I } else { Pauli::Z })
        .collect();
    Ok(MlbResult {
        value,
        setting,
        n: rel.len(),
        n_lc: 0,
        path: Vec::new(),
        controls: Vec::new(),
        sample: None,
    })
}

/// Per-qubit basis on the original state equivalent to Z after `u`.
pub fn setting_through(u: &LocalCliffordLayer, a: usize, b: usize) -> Vec<Pauli> {
    (0..u.n())
        .map(|i| {
            if i == a || i == b {
                Pauli::I
            } else {
                u.get(i).inverse().apply(Pauli::Z)
            }
        })
        .collect()
}

/// MLB of a converted state whose graph holds `(a, b)`, after optional LC steps.
pub fn evaluate_graph(
    g: &Graph,
    unitary: &LocalCliffordLayer,
    a: usize,
    b: usize,
    m: &NoiseModel,
) -> Result<MlbResult> {
    let mt = transform_noise(m, unitary)?;
    let mut r = mlb_neighborhood(g, a, b, &mt)?;
    r.setting = setting_through(unitary, a, b);
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// One conversion, random paths, link created by local complementation.
    Alc,
    /// Fresh conversions forcing `(a, b)` into the graph.
    DirectLink,
}

/// Best sample plus summary statistics over all samples.
#[derive(Clone, Debug, PartialEq)]
pub struct OptimizeSummary {
    pub best: MlbResult,
    pub n_min: usize,
    pub n_lc_mean: f64,
    pub n_samples: usize,
}

fn sample_rng(seed: u64, sample: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample as u64);
    rng
}

fn summarize(results: Vec<MlbResult>) -> Result<OptimizeSummary> {
    let n_samples = results.len();
    let n_min = results.iter().map(|r| r.n).min().ok_or_else(|| {
        Error::NoValidAssignment("no sample produced a graph with the pair linked".into())
    })?;
    let n_lc_mean = results.iter().map(|r| r.n_lc as f64).sum::<f64>() / n_samples as f64;
    let mut best = results[0].clone();
    for r in &results[1..] {
        if r.value > best.value {
            best = r.clone();
        }
    }
    Ok(OptimizeSummary {
        best,
        n_min,
        n_lc_mean,
        n_samples,
    })
}

/// ALC strategy on a fixed conversion: create the link along candidate paths
/// between the pair and keep the best MLB. Sample 0 uses a shortest path, the
/// others random simple paths. Ties keep the lowest sample index.
pub fn alc_samples(
    conv: &GraphConversionResult,
    a: usize,
    b: usize,
    m: &NoiseModel,
    n_samples: usize,
    seed: u64,
) -> Result<OptimizeSummary> {
    let g = conv.graph();
    check_pair(g.n(), a, b)?;
    let results = (0..n_samples.max(1))
        .into_par_iter()
        .map(|s| {
            let (g2, rec, path) = if g.has_edge(a, b) {
                let rec = LcRecord {
                    sequence: Vec::new(),
                    unitary: LocalCliffordLayer::identity(g.n()),
                    link_operations: 0,
                };
                (g.clone(), rec, vec![a, b])
            } else {
                let p = if s == 0 {
                    shortest_path(&g, a, b)?
                } else {
                    random_simple_path_with(&g, a, b, &mut sample_rng(seed, s))?
                };
                let (g2, rec) = alc_create_link(&g, a, b, &p)?;
                (g2, rec, p.0)
            };
            let total = conv.unitary.then(&rec.unitary)?;
            let mut r = evaluate_graph(&g2, &total, a, b, m)?;
            r.n_lc = rec.sequence.len();
            r.path = path;
            r.controls = conv.controls.clone();
            r.sample = Some(s);
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    summarize(results)
}

/// Direct-link strategy: each sample asks `convert` for a conversion whose
/// graph holds `(a, b)`. Samples whose conversion fails are skipped.
pub fn direct_link_samples<F>(
    a: usize,
    b: usize,
    m: &NoiseModel,
    n_samples: usize,
    seed: u64,
    convert: F,
) -> Result<OptimizeSummary>
where
    F: Fn(u64) -> Result<GraphConversionResult> + Sync,
{
    let results: Vec<MlbResult> = (0..n_samples.max(1))
        .into_par_iter()
        .filter_map(|s| {
            let conv = convert(sample_rng(seed, s).next_u64()).ok()?;
            let g = conv.graph();
            if !g.has_edge(a, b) {
                return None;
            }
            Some(evaluate_graph(&g, &conv.unitary, a, b, m).map(|mut r| {
                r.controls = conv.controls.clone();
                r.path = vec![a, b];
                r.sample = Some(s);
                r
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    summarize(results)
}

/// Maximum MLB over `n_samples` graphs derived from `t`; deterministic in `seed`.
pub fn mlb_optimize(
    t: &StabilizerTableau,
    a: usize,
    b: usize,
    m: &NoiseModel,
    strategy: Strategy,
    n_samples: usize,
    seed: u64,
) -> Result<OptimizeSummary> {
    if !t.check_valid() {
        return Err(Error::InvalidTableau(
            "generators must be independent and commuting".into(),
        ));
    }
    check_pair(t.n_qubits(), a, b)?;
    match strategy {
        Strategy::Alc => {
            let conv = stab_to_graph(t, &ControlChoice::Greedy)?;
            alc_samples(&conv, a, b, m, n_samples, seed)
        }
        Strategy::DirectLink => direct_link_samples(a, b, m, n_samples, seed, |s| {
            stab_to_graph(
                t,
                &ControlChoice::ForcedPair {
                    control: a,
                    target: b,
                    seed: s,
                },
            )
            .or_else(|_| {
                stab_to_graph(
                    t,
                    &ControlChoice::ForcedPair {
                        control: b,
                        target: a,
                        seed: s,
                    },
                )
            })
        }),
    }
}

/// Restricted LE: the best MLB over all `3^(N−2)` Pauli settings.
pub fn rle_exhaustive(t: &StabilizerTableau, a: usize, b: usize, m: &NoiseModel) -> Result<f64> {
    let n = t.n_qubits();
    dense::check_size(n, RLE_MAX)?;
    check_pair(n, a, b)?;
    let measured: Vec<usize> = (0..n).filter(|&i| i != a && i != b).collect();
    let total = 3usize.pow(measured.len() as u32);
    let values = (0..total)
        .into_par_iter()
        .map(|code| {
            let mut setting = vec![Pauli::I; n];
            let mut c = code;
            for &i in &measured {
                setting[i] = [Pauli::X, Pauli::Y, Pauli::Z][c % 3];
                c /= 3;
            }
            mlb_dense(t, a, b, m, &setting)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(values.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{standard_channel, NoiseKind};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn bell_and_product_negativity() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bells = [
            [c(h), c(0.0), c(0.0), c(h)],
            [c(h), c(0.0), c(0.0), c(-h)],
            [c(0.0), c(h), c(h), c(0.0)],
            [c(0.0), c(h), c(-h), c(0.0)],
        ];
        for v in bells {
            let s = TwoQubitState::from_pure(v).unwrap();
            assert!((negativity(&s) - 1.0).abs() < 1e-12);
        }
        let s = TwoQubitState::from_pure([c(1.0), c(0.0), c(0.0), c(0.0)]).unwrap();
        assert_eq!(negativity(&s), 0.0);
    }

    #[test]
    fn werner_state() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = nalgebra::Vector4::new(c(h), c(0.0), c(0.0), c(h));
        let p = 0.5;
        let rho = v * v.adjoint() * c(p) + Matrix4::identity() * c((1.0 - p) / 4.0);
        let s = TwoQubitState::new(rho).unwrap();
        assert!((negativity(&s) - 0.25).abs() < 1e-12);
        assert!(TwoQubitState::new(Matrix4::identity()).is_err());
    }

    #[test]
    fn linked_pair_noiseless() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let m = NoiseModel::noiseless(4);
        let r = mlb_neighborhood(&g, 0, 1, &m).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert_eq!(r.n, 0);
        let t = crate::stab::graph_to_tableau(&g);
        let v = mlb_dense(&t, 0, 1, &m, &r.setting).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        assert!(matches!(
            mlb_neighborhood(&g, 0, 2, &m),
            Err(Error::LinkMissing(0, 2))
        ));
    }

    #[test]
    fn neighborhood_matches_dense_on_small_graph() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 3), (2, 4), (3, 4), (1, 3)]).unwrap();
        let t = crate::stab::graph_to_tableau(&g);
        for kind in NoiseKind::ALL {
            let m = standard_channel(kind, 0.1, 5).unwrap();
            let r = mlb_neighborhood(&g, 0, 1, &m).unwrap();
            let v = mlb_dense(&t, 0, 1, &m, &r.setting).unwrap();
            assert!((r.value - v).abs() < 1e-10, "{kind}: {} vs {v}", r.value);
        }
    }

    #[test]
    fn relevant_neighborhood_filters_phase_noise() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (1, 3)]).unwrap();
        let pf = standard_channel(NoiseKind::PF, 0.1, 4).unwrap();
        assert!(relevant_neighborhood(&g, 0, 1, &pf).unwrap().is_empty());
        let dp = standard_channel(NoiseKind::DP, 0.1, 4).unwrap();
        assert_eq!(relevant_neighborhood(&g, 0, 1, &dp).unwrap(), vec![2, 3]);
    }
}
