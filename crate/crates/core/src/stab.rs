//! Stabilizer states in the binary (symplectic) picture, phase-free local
//! Clifford layers, and the conversion of a stabilizer tableau into a local
//! Clifford equivalent graph state.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::graph::Graph;

/// Single-qubit Pauli operator up to phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// Binary pair `(z, x)`.
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (false, true),
            Pauli::Y => (true, true),
            Pauli::Z => (true, false),
        }
    }

    pub fn from_bits(z: bool, x: bool) -> Pauli {
        match (z, x) {
            (false, false) => Pauli::I,
            (false, true) => Pauli::X,
            (true, true) => Pauli::Y,
            (true, false) => Pauli::Z,
        }
    }

    pub fn commutes_with(self, other: Pauli) -> bool {
        let (z1, x1) = self.bits();
        let (z2, x2) = other.bits();
        !((z1 & x2) ^ (x1 & z2))
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_symbol(c: char) -> Option<Pauli> {
        match c {
            'I' | '_' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Tensor product of single-qubit Paulis, phases dropped.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    pub z: BitVec,
    pub x: BitVec,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString {
            z: BitVec::zeros(n),
            x: BitVec::zeros(n),
        }
    }

    /// Parses strings such as `"XXIZ"`.
    pub fn parse(s: &str) -> Result<Self> {
        let ops = s
            .chars()
            .map(|c| {
                Pauli::from_symbol(c).ok_or_else(|| Error::InvalidState(format!("bad Pauli {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliString::from_paulis(&ops))
    }

    pub fn from_paulis(ops: &[Pauli]) -> Self {
        let mut p = PauliString::identity(ops.len());
        for (i, &op) in ops.iter().enumerate() {
            p.set(i, op);
        }
        p
    }

    /// X on every listed qubit.
    pub fn x_on(n: usize, support: &[usize]) -> Self {
        PauliString {
            z: BitVec::zeros(n),
            x: BitVec::from_indices(n, support.iter().copied()),
        }
    }

    /// Z on every listed qubit.
    pub fn z_on(n: usize, support: &[usize]) -> Self {
        PauliString {
            z: BitVec::from_indices(n, support.iter().copied()),
            x: BitVec::zeros(n),
        }
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn get(&self, i: usize) -> Pauli {
        Pauli::from_bits(self.z.get(i), self.x.get(i))
    }

    pub fn set(&mut self, i: usize, op: Pauli) {
        let (z, x) = op.bits();
        self.z.set(i, z);
        self.x.set(i, x);
    }

    pub fn support(&self) -> Vec<usize> {
        self.z.or(&self.x).ones().collect()
    }

    pub fn weight(&self) -> usize {
        self.z.or(&self.x).count_ones()
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        self.z.dot(&other.x) == self.x.dot(&other.z)
    }

    /// Product up to phase.
    pub fn mul(&self, other: &PauliString) -> PauliString {
        let mut out = self.clone();
        out.z.xor_assign(&other.z);
        out.x.xor_assign(&other.x);
        out
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n() {
            write!(f, "{}", self.get(i))?;
        }
        Ok(())
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Phase-free single-qubit Clifford: an invertible 2x2 GF(2) matrix acting on
/// the column `(z, x)` of a Pauli.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Clifford1 {
    // [[a, b], [c, d]]: z' = a z + b x, x' = c z + d x
    m: [[bool; 2]; 2],
}

impl Clifford1 {
    pub const IDENTITY: Clifford1 = Clifford1 {
        m: [[true, false], [false, true]],
    };
    /// Hadamard: X and Z exchanged.
    pub const H: Clifford1 = Clifford1 {
        m: [[false, true], [true, false]],
    };
    /// Quarter turn about Z: X to Y, Z fixed.
    pub const SQRT_Z: Clifford1 = Clifford1 {
        m: [[true, true], [false, true]],
    };
    /// Quarter turn about X: X fixed, Z to Y.
    pub const SQRT_X: Clifford1 = Clifford1 {
        m: [[true, false], [true, true]],
    };

    /// Returns `None` for a singular matrix.
    pub fn new(m: [[bool; 2]; 2]) -> Option<Clifford1> {
        let det = (m[0][0] & m[1][1]) ^ (m[0][1] & m[1][0]);
        det.then_some(Clifford1 { m })
    }

    pub fn matrix(&self) -> [[bool; 2]; 2] {
        self.m
    }

    pub fn apply(&self, p: Pauli) -> Pauli {
        let (z, x) = p.bits();
        Pauli::from_bits(
            (self.m[0][0] & z) ^ (self.m[0][1] & x),
            (self.m[1][0] & z) ^ (self.m[1][1] & x),
        )
    }

    /// Matrix product `self · other` (apply `other` first).
    pub fn compose(&self, other: &Clifford1) -> Clifford1 {
        let a = self.m;
        let b = other.m;
        let mut m = [[false; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = (a[i][0] & b[0][j]) ^ (a[i][1] & b[1][j]);
            }
        }
        Clifford1 { m }
    }

    pub fn inverse(&self) -> Clifford1 {
        // over GF(2) with unit determinant the adjugate is the inverse
        let [[a, b], [c, d]] = self.m;
        Clifford1 {
            m: [[d, b], [c, a]],
        }
    }

    /// All six phase-free single-qubit Cliffords.
    pub fn all() -> [Clifford1; 6] {
        let i = Clifford1::IDENTITY;
        let h = Clifford1::H;
        let s = Clifford1::SQRT_Z;
        [
            i,
            h,
            s,
            h.compose(&s),
            s.compose(&h),
            h.compose(&s).compose(&h),
        ]
    }
}

impl fmt::Debug for Clifford1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[X->{}, Z->{}]",
            self.apply(Pauli::X),
            self.apply(Pauli::Z)
        )
    }
}

/// One phase-free Clifford per qubit.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LocalCliffordLayer {
    ops: Vec<Clifford1>,
}

impl LocalCliffordLayer {
    pub fn identity(n: usize) -> Self {
        LocalCliffordLayer {
            ops: vec![Clifford1::IDENTITY; n],
        }
    }

    pub fn from_ops(ops: Vec<Clifford1>) -> Self {
        LocalCliffordLayer { ops }
    }

    /// The same Clifford on the listed qubits, identity elsewhere.
    pub fn on(n: usize, qubits: &[usize], op: Clifford1) -> Self {
        let mut layer = LocalCliffordLayer::identity(n);
        for &q in qubits {
            layer.ops[q] = op;
        }
        layer
    }

    pub fn n(&self) -> usize {
        self.ops.len()
    }

    pub fn get(&self, i: usize) -> Clifford1 {
        self.ops[i]
    }

    pub fn set(&mut self, i: usize, op: Clifford1) {
        self.ops[i] = op;
    }

    pub fn ops(&self) -> &[Clifford1] {
        &self.ops
    }

    pub fn is_identity(&self) -> bool {
        self.ops.iter().all(|&o| o == Clifford1::IDENTITY)
    }

    /// Layer equal to applying `self` and then `later`.
    pub fn then(&self, later: &LocalCliffordLayer) -> Result<LocalCliffordLayer> {
        if self.n() != later.n() {
            return Err(Error::DimensionMismatch(format!(
                "layers on {} and {} qubits",
                self.n(),
                later.n()
            )));
        }
        Ok(LocalCliffordLayer {
            ops: self
                .ops
                .iter()
                .zip(&later.ops)
                .map(|(a, b)| b.compose(a))
                .collect(),
        })
    }

    pub fn inverse(&self) -> LocalCliffordLayer {
        LocalCliffordLayer {
            ops: self.ops.iter().map(Clifford1::inverse).collect(),
        }
    }

    pub fn apply_pauli(&self, p: &PauliString) -> Result<PauliString> {
        if p.n() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "Pauli on {} qubits, layer on {}",
                p.n(),
                self.n()
            )));
        }
        let mut out = p.clone();
        for (i, op) in self.ops.iter().enumerate() {
            out.set(i, op.apply(p.get(i)));
        }
        Ok(out)
    }
}

/// Stabilizer generators stored column-wise in a 2N x N binary matrix, Z block on
/// top and X block below.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StabilizerTableau {
    n: usize,
    a: BitMatrix,
}

impl StabilizerTableau {
    /// Wraps a 2N x N matrix without checking validity.
    pub fn from_matrix(a: BitMatrix) -> Result<Self> {
        let n = a.cols();
        if a.rows() != 2 * n {
            return Err(Error::DimensionMismatch(format!(
                "tableau must be 2N x N, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        Ok(StabilizerTableau { n, a })
    }

    pub fn from_blocks(z: &BitMatrix, x: &BitMatrix) -> Result<Self> {
        StabilizerTableau::from_matrix(z.vstack(x)?)
    }

    /// One column per generator; the generator count must equal the qubit count.
    pub fn from_paulis(gens: &[PauliString]) -> Result<Self> {
        let n = gens.len();
        if let Some(g) = gens.iter().find(|g| g.n() != n) {
            return Err(Error::DimensionMismatch(format!(
                "{n} generators but a generator on {} qubits",
                g.n()
            )));
        }
        let mut a = BitMatrix::zeros(2 * n, n);
        for (j, g) in gens.iter().enumerate() {
            for i in g.z.ones() {
                a.set(i, j, true);
            }
            for i in g.x.ones() {
                a.set(n + i, j, true);
            }
        }
        Ok(StabilizerTableau { n, a })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.a
    }

    pub fn z_block(&self) -> BitMatrix {
        self.a.select_rows(&(0..self.n).collect::<Vec<_>>())
    }

    pub fn x_block(&self) -> BitMatrix {
        self.a
            .select_rows(&(self.n..2 * self.n).collect::<Vec<_>>())
    }

    pub fn generator(&self, j: usize) -> PauliString {
        let col = self.a.column(j);
        PauliString {
            z: BitVec::from_indices(self.n, (0..self.n).filter(|&i| col.get(i))),
            x: BitVec::from_indices(self.n, (0..self.n).filter(|&i| col.get(self.n + i))),
        }
    }

    pub fn generators(&self) -> Vec<PauliString> {
        (0..self.n).map(|j| self.generator(j)).collect()
    }

    /// Independent generators that pairwise commute.
    pub fn check_valid(&self) -> bool {
        if self.a.rank() != self.n {
            return false;
        }
        let z = self.z_block();
        let x = self.x_block();
        let zt = z.transpose();
        let xt = x.transpose();
        // Aᵀ D A = Zᵀ X + Xᵀ Z
        let s = zt
            .multiply(&x)
            .and_then(|p| p.add(&xt.multiply(&z).unwrap()));
        matches!(s, Ok(m) if m.is_zero())
    }

    pub fn apply_local_clifford(&self, u: &LocalCliffordLayer) -> Result<StabilizerTableau> {
        if u.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "layer on {} qubits, tableau on {}",
                u.n(),
                self.n
            )));
        }
        let n = self.n;
        let mut a = self.a.clone();
        for (i, op) in u.ops().iter().enumerate() {
            let [[p, q], [r, s]] = op.matrix();
            let z = self.a.row(i);
            let x = self.a.row(n + i);
            let mut nz = BitVec::zeros(n);
            let mut nx = BitVec::zeros(n);
            if p {
                nz.xor_assign(z);
            }
            if q {
                nz.xor_assign(x);
            }
            if r {
                nx.xor_assign(z);
            }
            if s {
                nx.xor_assign(x);
            }
            *a.row_mut(i) = nz;
            *a.row_mut(n + i) = nx;
        }
        Ok(StabilizerTableau { n, a })
    }

    /// Right multiplication by an N x N matrix (recombination of generators).
    pub fn recombine(&self, r: &BitMatrix) -> Result<StabilizerTableau> {
        StabilizerTableau::from_matrix(self.a.multiply(r)?)
    }

    pub fn to_json(&self) -> TableauJson {
        TableauJson {
            n_qubits: self.n,
            stabilizers: self
                .generators()
                .iter()
                .map(|g| StabilizerJson {
                    z: g.z.to_bits(),
                    x: g.x.to_bits(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &TableauJson) -> Result<StabilizerTableau> {
        let n = j.n_qubits;
        if j.stabilizers.len() != n {
            return Err(Error::InvalidTableau(format!(
                "{} stabilizers for {n} qubits",
                j.stabilizers.len()
            )));
        }
        let mut gens = Vec::with_capacity(n);
        for s in &j.stabilizers {
            if s.z.len() != n || s.x.len() != n || s.z.iter().chain(&s.x).any(|&b| b > 1) {
                return Err(Error::InvalidTableau(
                    "each stabilizer needs N binary z and x entries".into(),
                ));
            }
            gens.push(PauliString {
                z: BitVec::from_bits(&s.z),
                x: BitVec::from_bits(&s.x),
            });
        }
        StabilizerTableau::from_paulis(&gens)
    }
}

/// Serialized tableau, one entry per stabilizer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableauJson {
    pub n_qubits: usize,
    pub stabilizers: Vec<StabilizerJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerJson {
    pub z: Vec<u8>,
    pub x: Vec<u8>,
}

/// Tableau `[Γ; I]` of the graph state of `g`.
pub fn graph_to_tableau(g: &Graph) -> StabilizerTableau {
    let n = g.n();
    StabilizerTableau {
        n,
        a: g.adjacency().vstack(&BitMatrix::identity(n)).unwrap(),
    }
}

/// True when both tableaus generate the same group (equal column spans).
pub fn tableau_equivalent(t1: &StabilizerTableau, t2: &StabilizerTableau) -> bool {
    if t1.n != t2.n {
        return false;
    }
    let r1 = t1.a.rank();
    r1 == t2.a.rank() && t1.a.hstack(&t2.a).unwrap().rank() == r1
}

/// How the control qubits of the conversion are picked.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum ControlChoice {
    /// Smallest-index independent rows of the reduced X block.
    #[default]
    Greedy,
    /// Independent rows scanned in a seed-determined random order.
    Seeded(u64),
    /// Explicit control set.
    Given(Vec<usize>),
    /// `control` must be a control and `target` a target linked to it.
    ForcedPair {
        control: usize,
        target: usize,
        seed: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphConversionResult {
    pub gamma: BitMatrix,
    pub controls: Vec<usize>,
    pub targets: Vec<usize>,
    /// Local Clifford taking the input state to the graph state.
    pub unitary: LocalCliffordLayer,
    /// Generator recombination applied after `unitary`.
    pub recombination: BitMatrix,
}

impl GraphConversionResult {
    pub fn graph(&self) -> Graph {
        Graph::from_adjacency(self.gamma.clone()).expect("conversion yields a simple graph")
    }
}

/// Column-reduced form of a tableau: the first `n_x` columns carry X parts of
/// full rank, the remaining ones are pure Z.
struct Reduced {
    a: BitMatrix,
    r: BitMatrix,
    n_x: usize,
}

fn reduce(t: &StabilizerTableau) -> Reduced {
    let (_, r) = t.x_block().column_reduce();
    let a = t.a.multiply(&r).unwrap();
    let n_x = t.x_block().rank();
    Reduced { a, r, n_x }
}

fn x_left(red: &Reduced, n: usize) -> BitMatrix {
    red.a.submatrix(
        &(n..2 * n).collect::<Vec<_>>(),
        &(0..red.n_x).collect::<Vec<_>>(),
    )
}

/// Converts a valid stabilizer tableau into a local Clifford equivalent graph state.
///
/// With `x_l` the full-rank X part of the column-reduced tableau, the controls
/// index an invertible square block of `x_l`. Hadamards on the targets followed by
/// recombination produce `[Γ; I]` up to diagonal entries of Γ on controls, which
/// are removed by quarter turns about Z.
pub fn stab_to_graph(
    t: &StabilizerTableau,
    choice: &ControlChoice,
) -> Result<GraphConversionResult> {
    if !t.check_valid() {
        return Err(Error::InvalidTableau(
            "generators must be independent and commuting".into(),
        ));
    }
    let n = t.n;
    let red = reduce(t);
    let xl = x_left(&red, n);
    let controls = match choice {
        ControlChoice::Greedy => xl.independent_rows(red.n_x)?,
        ControlChoice::Seeded(seed) => {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(*seed));
            controls_in_order(&xl, &order, red.n_x).ok_or_else(|| {
                Error::NoValidAssignment("seeded scan fell short of full rank".into())
            })?
        }
        ControlChoice::Given(c) => {
            let mut c = c.clone();
            c.sort_unstable();
            c.dedup();
            if c.len() != red.n_x
                || c.iter().any(|&q| q >= n)
                || xl.select_rows(&c).rank() != red.n_x
            {
                return Err(Error::NoValidAssignment(format!(
                    "controls {c:?} do not index an invertible block of rank {}",
                    red.n_x
                )));
            }
            c
        }
        ControlChoice::ForcedPair {
            control,
            target,
            seed,
        } => forced_controls(&xl, red.n_x, *control, *target, *seed)?,
    };
    finish(t, &red, controls)
}

/// Greedy independent rows visited in `order`, returned sorted.
fn controls_in_order(xl: &BitMatrix, order: &[usize], k: usize) -> Option<Vec<usize>> {
    let mut basis = crate::gf2::XorBasis::new(xl.cols());
    let mut picked = Vec::with_capacity(k);
    for &q in order {
        if picked.len() == k {
            break;
        }
        if basis.insert(xl.row(q)) {
            picked.push(q);
        }
    }
    (picked.len() == k).then(|| {
        picked.sort_unstable();
        picked
    })
}

const FORCED_ATTEMPTS: u64 = 256;

fn forced_controls(xl: &BitMatrix, k: usize, a: usize, b: usize, seed: u64) -> Result<Vec<usize>> {
    let n = xl.rows();
    if a >= n || b >= n || a == b {
        return Err(Error::NoValidAssignment(format!(
            "pair ({a}, {b}) is not valid"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rest: Vec<usize> = (0..n).filter(|&q| q != a && q != b).collect();
    for attempt in 0..FORCED_ATTEMPTS {
        if attempt > 0 {
            rest.shuffle(&mut rng);
        }
        let mut order = vec![a];
        order.extend_from_slice(&rest);
        let Some(controls) = controls_in_order(xl, &order, k) else {
            continue;
        };
        if !controls.contains(&a) {
            continue;
        }
        // link (b, a) is the entry of X_{l,t} X_{l,c}^{-1} at (b, a)
        let inv = xl.select_rows(&controls).invert()?;
        let col = controls.iter().position(|&c| c == a).unwrap();
        if xl.row(b).dot(&inv.column(col)) {
            return Ok(controls);
        }
    }
    Err(Error::NoValidAssignment(format!(
        "no control set makes {a} a control linked to target {b}"
    )))
}

fn finish(
    t: &StabilizerTableau,
    red: &Reduced,
    controls: Vec<usize>,
) -> Result<GraphConversionResult> {
    let n = t.n;
    let is_control = BitVec::from_indices(n, controls.iter().copied());
    let targets: Vec<usize> = (0..n).filter(|&q| !is_control.get(q)).collect();
    let hadamards = LocalCliffordLayer::on(n, &targets, Clifford1::H);
    let reduced = StabilizerTableau {
        n,
        a: red.a.clone(),
    };
    let flipped = reduced.apply_local_clifford(&hadamards)?;
    let x_inv = flipped
        .x_block()
        .invert()
        .map_err(|_| Error::NoValidAssignment("control block of the X part is singular".into()))?;
    let normal = flipped.recombine(&x_inv)?;
    let mut gamma = normal.z_block();
    let mut unitary = hadamards;
    for q in 0..n {
        if gamma.get(q, q) {
            debug_assert!(is_control.get(q), "diagonal entries occur on controls only");
            unitary.set(q, Clifford1::SQRT_Z.compose(&unitary.get(q)));
            gamma.set(q, q, false);
        }
    }
    if !gamma.is_symmetric() {
        return Err(Error::InvalidTableau("generators do not commute".into()));
    }
    Ok(GraphConversionResult {
        gamma,
        controls,
        targets,
        unitary,
        recombination: red.r.multiply(&x_inv)?,
    })
}

/// Blocks `B` and `C` of the closed-form adjacency matrix for a given control set,
/// with rows and columns in the order of `controls` and of the remaining targets.
///
/// `B = X_{l,t} X_{l,c}^{-1}` and `C = [Z_{l,c} + (X_{l,c}ᵀ)^{-1} X_{l,t}ᵀ Z_{l,t}] X_{l,c}^{-1}`.
pub fn closed_form_blocks(
    t: &StabilizerTableau,
    controls: &[usize],
) -> Result<(BitMatrix, BitMatrix)> {
    let n = t.n;
    let red = reduce(t);
    let cols: Vec<usize> = (0..red.n_x).collect();
    let is_control = BitVec::from_indices(n, controls.iter().copied());
    let targets: Vec<usize> = (0..n).filter(|&q| !is_control.get(q)).collect();
    let xrows = |qs: &[usize]| qs.iter().map(|&q| n + q).collect::<Vec<_>>();
    let xlc = red.a.submatrix(&xrows(controls), &cols);
    let xlt = red.a.submatrix(&xrows(&targets), &cols);
    let zlc = red.a.submatrix(controls, &cols);
    let zlt = red.a.submatrix(&targets, &cols);
    let xlc_inv = xlc.invert()?;
    let b = xlt.multiply(&xlc_inv)?;
    let inner = xlc
        .transpose()
        .invert()?
        .multiply(&xlt.transpose())?
        .multiply(&zlt)?;
    let c = zlc.add(&inner)?.multiply(&xlc_inv)?;
    Ok((b, c))
}
