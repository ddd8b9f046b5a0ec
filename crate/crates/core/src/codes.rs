//! Color-code lattices: the square-hexagonal family with two logical qubits
//! and the 7-qubit triangular code, plus control assignment and witness layout.
//!
//! The square-hexagonal lattice sits on a brick-wall embedding of the honeycomb.
//! Vertex `(r, c)` is at `x = c·√3/2`, `y = −1.5r ∓ 0.25` (minus for even
//! `r + c`), and brick `(r, c)` with `r + c` even is the hexagon spanning rows
//! `r..=r+1` and columns `c..=c+2`. A patch of side `w = 3D/2 − 2` is cut along
//! armchair lines (truncated hexagons become squares), then one extra corner
//! square with two new qubits completes the qubit count.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec, XorBasis};
use crate::graph::Graph;
use crate::stab::{
    stab_to_graph, Clifford1, ControlChoice, GraphConversionResult, LocalCliffordLayer, Pauli,
    PauliString, StabilizerTableau,
};

const SQRT3: f64 = 1.732_050_807_568_877_2;
const EPS: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Color {
    R,
    G,
    B,
}

impl Color {
    fn from_index(i: i64) -> Color {
        match i.rem_euclid(3) {
            0 => Color::R,
            1 => Color::G,
            _ => Color::B,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Color::R => "R",
            Color::G => "G",
            Color::B => "B",
        };
        f.write_str(s)
    }
}

/// A face of the lattice; `qubits` lists the boundary cycle in order.
#[derive(Clone, Debug, PartialEq)]
pub struct Plaquette {
    pub qubits: Vec<usize>,
    pub color: Color,
}

impl Plaquette {
    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }

    pub fn contains(&self, q: usize) -> bool {
        self.qubits.contains(&q)
    }

    /// Edges of the face cycle.
    pub fn links(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let k = self.qubits.len();
        (0..k).map(move |i| {
            let (u, v) = (self.qubits[i], self.qubits[(i + 1) % k]);
            (u.min(v), u.max(v))
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeKind {
    SquareHexagonal,
    SevenQubit,
}

#[derive(Clone, Debug)]
pub struct ColorCodeLattice {
    pub kind: LatticeKind,
    pub distance: usize,
    pub coords: Vec<[f64; 2]>,
    pub plaquettes: Vec<Plaquette>,
    pub logical_x: Vec<Vec<usize>>,
    pub logical_z: Vec<Vec<usize>>,
    /// Qubits of truncated (boundary) faces and qubits on fewer than three faces.
    pub boundary: Vec<usize>,
    links: Graph,
    faces_of: Vec<Vec<usize>>,
}

/// `3D²/2 − 2(D − 1)`.
pub fn expected_qubits(d: usize) -> usize {
    3 * d * d / 2 + 2 - 2 * d
}

impl ColorCodeLattice {
    fn assemble(
        kind: LatticeKind,
        distance: usize,
        coords: Vec<[f64; 2]>,
        plaquettes: Vec<Plaquette>,
    ) -> Result<Self> {
        let n = coords.len();
        let mut edges = BTreeSet::new();
        let mut faces_of = vec![Vec::new(); n];
        for (pi, p) in plaquettes.iter().enumerate() {
            for &q in &p.qubits {
                if q >= n {
                    return Err(Error::InconsistentLattice(format!(
                        "qubit {q} out of range"
                    )));
                }
                faces_of[q].push(pi);
            }
            edges.extend(p.links());
        }
        let links = Graph::from_edges(n, &edges.into_iter().collect::<Vec<_>>())?;
        let mut lat = ColorCodeLattice {
            kind,
            distance,
            coords,
            plaquettes,
            logical_x: Vec::new(),
            logical_z: Vec::new(),
            boundary: Vec::new(),
            links,
            faces_of,
        };
        lat.validate()?;
        lat.boundary = (0..n)
            .filter(|&q| {
                lat.faces_of[q].len() < 3
                    || lat.faces_of[q].iter().any(|&p| lat.plaquettes[p].len() < 6)
            })
            .collect();
        let (lx, lz) = lat.compute_logicals()?;
        lat.logical_x = lx;
        lat.logical_z = lz;
        Ok(lat)
    }

    fn validate(&self) -> Result<()> {
        for (i, p) in self.plaquettes.iter().enumerate() {
            if p.len() < 4 || p.len() % 2 == 1 {
                return Err(Error::InconsistentLattice(format!(
                    "plaquette {i} has {} qubits",
                    p.len()
                )));
            }
        }
        for q in 0..self.n_qubits() {
            let fs = &self.faces_of[q];
            for (x, &i) in fs.iter().enumerate() {
                for &j in &fs[x + 1..] {
                    let shared = self.plaquettes[i]
                        .qubits
                        .iter()
                        .filter(|v| self.plaquettes[j].contains(**v))
                        .count();
                    if shared % 2 == 1 {
                        return Err(Error::InconsistentLattice(format!(
                            "plaquettes {i} and {j} share {shared} qubits"
                        )));
                    }
                    if self.plaquettes[i].color == self.plaquettes[j].color {
                        return Err(Error::InconsistentLattice(format!(
                            "adjacent plaquettes {i} and {j} share a color"
                        )));
                    }
                }
            }
        }
        if self.incidence().rank() != self.n_plaquettes() {
            return Err(Error::InconsistentLattice(
                "plaquettes are dependent".into(),
            ));
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.coords.len()
    }

    pub fn n_plaquettes(&self) -> usize {
        self.plaquettes.len()
    }

    pub fn n_logical(&self) -> usize {
        self.n_qubits() - 2 * self.n_plaquettes()
    }

    /// Plaquette-by-qubit incidence matrix.
    pub fn incidence(&self) -> BitMatrix {
        let n = self.n_qubits();
        BitMatrix::from_bitvecs(
            n,
            self.plaquettes
                .iter()
                .map(|p| BitVec::from_indices(n, p.qubits.iter().copied()))
                .collect(),
        )
    }

    /// Graph of lattice links (face edges).
    pub fn link_graph(&self) -> &Graph {
        &self.links
    }

    pub fn faces_of(&self, q: usize) -> &[usize] {
        &self.faces_of[q]
    }

    /// Shortest path length over lattice links.
    pub fn lattice_distance(&self, a: usize, b: usize) -> Option<usize> {
        self.distances_from(a)[b]
    }

    fn distances_from(&self, a: usize) -> Vec<Option<usize>> {
        let n = self.n_qubits();
        let mut dist = vec![None; n];
        dist[a] = Some(0);
        let mut queue = VecDeque::from([a]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for v in self.links.neighbors(u) {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    fn compute_logicals(&self) -> Result<(Vec<Vec<usize>>, Vec<Vec<usize>>)> {
        let n = self.n_qubits();
        let k = self.n_logical();
        let h = self.incidence();
        let mut span = XorBasis::new(n);
        for p in 0..h.rows() {
            span.insert(h.row(p));
        }
        let mut reps: Vec<BitVec> = Vec::new();
        for v in kernel_basis(&h) {
            if reps.len() == k {
                break;
            }
            if span.insert(&v) {
                reps.push(self.shorten(v));
            }
        }
        if reps.len() != k {
            return Err(Error::InconsistentLattice(
                "logical operators not found".into(),
            ));
        }
        // Z partners: dual basis of the representatives under the dot product.
        let gram = BitMatrix::from_bitvecs(
            k,
            reps.iter()
                .map(|x| BitVec::from_indices(k, (0..k).filter(|&j| x.dot(&reps[j]))))
                .collect(),
        );
        let ginv = gram
            .invert()
            .map_err(|_| Error::InconsistentLattice("degenerate logical pairing".into()))?;
        let zs: Vec<BitVec> = (0..k)
            .map(|j| {
                let mut z = BitVec::zeros(n);
                for i in 0..k {
                    if ginv.get(i, j) {
                        z.xor_assign(&reps[i]);
                    }
                }
                self.shorten(z)
            })
            .collect();
        let to_vec = |v: &BitVec| v.ones().collect::<Vec<_>>();
        Ok((
            reps.iter().map(to_vec).collect(),
            zs.iter().map(to_vec).collect(),
        ))
    }

    /// Greedy weight reduction by multiplying with plaquettes.
    fn shorten(&self, mut v: BitVec) -> BitVec {
        let n = self.n_qubits();
        let plaqs: Vec<BitVec> = self
            .plaquettes
            .iter()
            .map(|p| BitVec::from_indices(n, p.qubits.iter().copied()))
            .collect();
        loop {
            let w = v.count_ones();
            let mut improved = false;
            for p in &plaqs {
                let mut u = v.clone();
                u.xor_assign(p);
                if u.count_ones() < w {
                    v = u;
                    improved = true;
                    break;
                }
            }
            if !improved {
                return v;
            }
        }
    }

    pub fn to_json(&self) -> LatticeJson {
        LatticeJson {
            distance: self.distance,
            qubits: self
                .coords
                .iter()
                .enumerate()
                .map(|(i, xy)| QubitJson { id: i + 1, xy: *xy })
                .collect(),
            plaquettes: self
                .plaquettes
                .iter()
                .map(|p| PlaquetteJson {
                    qubits: p.qubits.iter().map(|q| q + 1).collect(),
                    color: p.color,
                })
                .collect(),
            logical_x: one_based(&self.logical_x),
            logical_z: one_based(&self.logical_z),
        }
    }

    /// Rebuilds a lattice from JSON; logical strings are recomputed and checked
    /// against the stored ones only for count.
    pub fn from_json(j: &LatticeJson) -> Result<Self> {
        let n = j.qubits.len();
        let mut coords = vec![[0.0; 2]; n];
        for q in &j.qubits {
            if q.id == 0 || q.id > n {
                return Err(Error::InconsistentLattice(format!(
                    "qubit id {} out of range",
                    q.id
                )));
            }
            coords[q.id - 1] = q.xy;
        }
        let mut plaquettes = Vec::with_capacity(j.plaquettes.len());
        for p in &j.plaquettes {
            let qubits = p
                .qubits
                .iter()
                .map(|&q| {
                    if q == 0 || q > n {
                        Err(Error::InconsistentLattice(format!(
                            "qubit id {q} out of range"
                        )))
                    } else {
                        Ok(q - 1)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            plaquettes.push(Plaquette {
                qubits,
                color: p.color,
            });
        }
        let kind = if n == 7 && plaquettes.len() == 3 {
            LatticeKind::SevenQubit
        } else {
            LatticeKind::SquareHexagonal
        };
        let lat = ColorCodeLattice::assemble(kind, j.distance, coords, plaquettes)?;
        if !j.logical_x.is_empty() && j.logical_x.len() != lat.n_logical() {
            return Err(Error::InconsistentLattice(
                "logical operator count mismatch".into(),
            ));
        }
        Ok(lat)
    }
}

fn one_based(v: &[Vec<usize>]) -> Vec<Vec<usize>> {
    v.iter()
        .map(|s| s.iter().map(|q| q + 1).collect())
        .collect()
}

/// Basis of `{x : H x = 0}`.
fn kernel_basis(h: &BitMatrix) -> Vec<BitVec> {
    let n = h.cols();
    let mut m = h.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == m.rows() {
            break;
        }
        let Some(p) = (row..m.rows()).find(|&i| m.get(i, col)) else {
            continue;
        };
        m.swap_rows(row, p);
        for i in 0..m.rows() {
            if i != row && m.get(i, col) {
                m.add_row(row, i);
            }
        }
        pivots.push(col);
        row += 1;
    }
    let pivot_set: BTreeSet<usize> = pivots.iter().copied().collect();
    (0..n)
        .filter(|c| !pivot_set.contains(c))
        .map(|free| {
            let mut v = BitVec::zeros(n);
            v.set(free, true);
            for (r, &pc) in pivots.iter().enumerate() {
                if m.get(r, free) {
                    v.set(pc, true);
                }
            }
            v
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeJson {
    pub distance: usize,
    pub qubits: Vec<QubitJson>,
    pub plaquettes: Vec<PlaquetteJson>,
    #[serde(default)]
    pub logical_x: Vec<Vec<usize>>,
    #[serde(default)]
    pub logical_z: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QubitJson {
    pub id: usize,
    pub xy: [f64; 2],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlaquetteJson {
    pub qubits: Vec<usize>,
    pub color: Color,
}

fn brick_position(r: i64, c: i64) -> (f64, f64) {
    let x = c as f64 * SQRT3 / 2.0;
    let y = -1.5 * r as f64
        + if (r + c).rem_euclid(2) == 0 {
            -0.25
        } else {
            0.25
        };
    (x, y)
}

fn brick_cycle(r: i64, c: i64) -> [(i64, i64); 6] {
    [
        (r, c),
        (r, c + 1),
        (r, c + 2),
        (r + 1, c + 2),
        (r + 1, c + 1),
        (r + 1, c),
    ]
}

fn brick_color(r: i64, c: i64) -> Color {
    Color::from_index((c + 3 * r).div_euclid(2))
}

/// The contiguous arc of `keep` within the 6-cycle, in cycle order.
fn cycle_arc(cycle: &[(i64, i64); 6], keep: &[bool; 6]) -> Option<Vec<(i64, i64)>> {
    let k = keep.iter().filter(|&&b| b).count();
    if k == 6 {
        return Some(cycle.to_vec());
    }
    let start = (0..6).find(|&i| keep[i] && !keep[(i + 5) % 6])?;
    let arc: Vec<_> = (0..k).map(|j| (start + j) % 6).collect();
    arc.iter()
        .all(|&i| keep[i])
        .then(|| arc.iter().map(|&i| cycle[i]).collect())
}

/// Square-hexagonal color code with two logical qubits and
/// `N = 3D²/2 − 2(D − 1)` qubits, for `D` a positive multiple of 4.
pub fn build_square_hexagonal(d: usize) -> Result<ColorCodeLattice> {
    if d == 0 || !d.is_multiple_of(4) {
        return Err(Error::InvalidDistance(d));
    }
    let w = (3 * d / 2 - 2) as i64;
    let u0 = -2.25;
    let inside = |(r, c): (i64, i64)| {
        let (x, y) = brick_position(r, c);
        let u = y - x / SQRT3;
        x >= -EPS && x <= w as f64 * SQRT3 / 2.0 + EPS && u >= u0 - EPS && u <= u0 + w as f64 + EPS
    };
    let mut faces: Vec<(Vec<(i64, i64)>, Color)> = Vec::new();
    for r in (-w - 4)..=4 {
        for c in -3..=(w + 3) {
            if (r + c).rem_euclid(2) != 0 {
                continue;
            }
            let cycle = brick_cycle(r, c);
            let keep = cycle.map(inside);
            let k = keep.iter().filter(|&&b| b).count();
            if k < 4 {
                continue;
            }
            let arc = cycle_arc(&cycle, &keep)
                .filter(|a| a.len() % 2 == 0)
                .ok_or_else(|| {
                    Error::InconsistentLattice(format!("brick ({r},{c}) is cut irregularly"))
                })?;
            faces.push((arc, brick_color(r, c)));
        }
    }
    // corner square below the lower-left corner, adding two qubits
    faces.push((vec![(1, 0), (1, 1), (2, 1), (2, 0)], brick_color(1, -1)));

    let mut sites: Vec<(i64, i64)> = faces.iter().flat_map(|(f, _)| f.iter().copied()).collect();
    sites.sort_unstable();
    sites.dedup();
    let rmin = sites.iter().map(|s| s.0).min().unwrap();
    let cmin = sites.iter().map(|s| s.1).min().unwrap();
    let index: HashMap<(i64, i64), usize> =
        sites.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let (x0, y0) = brick_position(rmin, cmin);
    let coords = sites
        .iter()
        .map(|&(r, c)| {
            let (x, y) = brick_position(r, c);
            [x - x0, y - y0]
        })
        .collect();
    let plaquettes = faces
        .into_iter()
        .map(|(f, color)| Plaquette {
            qubits: f.iter().map(|s| index[s]).collect(),
            color,
        })
        .collect();
    let lat = ColorCodeLattice::assemble(LatticeKind::SquareHexagonal, d, coords, plaquettes)?;
    if lat.n_qubits() != expected_qubits(d) || lat.n_logical() != 2 {
        return Err(Error::InconsistentLattice(format!(
            "built {} qubits with {} logical, expected {} with 2",
            lat.n_qubits(),
            lat.n_logical(),
            expected_qubits(d)
        )));
    }
    Ok(lat)
}

/// The 7-qubit triangular color code. Qubits are 0-based here; plaquettes are
/// {0,1,2,3}, {1,2,4,5}, {2,3,5,6}.
pub fn build_seven_qubit() -> ColorCodeLattice {
    let coords = vec![
        [0.0, 2.0],
        [-0.866, 0.5],
        [0.0, 0.0],
        [0.866, 0.5],
        [-1.732, -1.0],
        [0.0, -1.0],
        [1.732, -1.0],
    ];
    let plaquettes = vec![
        Plaquette {
            qubits: vec![0, 1, 2, 3],
            color: Color::R,
        },
        Plaquette {
            qubits: vec![1, 4, 5, 2],
            color: Color::G,
        },
        Plaquette {
            qubits: vec![2, 5, 6, 3],
            color: Color::B,
        },
    ];
    ColorCodeLattice::assemble(LatticeKind::SevenQubit, 3, coords, plaquettes)
        .expect("the 7-qubit code is consistent")
}

/// `|+⟩_L`: X and Z plaquette operators plus one logical X string per logical qubit.
pub fn logical_plus_tableau(l: &ColorCodeLattice) -> Result<StabilizerTableau> {
    let n = l.n_qubits();
    let mut gens = Vec::with_capacity(n);
    for p in &l.plaquettes {
        gens.push(PauliString::x_on(n, &p.qubits));
    }
    for p in &l.plaquettes {
        gens.push(PauliString::z_on(n, &p.qubits));
    }
    for s in &l.logical_x {
        gens.push(PauliString::x_on(n, s));
    }
    let t = StabilizerTableau::from_paulis(&gens)?;
    if !t.check_valid() {
        return Err(Error::InconsistentLattice(
            "stabilizers do not form a valid state".into(),
        ));
    }
    Ok(t)
}

/// Qubits left after peeling `D/4` layers of lattice links off the boundary.
pub fn bulk_qubits(l: &ColorCodeLattice) -> Result<Vec<usize>> {
    let layers = (l.distance / 4).max(1);
    let n = l.n_qubits();
    let mut depth: Vec<Option<usize>> = vec![None; n];
    let mut queue = VecDeque::new();
    for &q in &l.boundary {
        depth[q] = Some(1);
        queue.push_back(q);
    }
    while let Some(u) = queue.pop_front() {
        let du = depth[u].unwrap();
        if du >= layers {
            continue;
        }
        for v in l.links.neighbors(u) {
            if depth[v].is_none() {
                depth[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    let bulk: Vec<usize> = (0..n).filter(|&q| depth[q].is_none()).collect();
    if bulk.is_empty() {
        return Err(Error::TooSmall(format!(
            "no bulk after peeling {layers} layers"
        )));
    }
    Ok(bulk)
}

/// Control/target split with one control per recombined plaquette.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlAssignment {
    pub controls: Vec<usize>,
    pub targets: Vec<usize>,
    /// Row `i` lists the original plaquettes whose product is the recombined
    /// plaquette holding `controls[i]` as its only control.
    pub recombination: BitMatrix,
}

const FORCED_ATTEMPTS: u64 = 64;

/// Picks controls geometrically: qubits on few plaquettes first, keeping the
/// plaquette columns of the chosen controls independent.
///
/// Without a seed ties are broken by qubit index. With `forced_pair = (a, b)`,
/// `a` becomes a control whose recombined plaquette contains `b`: a composite
/// plaquette along a path of adjacent plaquettes joining `a` and `b` is chosen,
/// and no other control is placed on its support.
pub fn assign_controls_geometric(
    l: &ColorCodeLattice,
    seed: Option<u64>,
    forced_pair: Option<(usize, usize)>,
) -> Result<ControlAssignment> {
    let n = l.n_qubits();
    let np = l.n_plaquettes();
    let columns: Vec<BitVec> = (0..n)
        .map(|q| BitVec::from_indices(np, l.faces_of[q].iter().copied()))
        .collect();
    let order = |rng: Option<&mut ChaCha8Rng>| {
        let mut qs: Vec<usize> = (0..n).collect();
        if let Some(rng) = rng {
            qs.shuffle(rng);
        }
        qs.sort_by_key(|&q| l.faces_of[q].len());
        qs
    };
    let complete = |first: &[usize], excluded: &BitVec, qs: &[usize]| -> Option<Vec<usize>> {
        let mut basis = XorBasis::new(np);
        let mut chosen = Vec::with_capacity(np);
        for &q in first {
            if !basis.insert(&columns[q]) {
                return None;
            }
            chosen.push(q);
        }
        for &q in qs {
            if chosen.len() == np {
                break;
            }
            if excluded.get(q) || chosen.contains(&q) {
                continue;
            }
            if basis.insert(&columns[q]) {
                chosen.push(q);
            }
        }
        (chosen.len() == np).then_some(chosen)
    };

    let controls = match forced_pair {
        None => {
            let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
            let qs = order(rng.as_mut());
            complete(&[], &BitVec::zeros(n), &qs).ok_or_else(|| {
                Error::NoValidAssignment("plaquettes do not admit a control set".into())
            })?
        }
        Some((a, b)) => {
            if a >= n || b >= n || a == b {
                return Err(Error::NoValidAssignment(format!("invalid pair ({a},{b})")));
            }
            let base = seed.unwrap_or(0);
            let mut found = None;
            for attempt in 0..FORCED_ATTEMPTS {
                let mut rng = ChaCha8Rng::seed_from_u64(base.wrapping_add(attempt));
                let Some(support) = composite_plaquette(l, a, b, &mut rng) else {
                    continue;
                };
                let qs = order(Some(&mut rng));
                if let Some(c) = complete(&[a], &support, &qs) {
                    found = Some(c);
                    break;
                }
            }
            found.ok_or_else(|| {
                Error::NoValidAssignment(format!("no control set links qubits {a} and {b}"))
            })?
        }
    };
    let mut sorted = controls.clone();
    sorted.sort_unstable();
    let targets: Vec<usize> = (0..n)
        .filter(|q| sorted.binary_search(q).is_err())
        .collect();
    let inc = l.incidence();
    let block = inc.select_cols(&sorted);
    // row i of the inverse combines plaquettes into one holding only controls[i]
    let recombination = block.invert()?;
    Ok(ControlAssignment {
        controls: sorted,
        targets,
        recombination,
    })
}

/// Support of a product of plaquettes along a path of adjacent plaquettes that
/// keeps both `a` and `b`.
fn composite_plaquette(
    l: &ColorCodeLattice,
    a: usize,
    b: usize,
    rng: &mut ChaCha8Rng,
) -> Option<BitVec> {
    let np = l.n_plaquettes();
    let n = l.n_qubits();
    let mut prev: Vec<Option<usize>> = vec![None; np];
    let mut seen = vec![false; np];
    let mut starts = l.faces_of[a].clone();
    starts.shuffle(rng);
    let mut queue = VecDeque::new();
    for &p in &starts {
        seen[p] = true;
        queue.push_back(p);
    }
    while let Some(p) = queue.pop_front() {
        if l.plaquettes[p].contains(b) {
            let mut path = vec![p];
            let mut cur = p;
            while let Some(q) = prev[cur] {
                path.push(q);
                cur = q;
            }
            let mut support = BitVec::zeros(n);
            for &f in &path {
                support.xor_assign(&BitVec::from_indices(
                    n,
                    l.plaquettes[f].qubits.iter().copied(),
                ));
            }
            return (support.get(a) && support.get(b)).then_some(support);
        }
        let mut next: Vec<usize> = l.plaquettes[p]
            .qubits
            .iter()
            .flat_map(|&q| l.faces_of[q].iter().copied())
            .filter(|&f| !seen[f])
            .collect();
        next.sort_unstable();
        next.dedup();
        next.shuffle(rng);
        for f in next {
            seen[f] = true;
            prev[f] = Some(p);
            queue.push_back(f);
        }
    }
    None
}

/// Converts `|+⟩_L` of `l` into a graph state with the given controls.
///
/// The tableau is first mapped by Hadamards on every qubit, so the X part is
/// spanned by the plaquettes alone and the controls number `N_p`. The returned
/// unitary acts on `|+⟩_L` directly and reduces to Hadamards on the controls.
pub fn convert_logical_plus(
    l: &ColorCodeLattice,
    controls: &[usize],
) -> Result<GraphConversionResult> {
    let t = logical_plus_tableau(l)?;
    let n = t.n_qubits();
    let h_all = LocalCliffordLayer::from_ops(vec![Clifford1::H; n]);
    let th = t.apply_local_clifford(&h_all)?;
    let mut conv = stab_to_graph(&th, &ControlChoice::Given(controls.to_vec()))?;
    conv.unitary = h_all.then(&conv.unitary)?;
    Ok(conv)
}

/// Two stabilizers forming a local witness for the pair `(a, b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessConstruction {
    pub sx: PauliString,
    pub sz: PauliString,
    pub a: usize,
    pub b: usize,
    /// Length of the lattice path between `a` and `b`.
    pub d: usize,
    pub n_x: usize,
    pub n_z: usize,
    pub path: Vec<usize>,
    pub x_plaquettes: Vec<usize>,
    pub z_plaquettes: Vec<usize>,
}

impl WitnessConstruction {
    pub fn new(sx: PauliString, sz: PauliString, a: usize, b: usize, d: usize) -> Result<Self> {
        let w = WitnessConstruction {
            n_x: sx.weight(),
            n_z: sz.weight(),
            sx,
            sz,
            a,
            b,
            d,
            path: Vec::new(),
            x_plaquettes: Vec::new(),
            z_plaquettes: Vec::new(),
        };
        w.check()?;
        Ok(w)
    }

    /// Checks that both operators act on `a` and `b`, commute qubit-wise
    /// outside the pair, and restrict to a maximally entangled pair group.
    pub fn check(&self) -> Result<()> {
        let n = self.sx.n();
        if self.sz.n() != n || self.a >= n || self.b >= n || self.a == self.b {
            return Err(Error::InvalidWitness("sizes or pair out of range".into()));
        }
        let (a, b) = (self.a, self.b);
        for s in [&self.sx, &self.sz] {
            if s.get(a) == Pauli::I || s.get(b) == Pauli::I {
                return Err(Error::InvalidWitness("operator misses a pair qubit".into()));
            }
        }
        for i in (0..n).filter(|&i| i != a && i != b) {
            if !self.sx.get(i).commutes_with(self.sz.get(i)) {
                return Err(Error::InvalidWitness(format!(
                    "factors anticommute on qubit {i}"
                )));
            }
        }
        let p = PauliString::from_paulis(&[self.sx.get(a), self.sx.get(b)]);
        let q = PauliString::from_paulis(&[self.sz.get(a), self.sz.get(b)]);
        let pq = p.mul(&q);
        if !p.commutes_with(&q) || [&p, &q, &pq].iter().any(|s| s.weight() != 2) {
            return Err(Error::InvalidWitness(
                "pair group is not maximally entangled".into(),
            ));
        }
        Ok(())
    }

    /// `S^x S^z` as a Pauli string (phase dropped).
    pub fn product(&self) -> PauliString {
        self.sx.mul(&self.sz)
    }
}

fn cross(o: [f64; 2], p: [f64; 2], q: [f64; 2]) -> f64 {
    (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])
}

fn centroid(l: &ColorCodeLattice, f: usize) -> [f64; 2] {
    let qs = &l.plaquettes[f].qubits;
    let s = qs.iter().fold([0.0, 0.0], |acc, &q| {
        [acc[0] + l.coords[q][0], acc[1] + l.coords[q][1]]
    });
    [s[0] / qs.len() as f64, s[1] / qs.len() as f64]
}

/// Witness from the two plaquette strips on either side of a lattice path.
///
/// The side whose product has the smaller support carries the X operator.
pub fn witness_from_path(l: &ColorCodeLattice, path: &[usize]) -> Result<WitnessConstruction> {
    if path.len() < 2 {
        return Err(Error::NoValidLayout("path needs at least one link".into()));
    }
    let n = l.n_qubits();
    let mut left: Vec<usize> = Vec::new();
    let mut right: Vec<usize> = Vec::new();
    for win in path.windows(2) {
        let (u, v) = (win[0], win[1]);
        if !l.links.has_edge(u, v) {
            return Err(Error::NoValidLayout(format!(
                "{u}-{v} is not a lattice link"
            )));
        }
        let faces: Vec<usize> = l.faces_of[u]
            .iter()
            .copied()
            .filter(|&f| l.plaquettes[f].links().any(|e| e == (u.min(v), u.max(v))))
            .collect();
        if faces.len() != 2 {
            return Err(Error::NoValidLayout(format!(
                "link {u}-{v} lies on the boundary"
            )));
        }
        for f in faces {
            let side = if cross(l.coords[u], l.coords[v], centroid(l, f)) > 0.0 {
                &mut left
            } else {
                &mut right
            };
            if !side.contains(&f) {
                side.push(f);
            }
        }
    }
    if left.iter().any(|f| right.contains(f)) {
        return Err(Error::NoValidLayout("plaquette strips overlap".into()));
    }
    let strip = |faces: &[usize]| {
        let mut s = BitVec::zeros(n);
        for &f in faces {
            s.xor_assign(&BitVec::from_indices(
                n,
                l.plaquettes[f].qubits.iter().copied(),
            ));
        }
        s.ones().collect::<Vec<_>>()
    };
    let (ls, rs) = (strip(&left), strip(&right));
    let (xs, zs, xf, zf) = if ls.len() <= rs.len() {
        (ls, rs, left, right)
    } else {
        (rs, ls, right, left)
    };
    let a = path[0];
    let b = *path.last().unwrap();
    let mut w = WitnessConstruction::new(
        PauliString::x_on(n, &xs),
        PauliString::z_on(n, &zs),
        a,
        b,
        path.len() - 1,
    )
    .map_err(|e| Error::NoValidLayout(e.to_string()))?;
    w.path = path.to_vec();
    w.x_plaquettes = xf;
    w.z_plaquettes = zf;
    Ok(w)
}

fn turn(l: &ColorCodeLattice, u: usize, v: usize, w: usize) -> f64 {
    cross(l.coords[u], l.coords[v], l.coords[w])
}

/// Lattice path from `a` of `d` links whose turns alternate in direction.
///
/// `direction` selects among the starting link and initial turn (6 choices
/// per trivalent site, taken modulo the available ones).
pub fn staircase_path(
    l: &ColorCodeLattice,
    a: usize,
    d: usize,
    direction: usize,
) -> Option<Vec<usize>> {
    let starts = l.links.neighbors(a);
    if starts.is_empty() {
        return None;
    }
    let choices = 2 * starts.len();
    let first = starts[(direction % choices) / 2];
    let mut want_left = direction.is_multiple_of(2);
    let mut path = vec![a, first];
    while path.len() < d + 1 {
        let (u, v) = (path[path.len() - 2], path[path.len() - 1]);
        let next = l
            .links
            .neighbors(v)
            .into_iter()
            .filter(|&x| x != u)
            .find(|&x| (turn(l, u, v, x) > 0.0) == want_left)?;
        path.push(next);
        want_left = !want_left;
    }
    let mut uniq = path.clone();
    uniq.sort_unstable();
    uniq.dedup();
    (uniq.len() == path.len()).then_some(path)
}

/// Canonical witness for `(a, b)`: strips along a shortest lattice path with
/// alternating turns.
pub fn witness_plaquette_paths(
    l: &ColorCodeLattice,
    a: usize,
    b: usize,
) -> Result<WitnessConstruction> {
    let n = l.n_qubits();
    if a >= n || b >= n || a == b {
        return Err(Error::NoValidLayout(format!("invalid pair ({a},{b})")));
    }
    let d = l
        .lattice_distance(a, b)
        .ok_or_else(|| Error::NoValidLayout("qubits are not connected".into()))?;
    for dir in 0..2 * l.links.degree(a) {
        if let Some(p) = staircase_path(l, a, d, dir) {
            if *p.last().unwrap() == b {
                return witness_from_path(l, &p);
            }
        }
    }
    Err(Error::NoValidLayout(format!(
        "no staircase path joins {a} and {b}"
    )))
}

/// Bulk qubit closest to the centroid of the bulk.
pub fn central_bulk_qubit(l: &ColorCodeLattice) -> Result<usize> {
    let bulk = bulk_qubits(l)?;
    let m = bulk.len() as f64;
    let c = bulk.iter().fold([0.0, 0.0], |acc, &q| {
        [acc[0] + l.coords[q][0] / m, acc[1] + l.coords[q][1] / m]
    });
    let dist = |q: usize| (l.coords[q][0] - c[0]).powi(2) + (l.coords[q][1] - c[1]).powi(2);
    Ok(*bulk
        .iter()
        .min_by(|&&p, &&q| dist(p).partial_cmp(&dist(q)).unwrap().then(p.cmp(&q)))
        .unwrap())
}

/// A bulk pair at lattice distance `d` joined by a staircase path.
pub fn bulk_pair(l: &ColorCodeLattice, d: usize) -> Result<(usize, usize)> {
    let bulk = bulk_qubits(l)?;
    let a = central_bulk_qubit(l)?;
    for dir in 0..2 * l.links.degree(a) {
        if let Some(p) = staircase_path(l, a, d, dir) {
            let b = *p.last().unwrap();
            if bulk.contains(&b) && l.lattice_distance(a, b) == Some(d) {
                return Ok((a, b));
            }
        }
    }
    Err(Error::TooSmall(format!("no bulk pair at distance {d}")))
}
