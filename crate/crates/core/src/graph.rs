//! Simple undirected graphs, local complementation, path categories and the
//! adaptive local complementation (ALC) link-creation algorithm.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::stab::{Clifford1, LocalCliffordLayer};

/// Simple undirected graph on nodes `0..n`, stored as a symmetric adjacency matrix
/// with zero diagonal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: BitMatrix,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: BitMatrix::zeros(n, n),
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(i, j) in edges {
            g.check_node(i)?;
            g.check_node(j)?;
            if i == j {
                return Err(Error::PathInvalid(format!("self-loop at node {i}")));
            }
            g.add_edge(i, j);
        }
        Ok(g)
    }

    /// Wraps an adjacency matrix; it must be square, symmetric and loop-free.
    pub fn from_adjacency(adj: BitMatrix) -> Result<Self> {
        if adj.rows() != adj.cols() {
            return Err(Error::DimensionMismatch(format!(
                "adjacency matrix is {}x{}",
                adj.rows(),
                adj.cols()
            )));
        }
        if !adj.is_symmetric() || (0..adj.rows()).any(|i| adj.get(i, i)) {
            return Err(Error::InvalidState(
                "adjacency matrix must be symmetric with zero diagonal".into(),
            ));
        }
        Ok(Graph { adj })
    }

    pub fn n(&self) -> usize {
        self.adj.rows()
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adj
    }

    pub fn check_node(&self, i: usize) -> Result<()> {
        if i >= self.n() {
            return Err(Error::NodeOutOfRange {
                node: i,
                n: self.n(),
            });
        }
        Ok(())
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj.get(i, j)
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        self.adj.set(i, j, true);
        self.adj.set(j, i, true);
    }

    pub fn remove_edge(&mut self, i: usize, j: usize) {
        self.adj.set(i, j, false);
        self.adj.set(j, i, false);
    }

    pub fn neighborhood(&self, i: usize) -> &BitVec {
        self.adj.row(i)
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        self.adj.row(i).ones().collect()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj.row(i).count_ones()
    }

    /// Edges as pairs `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n())
            .flat_map(|i| {
                self.adj
                    .row(i)
                    .ones()
                    .filter(move |&j| j > i)
                    .map(move |j| (i, j))
            })
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n()).map(|i| self.degree(i)).sum::<usize>() / 2
    }

    fn component_of(&self, start: usize) -> BitVec {
        let mut seen = BitVec::zeros(self.n());
        let mut queue = VecDeque::from([start]);
        seen.set(start, true);
        while let Some(u) = queue.pop_front() {
            for v in self.adj.row(u).ones() {
                if !seen.get(v) {
                    seen.set(v, true);
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.component_of(0).count_ones() == self.n()
    }

    pub fn connected(&self, a: usize, b: usize) -> bool {
        self.component_of(a).get(b)
    }

    /// Local complementation at `i`: complements every edge inside the
    /// neighborhood of `i`.
    pub fn local_complement(&self, i: usize) -> Result<Graph> {
        let mut g = self.clone();
        g.local_complement_in_place(i)?;
        Ok(g)
    }

    /// In-place local complementation; returns the number of toggled links.
    pub fn local_complement_in_place(&mut self, i: usize) -> Result<usize> {
        self.check_node(i)?;
        let nb = self.adj.row(i).clone();
        let members: Vec<usize> = nb.ones().collect();
        for &j in &members {
            let row = self.adj.row_mut(j);
            row.xor_assign(&nb);
            row.set(j, false);
        }
        let k = members.len();
        Ok(k * k.saturating_sub(1) / 2)
    }

    /// Phase-free local Clifford implementing local complementation at `i`
    /// on the graph state: a quarter turn about X on `i` and about Z on each
    /// neighbor.
    pub fn lc_unitary(&self, i: usize) -> Result<LocalCliffordLayer> {
        self.check_node(i)?;
        let mut layer = LocalCliffordLayer::identity(self.n());
        layer.set(i, Clifford1::SQRT_X);
        for j in self.adj.row(i).ones() {
            layer.set(j, Clifford1::SQRT_Z);
        }
        Ok(layer)
    }

    /// Restriction to the nodes in `keep`, relabelled in the given order.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        Graph {
            adj: self.adj.submatrix(keep, keep),
        }
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            n: self.n(),
            edges: self
                .edges()
                .into_iter()
                .map(|(i, j)| [i + 1, j + 1])
                .collect(),
        }
    }

    pub fn from_json(j: &GraphJson) -> Result<Graph> {
        let mut edges = Vec::with_capacity(j.edges.len());
        for &[a, b] in &j.edges {
            if a == 0 || b == 0 {
                return Err(Error::NodeOutOfRange { node: 0, n: j.n });
            }
            edges.push((a - 1, b - 1));
        }
        Graph::from_edges(j.n, &edges)
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n(), self.edges())
    }
}

/// Serialized graph with 1-based node labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

/// A simple path given by its node sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path(pub Vec<usize>);

impl Path {
    pub fn nodes(&self) -> &[usize] {
        &self.0
    }

    /// Number of links on the path.
    pub fn length(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn start(&self) -> usize {
        self.0[0]
    }

    pub fn end(&self) -> usize {
        *self.0.last().unwrap()
    }

    pub fn interior(&self) -> &[usize] {
        if self.0.len() <= 2 {
            &[]
        } else {
            &self.0[1..self.0.len() - 1]
        }
    }

    /// Checks that the path is nonempty, simple and follows links of `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.0.is_empty() {
            return Err(Error::PathInvalid("empty path".into()));
        }
        let mut seen = BitVec::zeros(g.n());
        for &v in &self.0 {
            if v >= g.n() {
                return Err(Error::PathInvalid(format!("node {v} out of range")));
            }
            if seen.get(v) {
                return Err(Error::PathInvalid(format!("node {v} repeated")));
            }
            seen.set(v, true);
        }
        for w in self.0.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                return Err(Error::PathInvalid(format!("no link ({}, {})", w[0], w[1])));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathClass {
    /// No link between non-consecutive path nodes.
    C1,
    /// At least one chord.
    C2,
}

pub fn classify_path(g: &Graph, p: &Path) -> Result<PathClass> {
    p.validate(g)?;
    let nodes = p.nodes();
    for i in 0..nodes.len() {
        for j in i + 2..nodes.len() {
            if g.has_edge(nodes[i], nodes[j]) {
                return Ok(PathClass::C2);
            }
        }
    }
    Ok(PathClass::C1)
}

/// Chordless path on the nodes of `p`: from the current node, jump to the
/// neighbor lying farthest along `p`.
pub fn distill_c1(g: &Graph, p: &Path) -> Result<Path> {
    p.validate(g)?;
    let nodes = p.nodes();
    let mut out = vec![nodes[0]];
    let mut pos = 0;
    while pos + 1 < nodes.len() {
        let cur = nodes[pos];
        // the successor on p is always a neighbor, so the search cannot fail
        let next = (pos + 1..nodes.len())
            .rev()
            .find(|&k| g.has_edge(cur, nodes[k]))
            .expect("consecutive path nodes are linked");
        out.push(nodes[next]);
        pos = next;
    }
    Ok(Path(out))
}

/// Outcome of one ALC run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcRecord {
    /// Complemented nodes in application order.
    pub sequence: Vec<usize>,
    /// Product of the per-step layers, later steps acting last.
    pub unitary: LocalCliffordLayer,
    /// Number of link creations and deletions.
    pub link_operations: usize,
}

/// Creates the link `(a, b)` by local complementations on interior nodes of `p`.
///
/// The remaining path is re-checked after every complementation and distilled
/// again whenever a chord has appeared.
pub fn alc_create_link(g: &Graph, a: usize, b: usize, p: &Path) -> Result<(Graph, LcRecord)> {
    g.check_node(a)?;
    g.check_node(b)?;
    if a == b {
        return Err(Error::PathInvalid("endpoints coincide".into()));
    }
    if g.has_edge(a, b) {
        return Err(Error::LinkAlreadyPresent(a, b));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected(a, b));
    }
    p.validate(g)?;
    if p.start() != a || p.end() != b {
        return Err(Error::PathInvalid(format!(
            "path runs from {} to {}, expected {a} to {b}",
            p.start(),
            p.end()
        )));
    }
    let mut graph = g.clone();
    let mut record = LcRecord {
        sequence: Vec::new(),
        unitary: LocalCliffordLayer::identity(g.n()),
        link_operations: 0,
    };
    let mut path = distill_c1(&graph, p)?;
    while path.length() > 1 {
        let v = path.nodes()[1];
        let step = graph.lc_unitary(v)?;
        record.unitary = record.unitary.then(&step)?;
        record.link_operations += graph.local_complement_in_place(v)?;
        record.sequence.push(v);
        let mut rest = vec![a];
        rest.extend_from_slice(&path.nodes()[2..]);
        let next = Path(rest);
        // a chordless path stays valid; anything else is repaired by distillation
        path = match classify_path(&graph, &next) {
            Ok(PathClass::C1) => next,
            Ok(PathClass::C2) => distill_c1(&graph, &next)?,
            Err(e) => return Err(e),
        };
    }
    debug_assert!(graph.has_edge(a, b));
    Ok((graph, record))
}

/// Simple path from `a` to `b` found by depth-first search with neighbors
/// visited in a seed-determined random order (ChaCha8 stream).
pub fn random_simple_path(g: &Graph, a: usize, b: usize, seed: u64) -> Result<Path> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_simple_path_with(g, a, b, &mut rng)
}

pub fn random_simple_path_with(
    g: &Graph,
    a: usize,
    b: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Path> {
    g.check_node(a)?;
    g.check_node(b)?;
    if a == b {
        return Err(Error::PathInvalid("endpoints coincide".into()));
    }
    let n = g.n();
    let mut visited = BitVec::zeros(n);
    // stack of (node, shuffled neighbors, next index)
    let mut stack: Vec<(usize, Vec<usize>, usize)> = Vec::new();
    let shuffled = |v: usize, rng: &mut ChaCha8Rng| {
        let mut nb = g.neighbors(v);
        nb.shuffle(rng);
        nb
    };
    visited.set(a, true);
    let first = shuffled(a, rng);
    stack.push((a, first, 0));
    while let Some(top) = stack.last_mut() {
        if top.2 == top.1.len() {
            stack.pop();
            continue;
        }
        let v = top.1[top.2];
        top.2 += 1;
        if visited.get(v) {
            continue;
        }
        visited.set(v, true);
        if v == b {
            let mut nodes: Vec<usize> = stack.iter().map(|s| s.0).collect();
            nodes.push(b);
            return Ok(Path(nodes));
        }
        let nb = shuffled(v, rng);
        stack.push((v, nb, 0));
    }
    Err(Error::Disconnected(a, b))
}

/// Breadth-first shortest path; neighbors are explored in ascending order.
pub fn shortest_path(g: &Graph, a: usize, b: usize) -> Result<Path> {
    g.check_node(a)?;
    g.check_node(b)?;
    let n = g.n();
    let mut parent = vec![usize::MAX; n];
    parent[a] = a;
    let mut queue = VecDeque::from([a]);
    while let Some(u) = queue.pop_front() {
        if u == b {
            break;
        }
        for v in g.neighborhood(u).ones() {
            if parent[v] == usize::MAX {
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    if parent[b] == usize::MAX {
        return Err(Error::Disconnected(a, b));
    }
    let mut nodes = vec![b];
    let mut v = b;
    while v != a {
        v = parent[v];
        nodes.push(v);
    }
    nodes.reverse();
    Ok(Path(nodes))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph(n: usize) -> Graph {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    // 8-node example: path 1..7 with chords, node 8 hanging off node 4 (0-based here)
    fn chord_example() -> Graph {
        let mut edges: Vec<_> = (0..6).map(|i| (i, i + 1)).collect();
        edges.extend([(0, 2), (0, 4), (1, 3), (2, 6), (3, 5), (3, 7)]);
        Graph::from_edges(8, &edges).unwrap()
    }

    #[test]
    fn complement_path_center_gives_triangle() {
        let g = path_graph(3).local_complement(1).unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn complement_star_center_gives_k4() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let k4 = g.local_complement(0).unwrap();
        assert_eq!(k4.edge_count(), 6);
        assert_eq!(k4.local_complement(0).unwrap(), g);
    }

    #[test]
    fn out_of_range_node() {
        assert_eq!(
            path_graph(3).local_complement(3),
            Err(Error::NodeOutOfRange { node: 3, n: 3 })
        );
        assert!(path_graph(3).lc_unitary(5).is_err());
    }

    #[test]
    fn lc_unitary_support() {
        let g = path_graph(3);
        let u = g.lc_unitary(1).unwrap();
        assert_eq!(u.get(1), Clifford1::SQRT_X);
        assert_eq!(u.get(0), Clifford1::SQRT_Z);
        assert_eq!(u.get(2), Clifford1::SQRT_Z);
        let lone = Graph::empty(2).lc_unitary(0).unwrap();
        assert_eq!(lone.get(0), Clifford1::SQRT_X);
        assert_eq!(lone.get(1), Clifford1::IDENTITY);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify_path(&path_graph(3), &Path(vec![0, 1, 2])).unwrap(),
            PathClass::C1
        );
        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(
            classify_path(&tri, &Path(vec![0, 1, 2])).unwrap(),
            PathClass::C2
        );
        let g = chord_example();
        assert_eq!(
            classify_path(&g, &Path((0..7).collect())).unwrap(),
            PathClass::C2
        );
        assert!(classify_path(&g, &Path(vec![0, 6])).is_err());
    }

    #[test]
    fn distill_examples() {
        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(
            distill_c1(&tri, &Path(vec![0, 1, 2])).unwrap(),
            Path(vec![0, 2])
        );
        let g = chord_example();
        assert_eq!(
            distill_c1(&g, &Path((0..7).collect())).unwrap(),
            Path(vec![0, 4, 5, 6])
        );
        let p = Path(vec![0, 1, 2]);
        assert_eq!(distill_c1(&path_graph(3), &p).unwrap(), p);
    }

    #[test]
    fn shortest_examples() {
        assert_eq!(
            shortest_path(&path_graph(3), 0, 2).unwrap(),
            Path(vec![0, 1, 2])
        );
        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(shortest_path(&tri, 0, 2).unwrap(), Path(vec![0, 2]));
        assert_eq!(
            shortest_path(&chord_example(), 0, 6).unwrap(),
            Path(vec![0, 2, 6])
        );
        let split = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(shortest_path(&split, 0, 3), Err(Error::Disconnected(0, 3)));
    }

    #[test]
    fn alc_on_path_graph() {
        let g = path_graph(3);
        let (h, rec) = alc_create_link(&g, 0, 2, &Path(vec![0, 1, 2])).unwrap();
        assert!(h.has_edge(0, 2));
        assert_eq!(rec.sequence, vec![1]);
        assert_eq!(rec.link_operations, 1);
    }

    #[test]
    fn alc_errors() {
        let g = path_graph(3);
        assert_eq!(
            alc_create_link(&g, 0, 1, &Path(vec![0, 1])).unwrap_err(),
            Error::LinkAlreadyPresent(0, 1)
        );
        assert!(matches!(
            alc_create_link(&g, 0, 2, &Path(vec![0, 2])).unwrap_err(),
            Error::PathInvalid(_)
        ));
        let split = Graph::from_edges(4, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            alc_create_link(&split, 0, 2, &Path(vec![0, 1, 2])).unwrap_err(),
            Error::Disconnected(0, 2)
        );
    }

    #[test]
    fn random_path_is_deterministic() {
        let g = path_graph(6);
        assert_eq!(
            random_simple_path(&g, 0, 5, 3).unwrap(),
            Path((0..6).collect())
        );
        let k5 = Graph::from_edges(
            5,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (0, 4),
                (1, 2),
                (1, 3),
                (1, 4),
                (2, 3),
                (2, 4),
                (3, 4),
            ],
        )
        .unwrap();
        assert_eq!(
            random_simple_path(&k5, 0, 4, 11).unwrap(),
            random_simple_path(&k5, 0, 4, 11).unwrap()
        );
    }

    #[test]
    fn json_uses_one_based_labels() {
        let g = path_graph(3);
        let j = g.to_json();
        assert_eq!(j.edges, vec![[1, 2], [2, 3]]);
        assert_eq!(Graph::from_json(&j).unwrap(), g);
    }
}
