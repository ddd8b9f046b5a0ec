#![allow(dead_code)]

use locent::gf2::BitMatrix;
use locent::graph::Graph;
use locent::stab::{graph_to_tableau, Clifford1, LocalCliffordLayer, StabilizerTableau};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random spanning tree plus independent extra edges with probability `p`.
pub fn connected_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut g = Graph::empty(n);
    for i in 1..n {
        let j = rng.gen_range(0..i);
        g.add_edge(order[i], order[j]);
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(i, j);
            }
        }
    }
    g
}

pub fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(i, j);
            }
        }
    }
    g
}

pub fn local_layer(n: usize, rng: &mut ChaCha8Rng) -> LocalCliffordLayer {
    let all = Clifford1::all();
    LocalCliffordLayer::from_ops((0..n).map(|_| *all.choose(rng).unwrap()).collect())
}

pub fn invertible(n: usize, rng: &mut ChaCha8Rng) -> BitMatrix {
    loop {
        let rows: Vec<Vec<u8>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(0..2)).collect())
            .collect();
        let m = BitMatrix::from_rows(&rows);
        if m.rank() == n {
            return m;
        }
    }
}

/// Uniformly scrambled generators of a random stabilizer state.
pub fn stabilizer_state(n: usize, rng: &mut ChaCha8Rng) -> StabilizerTableau {
    let p = rng.gen_range(0.1..0.7);
    let g = random_graph(n, p, rng);
    graph_to_tableau(&g)
        .apply_local_clifford(&local_layer(n, rng))
        .unwrap()
        .recombine(&invertible(n, rng))
        .unwrap()
}
