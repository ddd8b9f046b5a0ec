mod common;

use std::collections::HashMap;

use locent::codes::{
    assign_controls_geometric, build_seven_qubit, convert_logical_plus, logical_plus_tableau,
    witness_from_path,
};
use locent::dense::{measurement_basis, StateVector, C64};
use locent::le::{
    alc_samples, direct_link_samples, mlb_dense, mlb_neighborhood, mlb_optimize, negativity,
    relevant_neighborhood, rle_exhaustive, witness_decomposition_check, wlb, Strategy,
    TwoQubitState,
};
use locent::noise::{standard_channel, transform_noise, NoiseKind, NoiseModel};
use locent::stab::{Pauli, PauliString, StabilizerTableau};
use nalgebra::{Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PAULIS: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
const QS: [f64; 3] = [0.0, 0.01, 0.1];

fn random_model(n: usize, rng: &mut ChaCha8Rng) -> NoiseModel {
    let probs = (0..n)
        .map(|_| {
            let w: [f64; 4] = [rng.gen::<f64>() + 2.0, rng.gen(), rng.gen(), rng.gen()];
            let s: f64 = w.iter().sum();
            w.map(|x| x / s)
        })
        .collect();
    NoiseModel::new(probs).unwrap()
}

fn random_setting(n: usize, a: usize, b: usize, rng: &mut ChaCha8Rng) -> Vec<Pauli> {
    (0..n)
        .map(|i| {
            if i == a || i == b {
                Pauli::I
            } else {
                PAULIS[rng.gen_range(1..4)]
            }
        })
        .collect()
}

/// Average negativity by brute force: every error pattern is mixed into the
/// conditional pair state of every outcome.
fn literal_mlb(
    t: &StabilizerTableau,
    a: usize,
    b: usize,
    m: &NoiseModel,
    setting: &[Pauli],
) -> f64 {
    let n = t.n_qubits();
    let psi = StateVector::from_tableau(t).unwrap();
    let mut conditional = HashMap::<usize, Matrix4<C64>>::new();
    for code in 0..4usize.pow(n as u32) {
        let mut e = PauliString::identity(n);
        let mut p = 1.0;
        let mut c = code;
        for q in 0..n {
            e.set(q, PAULIS[c % 4]);
            p *= m.prob(q, PAULIS[c % 4]);
            c /= 4;
        }
        if p == 0.0 {
            continue;
        }
        let mut phi = psi.clone();
        phi.apply_pauli(&e);
        for q in (0..n).filter(|&q| q != a && q != b) {
            phi.apply_single(q, measurement_basis(setting[q]));
        }
        let mut blocks = HashMap::<usize, Vector4<C64>>::new();
        for (j, amp) in phi.amplitudes().iter().enumerate() {
            let ab = 2 * ((j >> a) & 1) + ((j >> b) & 1);
            blocks
                .entry(j & !(1 << a) & !(1 << b))
                .or_insert_with(Vector4::zeros)[ab] = *amp;
        }
        for (k, v) in blocks {
            *conditional.entry(k).or_insert_with(Matrix4::zeros) +=
                v * v.adjoint() * C64::new(p, 0.0);
        }
    }
    conditional
        .values()
        .map(|rho| {
            let w = rho.trace().re;
            if w < 1e-14 {
                return 0.0;
            }
            w * negativity(&TwoQubitState::new(rho / C64::new(w, 0.0)).unwrap())
        })
        .sum()
}

#[test]
fn dense_matches_literal_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..40 {
        let n = rng.gen_range(2..=6);
        let t = common::stabilizer_state(n, &mut rng);
        let (a, b) = (0, rng.gen_range(1..n));
        let setting = random_setting(n, a, b, &mut rng);
        let m = random_model(n, &mut rng);
        let fast = mlb_dense(&t, a, b, &m, &setting).unwrap();
        let slow = literal_mlb(&t, a, b, &m, &setting);
        assert!((fast - slow).abs() < 1e-10, "n={n}: {fast} vs {slow}");
    }
}

#[test]
fn seven_qubit_neighborhood_equals_dense() {
    let l = build_seven_qubit();
    let t = logical_plus_tableau(&l).unwrap();
    let asg = assign_controls_geometric(&l, None, None).unwrap();
    let conv = convert_logical_plus(&l, &asg.controls).unwrap();
    for kind in NoiseKind::ALL {
        for q in QS {
            let m = standard_channel(kind, q, 7).unwrap();
            let alc = alc_samples(&conv, 0, 4, &m, 10, 3).unwrap();
            let direct = direct_link_samples(0, 4, &m, 10, 3, |s| {
                let asg = assign_controls_geometric(&l, Some(s), Some((0, 4)))?;
                convert_logical_plus(&l, &asg.controls)
            })
            .unwrap();
            for r in [&alc.best, &direct.best] {
                let dense = mlb_dense(&t, 0, 4, &m, &r.setting).unwrap();
                assert!(
                    (r.value - dense).abs() < 1e-10,
                    "{kind} q={q}: {} vs {dense}",
                    r.value
                );
            }
        }
    }
}

#[test]
fn random_graphs_neighborhood_equals_dense() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..60 {
        let n = rng.gen_range(2..=9);
        let mut g = common::random_graph(n, 0.4, &mut rng);
        g.add_edge(0, 1);
        let t = locent::stab::graph_to_tableau(&g);
        let m = random_model(n, &mut rng);
        let r = mlb_neighborhood(&g, 0, 1, &m).unwrap();
        let dense = mlb_dense(&t, 0, 1, &m, &r.setting).unwrap();
        assert!((r.value - dense).abs() < 1e-10);
        assert_eq!(r.n, relevant_neighborhood(&g, 0, 1, &m).unwrap().len());
    }
}

#[test]
fn optimized_never_exceeds_restricted_le() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..30 {
        let n = rng.gen_range(3..=7);
        let t = common::stabilizer_state(n, &mut rng);
        let m = random_model(n, &mut rng);
        let rle = rle_exhaustive(&t, 0, n - 1, &m).unwrap();
        for strategy in [Strategy::Alc, Strategy::DirectLink] {
            match mlb_optimize(&t, 0, n - 1, &m, strategy, 8, 5) {
                Ok(r) => assert!(r.best.value <= rle + 1e-10),
                // the pair may be unreachable: disconnected graph or no forcing control set
                Err(locent::Error::Disconnected(..) | locent::Error::NoValidAssignment(_)) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }
}

#[test]
fn bounds_are_monotone_in_q() {
    let l = build_seven_qubit();
    let t = logical_plus_tableau(&l).unwrap();
    let w = witness_from_path(&l, &[1, 2]).unwrap();
    for kind in NoiseKind::ALL {
        let mut prev = (f64::INFINITY, f64::INFINITY);
        for i in 0..=10 {
            let m = standard_channel(kind, i as f64 / 10.0, 7).unwrap();
            let mlb = mlb_optimize(&t, 0, 4, &m, Strategy::Alc, 4, 1)
                .unwrap()
                .best
                .value;
            let wl = wlb(&w, &m).unwrap();
            assert!((0.0..=1.0 + 1e-12).contains(&mlb));
            assert!(mlb <= prev.0 + 1e-12 && wl <= prev.1 + 1e-12);
            prev = (mlb, wl);
        }
    }
}

#[test]
fn local_unitary_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..30 {
        let n = rng.gen_range(2..=7);
        let t = common::stabilizer_state(n, &mut rng);
        let u = common::local_layer(n, &mut rng);
        let setting = random_setting(n, 0, 1, &mut rng);
        let m = random_model(n, &mut rng);
        let moved_setting: Vec<Pauli> = (0..n).map(|i| u.get(i).apply(setting[i])).collect();
        let before = mlb_dense(&t, 0, 1, &m, &setting).unwrap();
        let tu = t.apply_local_clifford(&u).unwrap();
        let after =
            mlb_dense(&tu, 0, 1, &transform_noise(&m, &u).unwrap(), &moved_setting).unwrap();
        assert!((before - after).abs() < 1e-10);
    }
}

#[test]
fn witness_decomposition_on_seven_qubit_code() {
    let l = build_seven_qubit();
    let t = logical_plus_tableau(&l).unwrap();
    for path in [[1, 2], [2, 5], [3, 2]] {
        let w = witness_from_path(&l, &path).unwrap();
        for kind in NoiseKind::ALL {
            for q in [0.0, 0.1, 0.3] {
                let m = standard_channel(kind, q, 7).unwrap();
                let (lhs, rhs) = witness_decomposition_check(&w, &t, &m).unwrap();
                assert!((lhs - rhs).abs() < 1e-10);
                assert!((wlb(&w, &m).unwrap() + 2.0 * lhs).abs() < 1e-10);
                if q == 0.0 {
                    assert!((lhs + 0.5).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn size_limits() {
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    let big = common::stabilizer_state(10, &mut rng);
    let m = NoiseModel::noiseless(10);
    assert!(matches!(
        rle_exhaustive(&big, 0, 1, &m),
        Err(locent::Error::TooLarge(_))
    ));
    let big = common::stabilizer_state(15, &mut rng);
    let setting = vec![Pauli::Z; 15];
    assert!(matches!(
        mlb_dense(&big, 0, 1, &NoiseModel::noiseless(15), &setting),
        Err(locent::Error::TooLarge(_))
    ));
}
