use locent::gf2::{BitMatrix, BitVec};
use proptest::prelude::*;

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BitMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(0u8..2, c), r)
            .prop_map(|rows| BitMatrix::from_rows(&rows))
    })
}

fn naive_product(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
    let mut out = BitMatrix::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let mut s = false;
            for k in 0..a.cols() {
                s ^= a.get(i, k) & b.get(k, j);
            }
            out.set(i, j, s);
        }
    }
    out
}

// log2 of the number of distinct vectors in the row space, by enumeration
fn brute_rank(m: &BitMatrix) -> usize {
    let mut seen = std::collections::HashSet::new();
    for mask in 0u32..(1 << m.rows()) {
        let mut v = BitVec::zeros(m.cols());
        for i in 0..m.rows() {
            if mask >> i & 1 == 1 {
                v.xor_assign(m.row(i));
            }
        }
        seen.insert(v);
    }
    seen.len().trailing_zeros() as usize
}

fn is_column_echelon(m: &BitMatrix) -> bool {
    // leading (topmost) one of each nonzero column strictly increases; zero columns trail
    let mut last: Option<usize> = None;
    let mut seen_zero = false;
    for j in 0..m.cols() {
        match m.column(j).first_one() {
            None => seen_zero = true,
            Some(lead) => {
                if seen_zero || last.is_some_and(|l| lead <= l) {
                    return false;
                }
                last = Some(lead);
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn product_matches_naive((a, b) in (1usize..10, 1usize..10, 1usize..10).prop_flat_map(|(r, k, c)| {
        (prop::collection::vec(prop::collection::vec(0u8..2, k), r),
         prop::collection::vec(prop::collection::vec(0u8..2, c), k))
    })) {
        let a = BitMatrix::from_rows(&a);
        let b = BitMatrix::from_rows(&b);
        prop_assert_eq!(a.multiply(&b).unwrap(), naive_product(&a, &b));
    }

    #[test]
    fn rank_matches_enumeration(m in matrix(10, 10)) {
        prop_assert_eq!(m.rank(), brute_rank(&m));
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn column_reduce_contract(m in matrix(12, 12)) {
        let (red, r) = m.column_reduce();
        prop_assert_eq!(r.rank(), r.rows());
        prop_assert_eq!(m.multiply(&r).unwrap(), red.clone());
        prop_assert_eq!(red.rank(), m.rank());
        prop_assert!(is_column_echelon(&red));
    }

    #[test]
    fn independent_rows_have_full_rank(m in matrix(12, 8), k in 0usize..8) {
        let rank = m.rank();
        match m.independent_rows(k) {
            Ok(rows) => {
                prop_assert!(k <= rank);
                prop_assert_eq!(rows.len(), k);
                prop_assert_eq!(m.select_rows(&rows).rank(), k);
                prop_assert!(rows.windows(2).all(|w| w[0] < w[1]));
            }
            Err(_) => prop_assert!(k > rank),
        }
    }
}

#[test]
fn random_inverses_up_to_64() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 1000 {
        let n = rng.gen_range(1..=64);
        let rows: Vec<Vec<u8>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(0..2)).collect())
            .collect();
        let m = BitMatrix::from_rows(&rows);
        match m.invert() {
            Ok(inv) => {
                assert_eq!(m.multiply(&inv).unwrap(), BitMatrix::identity(n));
                assert_eq!(inv.multiply(&m).unwrap(), BitMatrix::identity(n));
                checked += 1;
            }
            Err(_) => assert!(m.rank() < n),
        }
    }
}
