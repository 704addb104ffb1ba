use std::sync::Arc;

use fbpir_core::multiset::Multisets;
use fbpir_core::{
    can_serve, projective_canonical, verify_plan, Field, FieldElement, MatrixFq, RequestList, VectorFq,
};
use proptest::prelude::*;

/// Prime-field vectors as plain integers, independent of the library.
fn raw(q: u32, k: usize, code: u64) -> Vec<u32> {
    let mut c = code;
    (0..k)
        .map(|_| {
            let d = (c % q as u64) as u32;
            c /= q as u64;
            d
        })
        .collect()
}

fn in_raw_span(q: u32, v: &[u32], set: &[&Vec<u32>]) -> bool {
    let combos = (q as u64).pow(set.len() as u32);
    (0..combos).any(|mut c| {
        let mut acc = vec![0u32; v.len()];
        for col in set {
            let a = (c % q as u64) as u32;
            c /= q as u64;
            for (x, y) in acc.iter_mut().zip(col.iter()) {
                *x = (*x + a * y) % q;
            }
        }
        acc == v
    })
}

/// Tries every assignment of columns to requests (or to nobody).
fn oracle_serves(q: u32, cols: &[Vec<u32>], reqs: &[Vec<u32>]) -> bool {
    let t = reqs.len();
    let n = cols.len();
    let total = (t as u64 + 1).pow(n as u32);
    (0..total).any(|mut code| {
        let mut owner = vec![0usize; n];
        for o in owner.iter_mut() {
            *o = (code % (t as u64 + 1)) as usize;
            code /= t as u64 + 1;
        }
        reqs.iter().enumerate().all(|(r, v)| {
            let set: Vec<&Vec<u32>> = (0..n).filter(|&i| owner[i] == r + 1).map(|i| &cols[i]).collect();
            !set.is_empty() && in_raw_span(q, v, &set)
        })
    })
}

fn field(q: u32) -> Arc<Field> {
    Arc::new(Field::new(q).unwrap())
}

fn matrix(f: &Arc<Field>, k: usize, codes: &[u64]) -> MatrixFq {
    let cols = codes.iter().map(|&c| VectorFq::from_code(k, f.order(), c)).collect();
    MatrixFq::new(f.clone(), k, cols).unwrap()
}

fn requests(f: &Field, k: usize, codes: &[u64]) -> RequestList {
    let v: Vec<VectorFq> = codes.iter().map(|&c| VectorFq::from_code(k, f.order(), c)).collect();
    RequestList::new(f, k, &v).unwrap()
}

fn serves(m: &MatrixFq, l: &RequestList) -> bool {
    match can_serve(m, l).unwrap() {
        Some(plan) => {
            assert!(verify_plan(m, l, &plan));
            true
        }
        None => false,
    }
}

#[test]
fn can_serve_matches_brute_force_oracle_on_the_binary_plane() {
    let (q, k) = (2u32, 2usize);
    let f = field(q);
    let nonzero: Vec<u64> = (1..4).collect();
    for n in 1..=6 {
        for cols in Multisets::new(3, n) {
            let col_codes: Vec<u64> = cols.iter().map(|&i| nonzero[i]).collect();
            let m = matrix(&f, k, &col_codes);
            let raw_cols: Vec<Vec<u32>> = col_codes.iter().map(|&c| raw(q, k, c)).collect();
            for t in 1..=3 {
                for req in Multisets::new(3, t) {
                    let req_codes: Vec<u64> = req.iter().map(|&i| nonzero[i]).collect();
                    let raw_reqs: Vec<Vec<u32>> = req_codes.iter().map(|&c| raw(q, k, c)).collect();
                    let l = requests(&f, k, &req_codes);
                    assert_eq!(
                        serves(&m, &l),
                        oracle_serves(q, &raw_cols, &raw_reqs),
                        "cols {col_codes:?} reqs {req_codes:?}"
                    );
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
struct Instance {
    q: u32,
    k: usize,
    cols: Vec<u64>,
    reqs: Vec<u64>,
}

fn instance(max_cols: usize, max_reqs: usize, qs: &'static [u32]) -> impl Strategy<Value = Instance> {
    (prop::sample::select(qs), 1usize..=3).prop_flat_map(move |(q, k)| {
        let top = (q as u64).pow(k as u32);
        (
            prop::collection::vec(1..top, 1..=max_cols),
            prop::collection::vec(1..top, 1..=max_reqs),
        )
            .prop_map(move |(cols, reqs)| Instance { q, k, cols, reqs })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn can_serve_matches_oracle_on_random_binary_instances(inst in instance(6, 3, &[2])) {
        let f = field(inst.q);
        let m = matrix(&f, inst.k, &inst.cols);
        let l = requests(&f, inst.k, &inst.reqs);
        let raw_cols: Vec<Vec<u32>> = inst.cols.iter().map(|&c| raw(inst.q, inst.k, c)).collect();
        let raw_reqs: Vec<Vec<u32>> = inst.reqs.iter().map(|&c| raw(inst.q, inst.k, c)).collect();
        prop_assert_eq!(serves(&m, &l), oracle_serves(inst.q, &raw_cols, &raw_reqs));
    }

    #[test]
    fn serving_is_monotone(inst in instance(7, 4, &[2, 3]), extra in 1u64..27, drop in 0usize..4) {
        let f = field(inst.q);
        let m = matrix(&f, inst.k, &inst.cols);
        let l = requests(&f, inst.k, &inst.reqs);
        if serves(&m, &l) {
            let top = (inst.q as u64).pow(inst.k as u32);
            let mut bigger = inst.cols.clone();
            bigger.push(1 + (extra - 1) % (top - 1));
            prop_assert!(serves(&matrix(&f, inst.k, &bigger), &l));
            if inst.reqs.len() > 1 {
                let mut fewer = inst.reqs.clone();
                fewer.remove(drop % inst.reqs.len());
                prop_assert!(serves(&m, &requests(&f, inst.k, &fewer)));
            }
        }
    }

    #[test]
    fn serving_ignores_scaling_and_column_order(
        inst in instance(7, 4, &[3, 4, 5]),
        scales in prop::collection::vec(1u32..5, 11),
        perm_seed in any::<u64>(),
    ) {
        let f = field(inst.q);
        let base = serves(&matrix(&f, inst.k, &inst.cols), &requests(&f, inst.k, &inst.reqs));
        let scale = |i: usize| f.element(1 + (scales[i % scales.len()] - 1) % (inst.q - 1)).unwrap();
        let mut cols: Vec<VectorFq> = inst
            .cols
            .iter()
            .enumerate()
            .map(|(i, &c)| VectorFq::from_code(inst.k, inst.q, c).scale(&f, scale(i)))
            .collect();
        // Fisher-Yates driven by the seed
        let mut s = perm_seed;
        for i in (1..cols.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            cols.swap(i, (s >> 33) as usize % (i + 1));
        }
        let reqs: Vec<VectorFq> = inst
            .reqs
            .iter()
            .enumerate()
            .map(|(i, &c)| VectorFq::from_code(inst.k, inst.q, c).scale(&f, scale(i + 5)))
            .collect();
        let m = MatrixFq::new(f.clone(), inst.k, cols).unwrap();
        let l = RequestList::new(&f, inst.k, &reqs).unwrap();
        prop_assert_eq!(serves(&m, &l), base);
    }

    #[test]
    fn serving_is_invariant_under_invertible_maps(
        inst in instance(7, 4, &[2, 3]),
        entries in prop::collection::vec(0u32..3, 9),
    ) {
        let f = field(inst.q);
        let k = inst.k;
        let g: Vec<Vec<FieldElement>> = (0..k)
            .map(|r| (0..k).map(|c| f.element(entries[r * 3 + c] % inst.q).unwrap()).collect())
            .collect();
        let rows: Vec<VectorFq> = g.iter().map(|r| VectorFq::new(r.clone())).collect();
        prop_assume!(fbpir_core::rank(&f, k, &rows) == k);
        let m = matrix(&f, k, &inst.cols);
        let l = requests(&f, k, &inst.reqs);
        let gm = m.left_multiply(&g);
        let image: Vec<VectorFq> = inst
            .reqs
            .iter()
            .map(|&c| {
                let v = VectorFq::from_code(k, inst.q, c);
                let cols = MatrixFq::new(f.clone(), k, vec![v]).unwrap().left_multiply(&g);
                cols.column(0).clone()
            })
            .collect();
        let gl = RequestList::new(&f, k, &image).unwrap();
        prop_assert_eq!(serves(&m, &l), serves(&gm, &gl));
    }

    #[test]
    fn canonical_point_is_scale_invariant(q in prop::sample::select(vec![2u32, 3, 4, 5, 7, 8, 9]), k in 1usize..5, code in 1u64..10_000, a in 1u32..9) {
        let f = field(q);
        let top = (q as u64).pow(k as u32);
        let v = VectorFq::from_code(k, q, 1 + code % (top - 1));
        let alpha = f.element(1 + (a - 1) % (q - 1)).unwrap();
        prop_assert_eq!(
            projective_canonical(&f, &v).unwrap(),
            projective_canonical(&f, &v.scale(&f, alpha)).unwrap()
        );
    }
}
