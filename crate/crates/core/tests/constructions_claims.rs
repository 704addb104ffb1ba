use fbpir_core::constructions::{construct_double_all_nonzero, HallOrdering};
use fbpir_core::multiset::Multisets;
use fbpir_core::{
    construct_all_nonzero, construct_binary_t2, construct_k2, hall_ordering, is_functional_batch, is_functional_pir,
    plan_batch_double, verify_plan, Construction, ConstructionError, Field, Kind, Limits, RequestList, VectorFq,
};
use proptest::prelude::*;

fn holds(c: &Construction) -> bool {
    let lim = Limits::default();
    let t = c.claimed_t as u32;
    match c.claimed_kind {
        Kind::FP => is_functional_pir(&c.matrix, t, &lim).unwrap().holds(),
        Kind::FB => is_functional_batch(&c.matrix, t, &lim).unwrap().holds(),
    }
}

#[test]
fn every_small_construction_meets_its_claim() {
    let mut checked = 0;
    for q in [2u32, 3, 4, 5] {
        for t in 1..=10 {
            let c = construct_k2(t, q).unwrap();
            assert!(holds(&c), "k=2 q={q} t={t}");
            checked += 1;
        }
    }
    for k in [2usize, 3] {
        assert!(holds(&construct_binary_t2(k).unwrap()), "binary k={k}");
        checked += 1;
    }
    for (k, q) in [(2usize, 2u32), (2, 3), (2, 4), (2, 5), (3, 2)] {
        for s in 1..=4 {
            let c = construct_all_nonzero(k, q, s).unwrap();
            if c.claimed_t > 10 {
                continue;
            }
            assert!(holds(&c), "all-nonzero k={k} q={q} s={s}");
            checked += 1;
        }
        let c = construct_double_all_nonzero(k, q).unwrap();
        if c.claimed_t <= 10 {
            assert!(holds(&c), "double k={k} q={q}");
            checked += 1;
        }
    }
    assert!(checked >= 50);
}

#[test]
fn claims_are_one_short_of_failing_where_tight() {
    // the k = 2 matrices stop serving one request beyond their claim at the
    // break points of the length formula
    let lim = Limits::default();
    for q in [2u32, 3] {
        for t in 1..=6u64 {
            let c = construct_k2(t, q).unwrap();
            let next = construct_k2(t + 1, q).unwrap();
            if next.matrix.n() > c.matrix.n() {
                assert!(!is_functional_batch(&c.matrix, t as u32 + 1, &lim).unwrap().holds(), "q={q} t={t}");
            }
        }
    }
}

fn nonzero(k: usize, q: u32) -> Vec<VectorFq> {
    (1..(q as u64).pow(k as u32)).map(|c| VectorFq::from_code(k, q, c)).collect()
}

#[test]
fn batch_double_serves_every_list() {
    for (k, q) in [(2usize, 2u32), (2, 3), (3, 2)] {
        let f = Field::new(q).unwrap();
        let m = construct_double_all_nonzero(k, q).unwrap().matrix;
        let vs = nonzero(k, q);
        let n = (q as usize).pow(k as u32);
        let mut lists = 0;
        for idx in Multisets::new(vs.len(), n) {
            let list: Vec<VectorFq> = idx.iter().map(|&i| vs[i].clone()).collect();
            for order in [list.clone(), list.iter().rev().cloned().collect()] {
                let plan = plan_batch_double(k, q, &order).unwrap();
                let mut used: Vec<usize> = plan.assignments.iter().flat_map(|a| a.indices.clone()).collect();
                let total = used.len();
                used.sort_unstable();
                used.dedup();
                assert_eq!(used.len(), total);
                let l = RequestList::new(&f, k, &order).unwrap();
                assert!(verify_plan(&m, &l, &plan), "k={k} q={q} {idx:?}");
            }
            lists += 1;
        }
        assert!(lists > 0);
    }
}

fn zero_sum_list(k: usize, q: u32, codes: &[u64]) -> Vec<VectorFq> {
    let f = Field::new(q).unwrap();
    let n = codes.len();
    let mut list: Vec<VectorFq> = codes.iter().map(|&c| VectorFq::from_code(k, q, c)).collect();
    let rest = list[..n - 1].iter().fold(VectorFq::zero(k), |a, x| a.add(&f, x));
    list[n - 1] = rest.neg(&f);
    list
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hall_orderings_exist_for_zero_sum_lists(
        (k, q) in prop::sample::select(vec![(2usize, 3u32), (3, 2), (4, 2), (2, 4), (2, 5), (3, 3)]),
        seeds in prop::collection::vec(any::<u64>(), 27),
    ) {
        let f = Field::new(q).unwrap();
        let n = (q as u64).pow(k as u32);
        let codes: Vec<u64> = seeds[..n as usize].iter().map(|s| s % n).collect();
        let list = zero_sum_list(k, q, &codes);
        let h: HallOrdering = hall_ordering(k, q, &list).unwrap();
        prop_assert!(h.is_valid(&f));
        let mut shifted = list.clone();
        shifted[0] = shifted[0].add(&f, &VectorFq::unit(k, 0));
        prop_assert_eq!(hall_ordering(k, q, &shifted), Err(ConstructionError::SumNonzero));
    }

    #[test]
    fn batch_double_serves_random_orders(
        (k, q) in prop::sample::select(vec![(2usize, 3u32), (3, 2), (4, 2), (2, 4)]),
        seeds in prop::collection::vec(any::<u64>(), 16),
    ) {
        let f = Field::new(q).unwrap();
        let n = (q as u64).pow(k as u32);
        let list: Vec<VectorFq> = seeds[..n as usize].iter().map(|s| VectorFq::from_code(k, q, 1 + s % (n - 1))).collect();
        let m = construct_double_all_nonzero(k, q).unwrap().matrix;
        let plan = plan_batch_double(k, q, &list).unwrap();
        let l = RequestList::new(&f, k, &list).unwrap();
        prop_assert!(verify_plan(&m, &l, &plan));
    }
}

#[test]
fn hall_orderings_for_lists_with_heavy_repetition() {
    for (k, q) in [(2usize, 5u32), (3, 3), (4, 2), (2, 4), (3, 4), (2, 7)] {
        let f = Field::new(q).unwrap();
        let n = (q as usize).pow(k as u32);
        for pattern in 0..4 {
            let codes: Vec<u64> = (0..n)
                .map(|i| match pattern {
                    0 => 0,
                    1 => 1,
                    2 => (i % 2) as u64,
                    _ => 1 + (i < n / 2) as u64,
                })
                .collect();
            let list = zero_sum_list(k, q, &codes);
            let h = hall_ordering(k, q, &list).unwrap();
            assert!(h.is_valid(&f), "k={k} q={q} pattern {pattern}");
        }
    }
}
