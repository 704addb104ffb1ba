//! Exponential reference implementation of serving, for cross-checks.

use std::collections::HashSet;

use fbpir_core::{MatrixFq, VectorFq};

/// Codes of every vector in the span of each column subset, indexed by
/// bitmask.
fn subset_spans(m: &MatrixFq) -> Vec<HashSet<u64>> {
    let f = m.field();
    let q = f.order();
    let n = m.n();
    assert!(n <= 16, "oracle limited to 16 columns");
    let mut spans: Vec<HashSet<u64>> = Vec::with_capacity(1 << n);
    spans.push(HashSet::from([0]));
    for mask in 1usize..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        let col = m.column(low);
        let mut set = HashSet::new();
        for &code in &spans[mask & (mask - 1)] {
            for a in f.elements() {
                let mut v = VectorFq::from_code(m.k(), q, code);
                v.add_scaled(f, a, col);
                set.insert(v.code(q));
            }
        }
        spans.push(set);
    }
    spans
}

/// Whether disjoint column sets exist, one spanning each request, by trying
/// every map from columns to requests or to nobody.
pub fn oracle_can_serve(m: &MatrixFq, requests: &[VectorFq]) -> bool {
    let q = m.field().order();
    let spans = subset_spans(m);
    let targets: Vec<u64> = requests.iter().map(|v| v.code(q)).collect();
    let (n, t) = (m.n(), requests.len());
    let mut owner = vec![0usize; n];
    loop {
        let mut masks = vec![0usize; t];
        for (i, &o) in owner.iter().enumerate() {
            if o > 0 {
                masks[o - 1] |= 1 << i;
            }
        }
        if masks
            .iter()
            .zip(&targets)
            .all(|(&mask, code)| mask != 0 && spans[mask].contains(code))
        {
            return true;
        }
        // next map in base t + 1
        let mut i = 0;
        loop {
            if i == n {
                return false;
            }
            owner[i] += 1;
            if owner[i] <= t {
                break;
            }
            owner[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use fbpir_core::Field;

    #[test]
    fn identity_examples() {
        let f = Arc::new(Field::new(2).unwrap());
        let m = MatrixFq::identity(f.clone(), 2);
        let e1 = VectorFq::unit(2, 0);
        let e2 = VectorFq::unit(2, 1);
        assert!(oracle_can_serve(&m, &[e1.clone(), e2.clone()]));
        assert!(!oracle_can_serve(&m, &[e1.clone(), e1.clone()]));
        let sum = e1.add(&f, &e2);
        assert!(oracle_can_serve(&m, &[sum.clone()]));
        assert!(!oracle_can_serve(&m, &[sum, e1]));
    }

    #[test]
    fn works_over_extension_fields() {
        let f = Arc::new(Field::new(4).unwrap());
        let a = f.generator_x();
        let v = VectorFq::new(vec![a, fbpir_core::FieldElement::ONE]);
        let m = MatrixFq::new(f.clone(), 2, vec![VectorFq::unit(2, 0), VectorFq::unit(2, 1), v.clone()]).unwrap();
        assert!(oracle_can_serve(&m, &[v.clone(), v.scale(&f, a)]));
        assert!(!oracle_can_serve(&m, &[v.clone(), v.clone(), v]));
    }
}
