//! Explicit generator matrices and their recovery schemes.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::rngs::SmallRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::bounds::Kind;
use crate::gf::{Field, FieldElement, FieldError};
use crate::linalg::{LinalgError, MatrixFq, ProjectivePoint, VectorFq};
use crate::serve::{Assignment, RecoveryPlan};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("request vectors must be nonzero")]
    ZeroRequest,
    #[error("expected {expected} requests, found {found}")]
    WrongListSize { expected: usize, found: usize },
    #[error("the list does not sum to zero")]
    SumNonzero,
    #[error("the matrix is not the doubled simplex matrix for these parameters")]
    WrongMatrix,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConstructionName {
    K2Projective,
    BinaryT2Even,
    BinaryT2Odd,
    AllNonzeroRepeated,
    DoubleAllNonzero,
}

impl ConstructionName {
    pub const ALL: [ConstructionName; 5] = [
        ConstructionName::K2Projective,
        ConstructionName::BinaryT2Even,
        ConstructionName::BinaryT2Odd,
        ConstructionName::AllNonzeroRepeated,
        ConstructionName::DoubleAllNonzero,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConstructionName::K2Projective => "K2_PROJECTIVE",
            ConstructionName::BinaryT2Even => "BINARY_T2_EVEN",
            ConstructionName::BinaryT2Odd => "BINARY_T2_ODD",
            ConstructionName::AllNonzeroRepeated => "ALL_NONZERO_REPEATED",
            ConstructionName::DoubleAllNonzero => "DOUBLE_ALL_NONZERO",
        }
    }
}

impl fmt::Display for ConstructionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for ConstructionName {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ConstructionName::ALL
            .into_iter()
            .find(|n| n.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| ConstructionError::InvalidParameters(alloc::format!("unknown construction `{s}`")))
    }
}

/// A generator matrix together with the property it is claimed to have.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub name: ConstructionName,
    pub k: usize,
    pub q: u32,
    pub s: Option<u64>,
    pub matrix: MatrixFq,
    pub claimed_kind: Kind,
    pub claimed_t: u64,
}

fn field(q: u32) -> Result<Arc<Field>, ConstructionError> {
    Ok(Arc::new(Field::new(q)?))
}

fn invalid(msg: &str) -> ConstructionError {
    ConstructionError::InvalidParameters(String::from(msg))
}

/// Columns contributed by the first `y < q + 2` requests of the two-point
/// scheme on PG(1, q).
pub fn k2_prefix_length(y: u64, q: u64) -> u64 {
    // odd q: q + 1 = 2h; even q: q = 2h
    let h = if q % 2 == 1 { (q + 1) / 2 } else { q / 2 };
    if y <= h {
        2 * y
    } else if y <= q + 1 {
        2 * h + 1 + 2 * (y - h - 1)
    } else {
        2 * (q + 1)
    }
}

/// Batch code for `k = 2` of length `ceil(2(q+1)t/(q+2))`: `x` doubled copies
/// of PG(1, q) followed by a prefix of the doubled point sequence.
pub fn construct_k2(t: u64, q: u32) -> Result<Construction, ConstructionError> {
    if t == 0 {
        return Err(invalid("t must be positive"));
    }
    let f = field(q)?;
    let qq = q as u64;
    let (x, y) = (t / (qq + 2), t % (qq + 2));
    let points = qq as usize + 1;
    let doubled: Vec<usize> = (0..points).chain(0..points).collect();
    let mut seq = Vec::new();
    for _ in 0..x {
        seq.extend_from_slice(&doubled);
    }
    seq.extend_from_slice(&doubled[..k2_prefix_length(y, qq) as usize]);
    Ok(Construction {
        name: ConstructionName::K2Projective,
        k: 2,
        q,
        s: None,
        matrix: MatrixFq::from_points(f, 2, &seq),
        claimed_kind: Kind::FB,
        claimed_t: t,
    })
}

/// Binary batch code for two requests of length `ceil(3k/2)`.
pub fn construct_binary_t2(k: usize) -> Result<Construction, ConstructionError> {
    if k < 2 {
        return Err(invalid("k must be at least 2"));
    }
    let f = field(2)?;
    let e = |i: usize| VectorFq::unit(k, i);
    let mut cols: Vec<VectorFq> = (0..k).map(e).collect();
    let m = k / 2;
    let name = if k % 2 == 0 {
        for i in 0..m {
            cols.push(e(2 * i).add(&f, &e(2 * i + 1)));
        }
        ConstructionName::BinaryT2Even
    } else {
        for i in 0..m {
            cols.push(e(2 * i + 1).add(&f, &e(2 * i + 2)));
        }
        cols.push(e(0));
        ConstructionName::BinaryT2Odd
    };
    Ok(Construction {
        name,
        k,
        q: 2,
        s: None,
        matrix: MatrixFq::new(f, k, cols)?,
        claimed_kind: Kind::FB,
        claimed_t: 2,
    })
}

fn binary_request(v: &VectorFq, k: usize) -> Result<Vec<bool>, ConstructionError> {
    if v.dim() != k {
        return Err(LinalgError::DimensionMismatch { expected: k, found: v.dim() }.into());
    }
    if v.is_zero() {
        return Err(ConstructionError::ZeroRequest);
    }
    v.coords()
        .iter()
        .map(|c| match c.index() {
            0 => Ok(false),
            1 => Ok(true),
            other => Err(LinalgError::InvalidElement(other).into()),
        })
        .collect()
}

/// Serves `{a, b}` with the binary two-request matrix, one coordinate pair at
/// a time.
pub fn plan_binary_t2(k: usize, a: &VectorFq, b: &VectorFq) -> Result<RecoveryPlan, ConstructionError> {
    let c = construct_binary_t2(k)?;
    let (av, bv) = (binary_request(a, k)?, binary_request(b, k)?);
    let m = k / 2;
    let n = c.matrix.n();
    let (mut sa, mut sb): (Vec<usize>, Vec<usize>) = (Vec::new(), Vec::new());
    if av == bv {
        // every column sums to zero: the support of a, and everything else
        sa = (0..k).filter(|&i| av[i]).collect();
        sb = (0..n).filter(|i| !sa.contains(i)).collect();
    } else {
        let odd = k % 2 == 1;
        // (first coordinate, second coordinate, combined column) per pair
        let pairs: Vec<(usize, usize, usize)> = (0..m)
            .map(|i| {
                let first = if odd { 2 * i + 1 } else { 2 * i };
                (first, first + 1, k + i)
            })
            .collect();
        if odd {
            match (av[0], bv[0]) {
                (true, true) => {
                    sa.push(0);
                    sb.push(n - 1);
                }
                (true, false) => sa.push(0),
                (false, true) => sb.push(0),
                (false, false) => {}
            }
        }
        for (c1, c2, r) in pairs {
            let column_for = |x: (bool, bool)| match x {
                (true, false) => c1,
                (false, true) => c2,
                _ => r,
            };
            let (x, y) = ((av[c1], av[c2]), (bv[c1], bv[c2]));
            let zero = (false, false);
            match (x == zero, y == zero) {
                (true, true) => {}
                (false, true) => sa.push(column_for(x)),
                (true, false) => sb.push(column_for(y)),
                (false, false) if x != y => {
                    sa.push(column_for(x));
                    sb.push(column_for(y));
                }
                (false, false) => {
                    // equal restrictions: a singleton and the other two columns
                    let single = column_for(x);
                    sa.push(single);
                    sb.extend([c1, c2, r].into_iter().filter(|&i| i != single));
                }
            }
        }
    }
    let ones = |len: usize| vec![FieldElement::ONE; len];
    let mk = |mut idx: Vec<usize>| {
        idx.sort_unstable();
        let len = idx.len();
        Assignment::from_witness(&c.matrix, idx, ones(len))
    };
    Ok(RecoveryPlan {
        assignments: vec![mk(sa)?, mk(sb)?],
    })
}

/// Every nonzero vector of F_q^k, repeated `s` times, in code order within
/// each copy. Claims the PIR property for `t = s (q^k + q - 2) / 2`.
pub fn construct_all_nonzero(k: usize, q: u32, s: u64) -> Result<Construction, ConstructionError> {
    if k == 0 || s == 0 {
        return Err(invalid("k and s must be positive"));
    }
    let f = field(q)?;
    let total = (q as u64).pow(k as u32);
    let mut cols = Vec::new();
    for _ in 0..s {
        cols.extend((1..total).map(|c| VectorFq::from_code(k, q, c)));
    }
    Ok(Construction {
        name: ConstructionName::AllNonzeroRepeated,
        k,
        q,
        s: Some(s),
        matrix: MatrixFq::new(f, k, cols)?,
        claimed_kind: Kind::FP,
        claimed_t: s * (total + q as u64 - 2) / 2,
    })
}

/// Every nonzero vector twice. Claims the batch property for `t = q^k`.
pub fn construct_double_all_nonzero(k: usize, q: u32) -> Result<Construction, ConstructionError> {
    let mut c = construct_all_nonzero(k, q, 2)?;
    c.name = ConstructionName::DoubleAllNonzero;
    c.claimed_kind = Kind::FB;
    c.claimed_t = (q as u64).pow(k as u32);
    Ok(c)
}

/// Column index of a nonzero vector within copy `copy` of the repeated
/// simplex matrix.
fn simplex_column(v: &VectorFq, q: u32, copy: usize) -> usize {
    let per_copy = (q as u64).pow(v.dim() as u32) as usize - 1;
    copy * per_copy + v.code(q) as usize - 1
}

/// Serves `v` with multiplicity `s (q^k + q - 2) / 2` using the repeated
/// simplex matrix: the nonzero multiples of `v` as singletons, and the rest
/// of each copy in pairs.
pub fn plan_pir_partition(
    k: usize,
    q: u32,
    v: &ProjectivePoint,
    s: u64,
) -> Result<RecoveryPlan, ConstructionError> {
    let c = construct_all_nonzero(k, q, s)?;
    let f = c.matrix.field().clone();
    let v = v.rep();
    if v.dim() != k {
        return Err(LinalgError::DimensionMismatch { expected: k, found: v.dim() }.into());
    }
    let total = (q as u64).pow(k as u32);
    let even = f.characteristic() == 2;
    let half = if even { FieldElement::ONE } else { f.inv(f.from_integer(2))? };
    let target = if even { v.clone() } else { v.add(&f, v) };
    let mut assignments = Vec::new();
    for copy in 0..s as usize {
        for alpha in f.nonzero_elements() {
            let col = simplex_column(&v.scale(&f, alpha), q, copy);
            assignments.push(Assignment::from_witness(&c.matrix, vec![col], vec![f.inv(alpha)?])?);
        }
        let mut used = vec![false; total as usize];
        for code in 1..total {
            let x = VectorFq::from_code(k, q, code);
            if used[code as usize] || crate::linalg::rank(&f, k, &[v.clone(), x.clone()]) < 2 {
                continue;
            }
            // partner y with half * (x + y) = v
            let y = target.sub(&f, &x);
            let (cx, cy) = (code as usize, y.code(q) as usize);
            used[cx] = true;
            used[cy] = true;
            let mut idx = [(simplex_column(&x, q, copy), half), (simplex_column(&y, q, copy), half)];
            idx.sort_unstable_by_key(|p| p.0);
            assignments.push(Assignment::from_witness(
                &c.matrix,
                idx.iter().map(|p| p.0).collect(),
                idx.iter().map(|p| p.1).collect(),
            )?);
        }
    }
    Ok(RecoveryPlan { assignments })
}

/// An ordering `g_1..g_n` of F_q^k such that `g_i + a_i` is again an ordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HallOrdering {
    pub k: usize,
    pub q: u32,
    pub list: Vec<VectorFq>,
    pub ordering: Vec<VectorFq>,
}

impl HallOrdering {
    /// Checks both permutation conditions directly.
    pub fn is_valid(&self, f: &Field) -> bool {
        let n = (self.q as u64).pow(self.k as u32) as usize;
        if self.list.len() != n || self.ordering.len() != n {
            return false;
        }
        let mut seen_g = vec![false; n];
        let mut seen_h = vec![false; n];
        for (g, a) in self.ordering.iter().zip(&self.list) {
            let (cg, ch) = (g.code(self.q) as usize, g.add(f, a).code(self.q) as usize);
            if seen_g[cg] || seen_h[ch] {
                return false;
            }
            seen_g[cg] = true;
            seen_h[ch] = true;
        }
        true
    }
}

/// Finds an ordering of the whole group F_q^k whose translates by the list
/// also cover the group; exists exactly when the list sums to zero.
pub fn hall_ordering(k: usize, q: u32, list: &[VectorFq]) -> Result<HallOrdering, ConstructionError> {
    let f = Field::new(q)?;
    let n = (q as u64).pow(k as u32) as usize;
    if list.len() != n {
        return Err(ConstructionError::WrongListSize { expected: n, found: list.len() });
    }
    let mut sum = VectorFq::zero(k);
    for a in list {
        if a.dim() != k {
            return Err(LinalgError::DimensionMismatch { expected: k, found: a.dim() }.into());
        }
        sum = sum.add(&f, a);
    }
    if !sum.is_zero() {
        return Err(ConstructionError::SumNonzero);
    }
    let elems: Vec<VectorFq> = (0..n as u64).map(|c| VectorFq::from_code(k, q, c)).collect();
    // shift[i][g] = code of elems[g] + list[i]
    let shift: Vec<Vec<usize>> = list
        .iter()
        .map(|a| elems.iter().map(|g| g.add(&f, a).code(q) as usize).collect())
        .collect();
    let choice = min_conflicts(&shift);
    Ok(HallOrdering {
        k,
        q,
        list: list.to_vec(),
        ordering: choice.iter().map(|&g| elems[g].clone()).collect(),
    })
}

/// Local search over permutations `g` until `i -> shift[i][g[i]]` is also a
/// permutation. Restarts from a fresh shuffle when a round stalls.
fn min_conflicts(shift: &[Vec<usize>]) -> Vec<usize> {
    let n = shift.len();
    let mut rng = SmallRng::seed_from_u64(0x5eed ^ n as u64);
    let steps = 64 * n * n + 256;
    loop {
        let mut g: Vec<usize> = (0..n).collect();
        g.shuffle(&mut rng);
        let mut count = vec![0u32; n];
        for i in 0..n {
            count[shift[i][g[i]]] += 1;
        }
        let mut cost: i64 = count.iter().map(|&c| c.saturating_sub(1) as i64).sum();
        for _ in 0..steps {
            if cost == 0 {
                return g;
            }
            let clashing: Vec<usize> = (0..n).filter(|&i| count[shift[i][g[i]]] > 1).collect();
            let i = *clashing.choose(&mut rng).expect("cost is positive");
            let j = if rng.gen_ratio(1, 10) {
                rng.gen_range(0..n)
            } else {
                let mut best = (i64::MAX, Vec::new());
                for j in (0..n).filter(|&j| j != i) {
                    let d = swap_delta(shift, &g, &mut count, i, j);
                    if d < best.0 {
                        best = (d, vec![j]);
                    } else if d == best.0 {
                        best.1.push(j);
                    }
                }
                *best.1.choose(&mut rng).expect("n >= 2 when positions clash")
            };
            if j == i {
                continue;
            }
            cost += swap_delta(shift, &g, &mut count, i, j);
            apply_swap(shift, &mut g, &mut count, i, j);
        }
    }
}

fn bump(count: &mut [u32], h: usize, up: bool) -> i64 {
    if up {
        count[h] += 1;
        (count[h] > 1) as i64
    } else {
        count[h] -= 1;
        -((count[h] >= 1) as i64)
    }
}

fn apply_swap(shift: &[Vec<usize>], g: &mut [usize], count: &mut [u32], i: usize, j: usize) {
    bump(count, shift[i][g[i]], false);
    bump(count, shift[j][g[j]], false);
    g.swap(i, j);
    bump(count, shift[i][g[i]], true);
    bump(count, shift[j][g[j]], true);
}

/// Change in excess collisions if `g[i]` and `g[j]` were exchanged.
fn swap_delta(shift: &[Vec<usize>], g: &[usize], count: &mut [u32], i: usize, j: usize) -> i64 {
    let (old_i, old_j) = (shift[i][g[i]], shift[j][g[j]]);
    let (new_i, new_j) = (shift[i][g[j]], shift[j][g[i]]);
    let d = bump(count, old_i, false) + bump(count, old_j, false) + bump(count, new_i, true) + bump(count, new_j, true);
    bump(count, new_j, false);
    bump(count, new_i, false);
    bump(count, old_j, true);
    bump(count, old_i, true);
    d
}

/// Serves a list of `q^k` nonzero vectors with the doubled simplex matrix via
/// a Hall ordering. Copy 0 holds the ordering elements, copy 1 their
/// translates.
pub fn plan_batch_double(k: usize, q: u32, list: &[VectorFq]) -> Result<RecoveryPlan, ConstructionError> {
    let c = construct_double_all_nonzero(k, q)?;
    plan_batch_double_on(&c.matrix, list)
}

/// As [`plan_batch_double`], for an explicitly supplied matrix that must be the
/// doubled simplex matrix.
pub fn plan_batch_double_on(m: &MatrixFq, list: &[VectorFq]) -> Result<RecoveryPlan, ConstructionError> {
    let (k, q) = (m.k(), m.field().order());
    let expected = construct_double_all_nonzero(k, q)?;
    if m.columns() != expected.matrix.columns() {
        return Err(ConstructionError::WrongMatrix);
    }
    let f = m.field().clone();
    let n = (q as u64).pow(k as u32) as usize;
    if list.len() != n {
        return Err(ConstructionError::WrongListSize { expected: n, found: list.len() });
    }
    if list.iter().any(|a| a.dim() != k) {
        return Err(LinalgError::DimensionMismatch { expected: k, found: list[0].dim() }.into());
    }
    if list.iter().any(|a| a.is_zero()) {
        return Err(ConstructionError::ZeroRequest);
    }
    let minus_one = f.neg(FieldElement::ONE);
    // the pair {x (copy 1), y (copy 0)} with x - y = a; zero members drop out
    let pair = |x: &VectorFq, y: &VectorFq| -> Result<Assignment, ConstructionError> {
        let mut parts: Vec<(usize, FieldElement)> = Vec::new();
        if !x.is_zero() {
            parts.push((simplex_column(x, q, 1), FieldElement::ONE));
        }
        if !y.is_zero() {
            parts.push((simplex_column(y, q, 0), minus_one));
        }
        parts.sort_unstable_by_key(|p| p.0);
        Ok(Assignment::from_witness(
            m,
            parts.iter().map(|p| p.0).collect(),
            parts.iter().map(|p| p.1).collect(),
        )?)
    };
    let mut assignments = Vec::with_capacity(n);
    if list.iter().all(|a| a == &list[0]) {
        let a = &list[0];
        let h = hall_ordering(k, q, list)?;
        for g in &h.ordering {
            assignments.push(pair(&g.add(&f, a), g)?);
        }
        return Ok(RecoveryPlan { assignments });
    }
    let mut l: Vec<VectorFq> = list.to_vec();
    if l[n - 2] == l[n - 1] {
        let j = l.iter().position(|x| x != &l[n - 1]).expect("not all requests are equal");
        l.swap(j, n - 2);
    }
    let partial = |l: &[VectorFq]| l[..n - 1].iter().fold(VectorFq::zero(k), |acc, x| acc.add(&f, x));
    let mut x_l = partial(&l);
    if x_l.is_zero() {
        l.swap(n - 2, n - 1);
        x_l = partial(&l);
    }
    let mut l_prime = l.clone();
    l_prime[n - 1] = x_l.neg(&f);
    let h = hall_ordering(k, q, &l_prime)?;
    let a_n = &l[n - 1];
    let shift = x_l.sub(&f, &h.ordering[n - 1]).add(&f, a_n);
    for i in 0..n - 1 {
        let base = h.ordering[i].add(&f, &shift);
        assignments.push(pair(&base.add(&f, &l[i]), &base)?);
    }
    assignments.push(Assignment::from_witness(
        m,
        vec![simplex_column(a_n, q, 1)],
        vec![FieldElement::ONE],
    )?);
    Ok(RecoveryPlan { assignments })
}
