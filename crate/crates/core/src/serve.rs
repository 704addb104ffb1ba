//! Serving request lists with disjoint recovery sets, and the functional PIR
//! and functional batch properties.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::gf::{Field, FieldElement};
use crate::linalg::{
    canonicalize, combine, EchelonBasis, LinalgError, MatrixFq, ProjectivePoint, ProjectiveSpace,
    VectorFq,
};
use crate::multiset::{advance, multiset_count};

/// Default cap on the number of request multisets a batch check enumerates.
pub const DEFAULT_MAX_MULTISETS: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ServeError {
    #[error("{count} request lists exceed the budget of {budget}")]
    InstanceTooLarge { count: u128, budget: u64 },
    #[error("search node budget of {0} exhausted")]
    BudgetExceeded(u64),
    #[error("matrix and request list disagree on field or dimension")]
    Mismatch,
    #[error("request list must contain at least one request")]
    EmptyRequestList,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A multiset of requests stored as canonical points with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RequestList {
    k: usize,
    q: u32,
    /// Sorted by point, multiplicities positive.
    entries: Vec<(ProjectivePoint, u32)>,
}

impl RequestList {
    /// Builds a list from raw vectors, canonicalizing and merging repeats.
    pub fn new(field: &Field, k: usize, vectors: &[VectorFq]) -> Result<Self, ServeError> {
        let pairs: Vec<(VectorFq, u32)> = vectors.iter().map(|v| (v.clone(), 1)).collect();
        Self::with_multiplicities(field, k, &pairs)
    }

    pub fn with_multiplicities(
        field: &Field,
        k: usize,
        vectors: &[(VectorFq, u32)],
    ) -> Result<Self, ServeError> {
        let mut merged: BTreeMap<ProjectivePoint, u32> = BTreeMap::new();
        for (v, mult) in vectors {
            if v.dim() != k {
                return Err(LinalgError::DimensionMismatch {
                    expected: k,
                    found: v.dim(),
                }
                .into());
            }
            if *mult == 0 {
                continue;
            }
            let (p, _) = canonicalize(field, v)?;
            *merged.entry(p).or_insert(0) += mult;
        }
        if merged.is_empty() {
            return Err(ServeError::EmptyRequestList);
        }
        Ok(RequestList {
            k,
            q: field.order(),
            entries: merged.into_iter().collect(),
        })
    }

    /// Builds a list from point indices of PG(k-1, q), repeats allowed.
    pub fn from_point_indices(k: usize, q: u32, points: &[usize]) -> Self {
        let space = ProjectiveSpace::new(k, q);
        let mut merged: BTreeMap<usize, u32> = BTreeMap::new();
        for &p in points {
            *merged.entry(p).or_insert(0) += 1;
        }
        RequestList {
            k,
            q,
            entries: merged.into_iter().map(|(p, m)| (space.point(p), m)).collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn entries(&self) -> &[(ProjectivePoint, u32)] {
        &self.entries
    }

    /// Total number of requests counted with multiplicity.
    pub fn total(&self) -> usize {
        self.entries.iter().map(|(_, m)| *m as usize).sum()
    }

    /// Requests expanded with multiplicity, in entry order.
    pub fn expanded(&self) -> Vec<&ProjectivePoint> {
        self.entries
            .iter()
            .flat_map(|(p, m)| core::iter::repeat(p).take(*m as usize))
            .collect()
    }
}

/// One recovery set: `sum coefficients[j] * column[indices[j]] = scalar * request`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub request: ProjectivePoint,
    pub indices: Vec<usize>,
    pub coefficients: Vec<FieldElement>,
    pub scalar: FieldElement,
}

impl Assignment {
    /// Computes the served point and scalar from the actual combination.
    pub fn from_witness(
        m: &MatrixFq,
        indices: Vec<usize>,
        coefficients: Vec<FieldElement>,
    ) -> Result<Self, LinalgError> {
        let cols: Vec<&VectorFq> = indices.iter().map(|&i| m.column(i)).collect();
        let sum = combine(m.field(), m.k(), &cols, &coefficients);
        let (request, scalar) = canonicalize(m.field(), &sum)?;
        Ok(Assignment {
            request,
            indices,
            coefficients,
            scalar,
        })
    }
}

/// Disjoint recovery sets, one per request.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RecoveryPlan {
    pub assignments: Vec<Assignment>,
}

impl RecoveryPlan {
    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn columns_used(&self) -> usize {
        self.assignments.iter().map(|a| a.indices.len()).sum()
    }
}

/// A minimal recovery set with its coefficient witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoverySet {
    pub indices: Vec<usize>,
    pub coefficients: Vec<FieldElement>,
}

/// All inclusion-minimal recovery sets for `v` of size at most `max_size`,
/// by increasing size and then lexicographically (0-based indices).
pub fn minimal_recovery_sets(m: &MatrixFq, v: &ProjectivePoint, max_size: usize) -> Vec<RecoverySet> {
    let field = m.field();
    let n = m.n();
    let mut out = Vec::new();
    for size in 1..=max_size.min(n).min(m.k()) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            // minimal iff the columns are independent and every coefficient is nonzero
            let cols: Vec<VectorFq> = idx.iter().map(|&i| m.column(i).clone()).collect();
            if crate::linalg::rank(field, m.k(), &cols) == size {
                let refs: Vec<&VectorFq> = cols.iter().collect();
                if let Some(c) = crate::linalg::in_span(field, v.rep(), &refs) {
                    if c.iter().all(|x| !x.is_zero()) {
                        out.push(RecoverySet {
                            indices: idx.clone(),
                            coefficients: c,
                        });
                    }
                }
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
    }
    out
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let r = idx.len();
    let mut i = r;
    while i > 0 {
        i -= 1;
        if idx[i] < n - r + i {
            idx[i] += 1;
            for j in i + 1..r {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// A recovery pattern at the level of column types: one column from each
/// listed type, combined with coefficients relative to the type
/// representatives, sums to the representative of the served point.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Pattern {
    types: Vec<u32>,
    coeffs: Vec<FieldElement>,
}

/// Columns grouped by projective point, with every minimal recovery pattern
/// for every point in their span.
#[derive(Debug, Clone)]
pub struct ServeContext<'a> {
    field: &'a Field,
    k: usize,
    space: ProjectiveSpace,
    /// Point index of each type, increasing.
    type_points: Vec<usize>,
    /// Concrete columns of each type: (column index, scalar relative to the rep).
    type_columns: Vec<Vec<(usize, FieldElement)>>,
    patterns: BTreeMap<usize, Vec<Pattern>>,
    n: usize,
}

impl<'a> ServeContext<'a> {
    pub fn from_matrix(m: &'a MatrixFq) -> Self {
        let field: &Field = m.field();
        let space = ProjectiveSpace::new(m.k(), field.order());
        let mut by_point: BTreeMap<usize, Vec<(usize, FieldElement)>> = BTreeMap::new();
        for (i, c) in m.columns().iter().enumerate() {
            let (p, s) = canonicalize(field, c).expect("columns are nonzero");
            by_point.entry(space.index_of(&p)).or_default().push((i, s));
        }
        Self::build(field, m.k(), space, by_point, m.n())
    }

    /// Context for the matrix whose columns are the representatives of the
    /// given point indices, in that order.
    pub fn from_points(field: &'a Field, k: usize, points: &[usize]) -> Self {
        let space = ProjectiveSpace::new(k, field.order());
        let mut by_point: BTreeMap<usize, Vec<(usize, FieldElement)>> = BTreeMap::new();
        for (i, &p) in points.iter().enumerate() {
            by_point.entry(p).or_default().push((i, FieldElement::ONE));
        }
        Self::build(field, k, space, by_point, points.len())
    }

    fn build(
        field: &'a Field,
        k: usize,
        space: ProjectiveSpace,
        by_point: BTreeMap<usize, Vec<(usize, FieldElement)>>,
        n: usize,
    ) -> Self {
        let (type_points, type_columns): (Vec<_>, Vec<_>) = by_point.into_iter().unzip();
        let mut ctx = ServeContext {
            field,
            k,
            space,
            type_points,
            type_columns,
            patterns: BTreeMap::new(),
            n,
        };
        ctx.build_patterns();
        ctx
    }

    fn build_patterns(&mut self) {
        let reps: Vec<VectorFq> = self
            .type_points
            .iter()
            .map(|&p| self.space.point(p).into_rep())
            .collect();
        let mut patterns: BTreeMap<usize, Vec<Pattern>> = BTreeMap::new();
        // (sum, coefficients) for every combination with leading coefficient 1
        let mut stack_types: Vec<u32> = Vec::new();
        let sums: Vec<(VectorFq, Vec<FieldElement>)> = vec![(VectorFq::zero(self.k), Vec::new())];
        self.extend_patterns(&reps, 0, &EchelonBasis::new(self.k), &mut stack_types, &sums, &mut patterns);
        for list in patterns.values_mut() {
            list.sort_by(|a, b| a.types.len().cmp(&b.types.len()).then_with(|| a.types.cmp(&b.types)));
        }
        self.patterns = patterns;
    }

    fn extend_patterns(
        &self,
        reps: &[VectorFq],
        from: usize,
        basis: &EchelonBasis,
        types: &mut Vec<u32>,
        sums: &[(VectorFq, Vec<FieldElement>)],
        out: &mut BTreeMap<usize, Vec<Pattern>>,
    ) {
        let f = self.field;
        for ty in from..reps.len() {
            let mut b = basis.clone();
            if !b.insert(f, &reps[ty]) {
                continue;
            }
            let mut next = Vec::new();
            let first = types.is_empty();
            for (s, c) in sums {
                for a in f.nonzero_elements() {
                    if first && a != FieldElement::ONE {
                        continue;
                    }
                    let mut v = s.clone();
                    v.add_scaled(f, a, &reps[ty]);
                    let mut cc = c.clone();
                    cc.push(a);
                    next.push((v, cc));
                }
            }
            types.push(ty as u32);
            for (v, c) in &next {
                let (p, lambda) = canonicalize(f, v).expect("independent combination is nonzero");
                let inv = f.inv(lambda).expect("nonzero");
                out.entry(self.space.index_of(&p)).or_default().push(Pattern {
                    types: types.clone(),
                    coeffs: c.iter().map(|&x| f.mul(x, inv)).collect(),
                });
            }
            if b.len() < self.k {
                self.extend_patterns(reps, ty + 1, &b, types, &next, out);
            }
            types.pop();
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of columns on the point with the given index.
    pub fn count_on(&self, point: usize) -> usize {
        match self.type_points.binary_search(&point) {
            Ok(t) => self.type_columns[t].len(),
            Err(_) => 0,
        }
    }

    /// Number of minimal recovery patterns for a point.
    pub fn pattern_count(&self, point: usize) -> usize {
        self.patterns.get(&point).map_or(0, |p| p.len())
    }

    /// Decides whether the requests `(point index, multiplicity)` can be served.
    /// Returns the chosen pattern for every request copy on success.
    fn pack(
        &self,
        requests: &[(usize, u32)],
        max_nodes: Option<u64>,
    ) -> Result<Option<Vec<(usize, usize)>>, ServeError> {
        let empty: Vec<Pattern> = Vec::new();
        let pats: Vec<&Vec<Pattern>> = requests
            .iter()
            .map(|(p, _)| self.patterns.get(p).unwrap_or(&empty))
            .collect();
        let mut st = PackState {
            caps: self.type_columns.iter().map(|c| c.len() as u32).collect(),
            need: requests.iter().map(|r| r.1).collect(),
            last: vec![0; requests.len()],
            remaining: self.n as u64,
            chosen: Vec::new(),
            nodes: 0,
            max_nodes,
        };
        if st.search(&pats)? {
            Ok(Some(st.chosen))
        } else {
            Ok(None)
        }
    }

    /// True when the request multiset can be served.
    pub fn serves(&self, requests: &[(usize, u32)], max_nodes: Option<u64>) -> Result<bool, ServeError> {
        Ok(self.pack(requests, max_nodes)?.is_some())
    }

    /// Builds a concrete plan for a request list.
    pub fn plan(&self, list: &RequestList, max_nodes: Option<u64>) -> Result<Option<RecoveryPlan>, ServeError> {
        if list.k() != self.k || list.q() != self.field.order() {
            return Err(ServeError::Mismatch);
        }
        let requests: Vec<(usize, u32)> = list
            .entries()
            .iter()
            .map(|(p, m)| (self.space.index_of(p), *m))
            .collect();
        let Some(chosen) = self.pack(&requests, max_nodes)? else {
            return Ok(None);
        };
        let f = self.field;
        let mut next_col = vec![0usize; self.type_columns.len()];
        let mut per_request: Vec<Vec<Assignment>> = vec![Vec::new(); requests.len()];
        for (r, pi) in chosen {
            let pat = &self.patterns[&requests[r].0][pi];
            let mut indices = Vec::with_capacity(pat.types.len());
            let mut coefficients = Vec::with_capacity(pat.types.len());
            for (&ty, &c) in pat.types.iter().zip(&pat.coeffs) {
                let ty = ty as usize;
                let (col, mu) = self.type_columns[ty][next_col[ty]];
                next_col[ty] += 1;
                indices.push(col);
                coefficients.push(f.div(c, mu).expect("column scalar is nonzero"));
            }
            per_request[r].push(Assignment {
                request: list.entries()[r].0.clone(),
                indices,
                coefficients,
                scalar: FieldElement::ONE,
            });
        }
        Ok(Some(RecoveryPlan {
            assignments: per_request.into_iter().flatten().collect(),
        }))
    }

    /// Point indices with the standard basis points first, then the rest in
    /// lexicographic order.
    pub fn check_order(&self) -> Vec<usize> {
        check_order(&self.space)
    }

    /// First point whose `t`-fold repetition cannot be served, if any.
    pub fn pir_failure(&self, t: u32, max_nodes: Option<u64>) -> Result<Option<usize>, ServeError> {
        for p in self.check_order() {
            if !self.quick_possible(p, t) || !self.serves(&[(p, t)], max_nodes)? {
                return Ok(Some(p));
            }
        }
        Ok(None)
    }

    /// First request multiset of size `t` that cannot be served, if any.
    pub fn batch_failure(&self, t: u32, limits: &Limits) -> Result<Option<Vec<usize>>, ServeError> {
        if t == 0 {
            return Ok(None);
        }
        let points = self.space.point_count();
        let count = multiset_count(points as u64, t as u64);
        if count > limits.max_multisets as u128 {
            return Err(ServeError::InstanceTooLarge {
                count,
                budget: limits.max_multisets,
            });
        }
        if let Some(p) = self.pir_failure(t, limits.max_nodes)? {
            return Ok(Some(vec![p; t as usize]));
        }
        let mut seq = vec![0usize; t as usize];
        let mut reqs: Vec<(usize, u32)> = Vec::with_capacity(t as usize);
        loop {
            if seq[0] != seq[t as usize - 1] {
                reqs.clear();
                for &p in &seq {
                    match reqs.last_mut() {
                        Some((q, m)) if *q == p => *m += 1,
                        _ => reqs.push((p, 1)),
                    }
                }
                if !self.serves(&reqs, limits.max_nodes)? {
                    return Ok(Some(seq));
                }
            }
            if !advance(&mut seq, points) {
                return Ok(None);
            }
        }
    }

    /// Necessary condition for serving `p` with multiplicity `t`: sets that
    /// avoid the columns on `p` need at least two columns.
    fn quick_possible(&self, p: usize, t: u32) -> bool {
        let on = self.count_on(p) as u64;
        let t = t as u64;
        on >= t || self.n as u64 >= 2 * t - on
    }
}

struct PackState {
    caps: Vec<u32>,
    need: Vec<u32>,
    last: Vec<usize>,
    remaining: u64,
    chosen: Vec<(usize, usize)>,
    nodes: u64,
    max_nodes: Option<u64>,
}

impl PackState {
    fn feasible(&self, p: &Pattern) -> bool {
        p.types.iter().all(|&t| self.caps[t as usize] > 0)
    }

    fn search(&mut self, pats: &[&Vec<Pattern>]) -> Result<bool, ServeError> {
        self.nodes += 1;
        if let Some(max) = self.max_nodes {
            if self.nodes > max {
                return Err(ServeError::BudgetExceeded(max));
            }
        }
        // most constrained open request
        let mut best: Option<(usize, usize)> = None;
        let mut demand: u64 = 0;
        for r in 0..self.need.len() {
            if self.need[r] == 0 {
                continue;
            }
            let mut count = 0;
            let mut min_size = usize::MAX;
            for p in &pats[r][self.last[r]..] {
                if self.feasible(p) {
                    count += 1;
                    min_size = min_size.min(p.types.len());
                }
            }
            if count == 0 {
                return Ok(false);
            }
            demand += self.need[r] as u64 * min_size as u64;
            if best.map_or(true, |(_, c)| count < c) {
                best = Some((r, count));
            }
        }
        let Some((r, _)) = best else {
            return Ok(true);
        };
        if demand > self.remaining {
            return Ok(false);
        }
        let saved_last = self.last[r];
        for j in saved_last..pats[r].len() {
            let p = &pats[r][j];
            if !self.feasible(p) {
                continue;
            }
            for &t in &p.types {
                self.caps[t as usize] -= 1;
            }
            self.remaining -= p.types.len() as u64;
            self.need[r] -= 1;
            self.last[r] = j;
            self.chosen.push((r, j));
            if self.search(pats)? {
                return Ok(true);
            }
            self.chosen.pop();
            self.need[r] += 1;
            self.remaining += p.types.len() as u64;
            for &t in &p.types {
                self.caps[t as usize] += 1;
            }
        }
        self.last[r] = saved_last;
        Ok(false)
    }
}

/// Standard basis points first, then every other point in lexicographic order.
pub fn check_order(space: &ProjectiveSpace) -> Vec<usize> {
    let units: Vec<usize> = (0..space.dim()).map(|i| space.unit_index(i)).collect();
    let mut order = units.clone();
    order.extend((0..space.point_count()).filter(|p| !units.contains(p)));
    order
}

/// Search limits for property checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Node cap for each individual serving search.
    pub max_nodes: Option<u64>,
    /// Cap on the number of request multisets a batch check may enumerate.
    pub max_multisets: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_nodes: None,
            max_multisets: DEFAULT_MAX_MULTISETS,
        }
    }
}

/// Outcome of a property check: it holds, or fails with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check<W> {
    Holds,
    Fails(W),
}

impl<W> Check<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Check::Holds)
    }
}

fn check_compatible(m: &MatrixFq, l: &RequestList) -> Result<(), ServeError> {
    if m.k() != l.k() || m.field().order() != l.q() {
        Err(ServeError::Mismatch)
    } else {
        Ok(())
    }
}

/// Finds disjoint recovery sets for every request, or proves none exist.
pub fn can_serve(m: &MatrixFq, l: &RequestList) -> Result<Option<RecoveryPlan>, ServeError> {
    can_serve_limited(m, l, None)
}

pub fn can_serve_limited(
    m: &MatrixFq,
    l: &RequestList,
    max_nodes: Option<u64>,
) -> Result<Option<RecoveryPlan>, ServeError> {
    check_compatible(m, l)?;
    ServeContext::from_matrix(m).plan(l, max_nodes)
}

/// Checks a plan by direct arithmetic.
pub fn verify_plan(m: &MatrixFq, l: &RequestList, plan: &RecoveryPlan) -> bool {
    if check_compatible(m, l).is_err() || plan.len() != l.total() {
        return false;
    }
    let f = m.field();
    let mut used = vec![false; m.n()];
    let mut served: BTreeMap<&ProjectivePoint, u32> = BTreeMap::new();
    for a in &plan.assignments {
        if a.indices.is_empty() || a.indices.len() != a.coefficients.len() || a.scalar.is_zero() {
            return false;
        }
        if a.request.dim() != m.k() || a.request.rep().leading().map(|(_, c)| c) != Some(FieldElement::ONE) {
            return false;
        }
        for &i in &a.indices {
            if i >= m.n() || used[i] {
                return false;
            }
            used[i] = true;
        }
        let cols: Vec<&VectorFq> = a.indices.iter().map(|&i| m.column(i)).collect();
        let sum = combine(f, m.k(), &cols, &a.coefficients);
        if sum != a.request.rep().scale(f, a.scalar) {
            return false;
        }
        *served.entry(&a.request).or_insert(0) += 1;
    }
    let wanted: BTreeMap<&ProjectivePoint, u32> = l.entries().iter().map(|(p, m)| (p, *m)).collect();
    served == wanted
}

/// Whether `m` serves the `t`-fold repetition of every nonzero vector; on
/// failure, the first point (basis points first) that cannot be served.
pub fn is_functional_pir(m: &MatrixFq, t: u32, limits: &Limits) -> Result<Check<ProjectivePoint>, ServeError> {
    let ctx = ServeContext::from_matrix(m);
    Ok(match ctx.pir_failure(t, limits.max_nodes)? {
        None => Check::Holds,
        Some(p) => Check::Fails(ctx.space.point(p)),
    })
}

/// Whether `m` serves every list of `t` nonzero vectors; on failure, a list
/// that cannot be served.
pub fn is_functional_batch(m: &MatrixFq, t: u32, limits: &Limits) -> Result<Check<RequestList>, ServeError> {
    let ctx = ServeContext::from_matrix(m);
    Ok(match ctx.batch_failure(t, limits)? {
        None => Check::Holds,
        Some(seq) => Check::Fails(RequestList::from_point_indices(m.k(), m.field().order(), &seq)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::sync::Arc;

    fn field(q: u32) -> Arc<Field> {
        Arc::new(Field::new(q).unwrap())
    }

    fn mat(f: &Arc<Field>, k: usize, cols: &[&[u32]]) -> MatrixFq {
        let cols = cols.iter().map(|c| VectorFq::from_indices(f, c).unwrap()).collect();
        MatrixFq::new(f.clone(), k, cols).unwrap()
    }

    fn list(f: &Field, k: usize, vs: &[&[u32]]) -> RequestList {
        let vs: Vec<VectorFq> = vs.iter().map(|c| VectorFq::from_indices(f, c).unwrap()).collect();
        RequestList::new(f, k, &vs).unwrap()
    }

    fn point(f: &Field, c: &[u32]) -> ProjectivePoint {
        crate::linalg::projective_canonical(f, &VectorFq::from_indices(f, c).unwrap()).unwrap()
    }

    fn sets(rs: &[RecoverySet]) -> Vec<Vec<usize>> {
        rs.iter().map(|r| r.indices.iter().map(|i| i + 1).collect()).collect()
    }

    #[test]
    fn minimal_sets_examples() {
        let f2 = field(2);
        let m = mat(&f2, 2, &[&[1, 0], &[0, 1]]);
        assert_eq!(sets(&minimal_recovery_sets(&m, &point(&f2, &[1, 1]), 2)), vec![vec![1, 2]]);
        let m = mat(&f2, 2, &[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(
            sets(&minimal_recovery_sets(&m, &point(&f2, &[1, 1]), 2)),
            vec![vec![3], vec![1, 2]]
        );
        let f3 = field(3);
        let m = mat(&f3, 2, &[&[1, 0], &[1, 1], &[1, 2]]);
        assert_eq!(
            sets(&minimal_recovery_sets(&m, &point(&f3, &[0, 1]), 2)),
            vec![vec![1, 2], vec![1, 3], vec![2, 3]]
        );
    }

    #[test]
    fn serve_examples() {
        let f2 = field(2);
        let i2 = MatrixFq::identity(f2.clone(), 2);
        let l = list(&f2, 2, &[&[1, 0], &[0, 1]]);
        let plan = can_serve(&i2, &l).unwrap().unwrap();
        assert!(verify_plan(&i2, &l, &plan));
        let mut idx: Vec<Vec<usize>> = plan.assignments.iter().map(|a| a.indices.clone()).collect();
        idx.sort();
        assert_eq!(idx, vec![vec![0], vec![1]]);

        let l = list(&f2, 2, &[&[1, 0], &[1, 0]]);
        assert_eq!(can_serve(&i2, &l).unwrap(), None);

        let m = mat(&f2, 2, &[&[0, 1], &[1, 0], &[1, 1]]);
        let l = list(&f2, 2, &[&[1, 1], &[1, 1]]);
        let plan = can_serve(&m, &l).unwrap().unwrap();
        assert!(verify_plan(&m, &l, &plan));
        let mut idx: Vec<Vec<usize>> = plan.assignments.iter().map(|a| a.indices.clone()).collect();
        idx.sort();
        assert_eq!(idx, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn verify_plan_rejects_overlap_and_accepts_scaled() {
        let f2 = field(2);
        let m = mat(&f2, 2, &[&[1, 0], &[0, 1], &[1, 1]]);
        let l = list(&f2, 2, &[&[1, 0], &[1, 1]]);
        let bad = RecoveryPlan {
            assignments: vec![
                Assignment {
                    request: point(&f2, &[1, 0]),
                    indices: vec![0],
                    coefficients: vec![FieldElement::ONE],
                    scalar: FieldElement::ONE,
                },
                Assignment {
                    request: point(&f2, &[1, 1]),
                    indices: vec![0, 1],
                    coefficients: vec![FieldElement::ONE, FieldElement::ONE],
                    scalar: FieldElement::ONE,
                },
            ],
        };
        assert!(!verify_plan(&m, &l, &bad));

        let f3 = field(3);
        let m = mat(&f3, 2, &[&[1, 1]]);
        let l = list(&f3, 2, &[&[1, 1]]);
        let two = FieldElement::from_index(2);
        let plan = RecoveryPlan {
            assignments: vec![Assignment {
                request: point(&f3, &[1, 1]),
                indices: vec![0],
                coefficients: vec![two],
                scalar: two,
            }],
        };
        assert!(verify_plan(&m, &l, &plan));
        let mut wrong = plan.clone();
        wrong.assignments[0].scalar = FieldElement::ONE;
        assert!(!verify_plan(&m, &l, &wrong));
    }

    fn all_nonzero(f: &Arc<Field>, k: usize) -> MatrixFq {
        let q = f.order();
        let cols = (1..(q as u64).pow(k as u32)).map(|c| VectorFq::from_code(k, q, c)).collect();
        MatrixFq::new(f.clone(), k, cols).unwrap()
    }

    #[test]
    fn pir_examples() {
        let lim = Limits::default();
        let f2 = field(2);
        assert!(is_functional_pir(&all_nonzero(&f2, 3), 4, &lim).unwrap().holds());
        assert!(!is_functional_pir(&all_nonzero(&f2, 3), 5, &lim).unwrap().holds());
        let i2 = MatrixFq::identity(f2.clone(), 2);
        assert_eq!(
            is_functional_pir(&i2, 2, &lim).unwrap(),
            Check::Fails(point(&f2, &[1, 0]))
        );
        let f3 = field(3);
        assert!(is_functional_pir(&all_nonzero(&f3, 2), 5, &lim).unwrap().holds());
    }

    #[test]
    fn batch_examples() {
        let lim = Limits::default();
        let f2 = field(2);
        let m = mat(&f2, 2, &[&[1, 0], &[0, 1], &[1, 1]]);
        assert!(is_functional_batch(&m, 2, &lim).unwrap().holds());
        for k in 1..=4 {
            let ik = MatrixFq::identity(f2.clone(), k);
            let mut e1 = vec![0u32; k];
            e1[0] = 1;
            let w = list(&f2, k, &[&e1, &e1]);
            assert_eq!(is_functional_batch(&ik, 2, &lim).unwrap(), Check::Fails(w));
        }
        let g_even = mat(
            &f2,
            4,
            &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 1, 0, 0], &[0, 0, 1, 1]],
        );
        assert!(is_functional_batch(&g_even, 2, &lim).unwrap().holds());
    }

    #[test]
    fn batch_budget() {
        let f2 = field(2);
        let m = all_nonzero(&f2, 3);
        let lim = Limits {
            max_nodes: None,
            max_multisets: 10,
        };
        assert!(matches!(
            is_functional_batch(&m, 3, &lim),
            Err(ServeError::InstanceTooLarge { count: 84, budget: 10 })
        ));
    }

    #[test]
    fn node_budget_is_reported() {
        let f2 = field(2);
        let m = all_nonzero(&f2, 3);
        let l = RequestList::from_point_indices(3, 2, &[0, 0, 0, 0, 1]);
        assert!(matches!(
            can_serve_limited(&m, &l, Some(3)),
            Err(ServeError::BudgetExceeded(3))
        ));
    }

    #[test]
    fn pattern_table_matches_minimal_sets() {
        for (q, k, cols) in [
            (2u32, 3usize, vec![vec![1u32, 0, 0], vec![0, 1, 0], vec![1, 1, 0], vec![1, 1, 1], vec![1, 1, 1], vec![0, 0, 1]]),
            (3, 2, vec![vec![1, 0], vec![2, 0], vec![1, 1], vec![1, 2], vec![0, 2]]),
            (4, 2, vec![vec![1, 0], vec![0, 1], vec![1, 2], vec![3, 3]]),
        ] {
            let f = field(q);
            let refs: Vec<&[u32]> = cols.iter().map(|c| c.as_slice()).collect();
            let m = mat(&f, k, &refs);
            let ctx = ServeContext::from_matrix(&m);
            let space = ProjectiveSpace::new(k, q);
            for p in space.points() {
                let sets = minimal_recovery_sets(&m, &p, k);
                // every pattern expands to (product of type counts) concrete sets
                let pats = ctx.patterns.get(&space.index_of(&p)).cloned().unwrap_or_default();
                let expanded: usize = pats
                    .iter()
                    .map(|pt| pt.types.iter().map(|&t| ctx.type_columns[t as usize].len()).product::<usize>())
                    .sum();
                assert_eq!(expanded, sets.len());
            }
        }
    }
}
