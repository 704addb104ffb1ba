//! Vectors, projective points and column-multiset matrices over GF(q).

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::gf::{Field, FieldElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("the zero vector has no projective point")]
    ZeroVector,
    #[error("column {0} is the zero vector")]
    ZeroColumn(usize),
    #[error("expected dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coordinate index {0} is not an element of the field")]
    InvalidElement(u32),
    #[error("GF({sub}) is not a subfield of GF({big})")]
    IncompatibleDegrees { sub: u32, big: u32 },
}

/// A vector in F_q^k as a list of canonical element indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VectorFq(Vec<FieldElement>);

impl VectorFq {
    pub fn new(coords: Vec<FieldElement>) -> Self {
        VectorFq(coords)
    }

    pub fn zero(k: usize) -> Self {
        VectorFq(vec![FieldElement::ZERO; k])
    }

    /// The `i`-th standard basis vector (0-based).
    pub fn unit(k: usize, i: usize) -> Self {
        let mut v = VectorFq::zero(k);
        v.0[i] = FieldElement::ONE;
        v
    }

    pub fn from_indices(field: &Field, coords: &[u32]) -> Result<Self, LinalgError> {
        coords
            .iter()
            .map(|&c| field.element(c).ok_or(LinalgError::InvalidElement(c)))
            .collect::<Result<Vec<_>, _>>()
            .map(VectorFq)
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.0
    }

    pub fn indices(&self) -> Vec<u32> {
        self.0.iter().map(|c| c.index()).collect()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    /// Position and value of the first nonzero coordinate.
    pub fn leading(&self) -> Option<(usize, FieldElement)> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_zero())
            .map(|(i, &c)| (i, c))
    }

    pub fn add(&self, field: &Field, other: &VectorFq) -> VectorFq {
        VectorFq(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| field.add(a, b))
                .collect(),
        )
    }

    pub fn sub(&self, field: &Field, other: &VectorFq) -> VectorFq {
        VectorFq(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| field.sub(a, b))
                .collect(),
        )
    }

    pub fn scale(&self, field: &Field, s: FieldElement) -> VectorFq {
        VectorFq(self.0.iter().map(|&a| field.mul(a, s)).collect())
    }

    pub fn neg(&self, field: &Field) -> VectorFq {
        VectorFq(self.0.iter().map(|&a| field.neg(a)).collect())
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, field: &Field, s: FieldElement, other: &VectorFq) {
        if s.is_zero() {
            return;
        }
        for (a, &b) in self.0.iter_mut().zip(&other.0) {
            *a = field.add(*a, field.mul(s, b));
        }
    }

    /// Index of this vector in F_q^k ordered lexicographically (first
    /// coordinate most significant).
    pub fn code(&self, q: u32) -> u64 {
        self.0
            .iter()
            .fold(0u64, |acc, c| acc * q as u64 + c.index() as u64)
    }

    pub fn from_code(k: usize, q: u32, mut code: u64) -> VectorFq {
        let mut coords = vec![FieldElement::ZERO; k];
        for slot in coords.iter_mut().rev() {
            *slot = FieldElement::from_index((code % q as u64) as u32);
            code /= q as u64;
        }
        VectorFq(coords)
    }
}

/// Linear combination `sum coeffs[i] * vectors[i]`.
pub fn combine(field: &Field, k: usize, vectors: &[&VectorFq], coeffs: &[FieldElement]) -> VectorFq {
    let mut acc = VectorFq::zero(k);
    for (v, &c) in vectors.iter().zip(coeffs) {
        acc.add_scaled(field, c, v);
    }
    acc
}

/// A point of PG(k-1, q): a nonzero vector whose first nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjectivePoint(VectorFq);

impl ProjectivePoint {
    pub fn rep(&self) -> &VectorFq {
        &self.0
    }

    pub fn into_rep(self) -> VectorFq {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }
}

/// Scales `v` so that its first nonzero coordinate is 1.
pub fn projective_canonical(field: &Field, v: &VectorFq) -> Result<ProjectivePoint, LinalgError> {
    canonicalize(field, v).map(|(p, _)| p)
}

/// Canonical point of `v` together with the scalar `s` such that
/// `v = s * rep`.
pub fn canonicalize(
    field: &Field,
    v: &VectorFq,
) -> Result<(ProjectivePoint, FieldElement), LinalgError> {
    let (_, lead) = v.leading().ok_or(LinalgError::ZeroVector)?;
    let inv = field.inv(lead).expect("leading coordinate is nonzero");
    Ok((ProjectivePoint(v.scale(field, inv)), lead))
}

/// Index arithmetic for the points of PG(k-1, q) in lexicographic order of
/// their canonical representatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProjectiveSpace {
    k: usize,
    q: u32,
}

impl ProjectiveSpace {
    pub fn new(k: usize, q: u32) -> Self {
        assert!(k >= 1, "dimension must be positive");
        ProjectiveSpace { k, q }
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// (q^k - 1) / (q - 1)
    pub fn point_count(&self) -> usize {
        points_count(self.k, self.q) as usize
    }

    /// Number of points whose leading coordinate sits strictly after `pos`.
    fn count_after(&self, pos: usize) -> u64 {
        points_count(self.k - 1 - pos, self.q)
    }

    /// Index of a canonical point.
    pub fn index_of(&self, p: &ProjectivePoint) -> usize {
        self.index_of_rep(p.rep().coords())
    }

    /// Index of a canonical representative given as raw coordinates.
    pub fn index_of_rep(&self, coords: &[FieldElement]) -> usize {
        let lead = coords
            .iter()
            .position(|c| !c.is_zero())
            .expect("canonical representative is nonzero");
        debug_assert_eq!(coords[lead], FieldElement::ONE);
        let tail = coords[lead + 1..]
            .iter()
            .fold(0u64, |acc, c| acc * self.q as u64 + c.index() as u64);
        (self.count_after(lead) + tail) as usize
    }

    /// Canonical representative of the point with the given index.
    pub fn point(&self, mut index: usize) -> ProjectivePoint {
        assert!(index < self.point_count(), "point index out of range");
        // leading positions k-1, k-2, ..., 0 occupy consecutive blocks
        let mut lead = self.k - 1;
        loop {
            let block = (self.q as u64).pow((self.k - 1 - lead) as u32) as usize;
            if index < block {
                break;
            }
            index -= block;
            lead -= 1;
        }
        let mut coords = vec![FieldElement::ZERO; self.k];
        coords[lead] = FieldElement::ONE;
        let mut rest = index as u64;
        for slot in coords[lead + 1..].iter_mut().rev() {
            *slot = FieldElement::from_index((rest % self.q as u64) as u32);
            rest /= self.q as u64;
        }
        ProjectivePoint(VectorFq(coords))
    }

    pub fn points(&self) -> impl Iterator<Item = ProjectivePoint> + '_ {
        (0..self.point_count()).map(move |i| self.point(i))
    }

    /// Index of the point of the `i`-th standard basis vector.
    pub fn unit_index(&self, i: usize) -> usize {
        self.count_after(i) as usize
    }
}

/// (q^k - 1) / (q - 1) as an integer.
pub fn points_count(k: usize, q: u32) -> u64 {
    (0..k).map(|i| (q as u64).pow(i as u32)).sum()
}

/// All points of PG(k-1, q) in lexicographic order.
pub fn enumerate_projective_points(k: usize, q: u32) -> Vec<ProjectivePoint> {
    ProjectiveSpace::new(k, q).points().collect()
}

/// Rank of the matrix whose columns are `columns`.
pub fn rank(field: &Field, k: usize, columns: &[VectorFq]) -> usize {
    let mut basis = EchelonBasis::new(k);
    columns.iter().filter(|c| basis.insert(field, c)).count()
}

/// Incrementally maintained row-echelon basis of a column span.
#[derive(Debug, Clone)]
pub(crate) struct EchelonBasis {
    k: usize,
    /// (pivot coordinate, vector with 1 at the pivot and 0 at earlier pivots)
    rows: Vec<(usize, VectorFq)>,
}

impl EchelonBasis {
    pub(crate) fn new(k: usize) -> Self {
        EchelonBasis { k, rows: Vec::new() }
    }

    pub(crate) fn len(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, field: &Field, v: &VectorFq) -> VectorFq {
        let mut w = v.clone();
        for (pivot, row) in &self.rows {
            let c = w.0[*pivot];
            if !c.is_zero() {
                w.add_scaled(field, field.neg(c), row);
            }
        }
        w
    }

    /// Adds `v` if it is independent of the current span; reports whether it
    /// was added.
    pub(crate) fn insert(&mut self, field: &Field, v: &VectorFq) -> bool {
        debug_assert_eq!(v.dim(), self.k);
        let w = self.reduce(field, v);
        match w.leading() {
            None => false,
            Some((pivot, lead)) => {
                let w = w.scale(field, field.inv(lead).expect("nonzero"));
                self.rows.push((pivot, w));
                true
            }
        }
    }
}

/// Solves `sum c_j * cols[j] = v`. The returned coefficients come from the
/// reduced row echelon form with every free variable set to zero.
pub fn in_span(field: &Field, v: &VectorFq, cols: &[&VectorFq]) -> Option<Vec<FieldElement>> {
    let k = v.dim();
    let n = cols.len();
    // augmented k x (n + 1) system, row-major
    let mut a: Vec<Vec<FieldElement>> = (0..k)
        .map(|r| {
            let mut row: Vec<FieldElement> = cols.iter().map(|c| c.coords()[r]).collect();
            row.push(v.coords()[r]);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == k {
            break;
        }
        let Some(pr) = (row..k).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, pr);
        let inv = field.inv(a[row][col]).expect("pivot is nonzero");
        for x in a[row].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for r in 0..k {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col];
                for c in 0..=n {
                    let sub = field.mul(f, a[row][c]);
                    a[r][c] = field.sub(a[r][c], sub);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    // inconsistent if some zero row has a nonzero right-hand side
    if a[row..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    let mut coeffs = vec![FieldElement::ZERO; n];
    for (r, &col) in pivots.iter().enumerate() {
        coeffs[col] = a[r][n];
    }
    Some(coeffs)
}

/// A k x n matrix given by its (nonzero) columns, in user order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFq {
    field: Arc<Field>,
    k: usize,
    columns: Vec<VectorFq>,
}

impl MatrixFq {
    pub fn new(field: Arc<Field>, k: usize, columns: Vec<VectorFq>) -> Result<Self, LinalgError> {
        for (i, c) in columns.iter().enumerate() {
            if c.dim() != k {
                return Err(LinalgError::DimensionMismatch {
                    expected: k,
                    found: c.dim(),
                });
            }
            if c.coords().iter().any(|x| x.index() >= field.order()) {
                let bad = c.coords().iter().find(|x| x.index() >= field.order()).unwrap();
                return Err(LinalgError::InvalidElement(bad.index()));
            }
            if c.is_zero() {
                return Err(LinalgError::ZeroColumn(i));
            }
        }
        Ok(MatrixFq { field, k, columns })
    }

    /// Matrix whose columns are the canonical representatives of the given
    /// point indices.
    pub fn from_points(field: Arc<Field>, k: usize, points: &[usize]) -> Self {
        let space = ProjectiveSpace::new(k, field.order());
        let columns = points.iter().map(|&i| space.point(i).into_rep()).collect();
        MatrixFq { field, k, columns }
    }

    pub fn identity(field: Arc<Field>, k: usize) -> Self {
        let columns = (0..k).map(|i| VectorFq::unit(k, i)).collect();
        MatrixFq { field, k, columns }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[VectorFq] {
        &self.columns
    }

    pub fn column(&self, i: usize) -> &VectorFq {
        &self.columns[i]
    }

    pub fn rank(&self) -> usize {
        rank(&self.field, self.k, &self.columns)
    }

    pub fn is_generator(&self) -> bool {
        self.rank() == self.k
    }

    /// Appends the columns of `other` (same field and dimension).
    pub fn concat(&self, other: &MatrixFq) -> MatrixFq {
        assert_eq!(self.k, other.k);
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        MatrixFq {
            field: self.field.clone(),
            k: self.k,
            columns,
        }
    }

    /// `G * M` for a k x k matrix `g` given row-major.
    pub fn left_multiply(&self, g: &[Vec<FieldElement>]) -> MatrixFq {
        let columns = self
            .columns
            .iter()
            .map(|c| mat_vec(&self.field, g, c))
            .collect();
        MatrixFq {
            field: self.field.clone(),
            k: self.k,
            columns,
        }
    }

    /// Projective point index of every column.
    pub fn point_indices(&self) -> Vec<usize> {
        let space = ProjectiveSpace::new(self.k, self.field.order());
        self.columns
            .iter()
            .map(|c| {
                let (p, _) = canonicalize(&self.field, c).expect("columns are nonzero");
                space.index_of(&p)
            })
            .collect()
    }

    /// Columns as sorted `(projective index, scalar)` pairs; equal keys mean
    /// equal column multisets.
    pub fn canonical_key(&self) -> Vec<(usize, u32)> {
        let space = ProjectiveSpace::new(self.k, self.field.order());
        let mut key: Vec<(usize, u32)> = self
            .columns
            .iter()
            .map(|c| {
                let (p, s) = canonicalize(&self.field, c).expect("columns are nonzero");
                (space.index_of(&p), s.index())
            })
            .collect();
        key.sort_unstable();
        key
    }
}

/// Matrix-vector product for a row-major square matrix.
pub fn mat_vec(field: &Field, g: &[Vec<FieldElement>], v: &VectorFq) -> VectorFq {
    VectorFq::new(
        g.iter()
            .map(|row| {
                row.iter()
                    .zip(v.coords())
                    .fold(FieldElement::ZERO, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
            })
            .collect(),
    )
}

/// Result of rewriting a matrix over a subfield.
#[derive(Debug, Clone)]
pub struct Expansion {
    pub matrix: MatrixFq,
    /// Coefficient columns that came out zero and were left out.
    pub dropped: usize,
}

/// Rewrites every column over GF(p^m2) as `m2/m1` coefficient columns over
/// GF(p^m1) with respect to the basis `1, a, a^2, ...` where `a` is the class
/// of `x` in the larger field. Zero coefficient columns are dropped.
pub fn expand_over_subfield(m: &MatrixFq, sub: Arc<Field>) -> Result<Expansion, LinalgError> {
    let big = m.field();
    let err = LinalgError::IncompatibleDegrees {
        sub: sub.order(),
        big: big.order(),
    };
    if sub.characteristic() != big.characteristic() || big.degree() % sub.degree() != 0 {
        return Err(err);
    }
    if sub.degree() == big.degree() {
        return Ok(Expansion {
            matrix: MatrixFq {
                field: sub,
                k: m.k,
                columns: m.columns.clone(),
            },
            dropped: 0,
        });
    }
    let d = (big.degree() / sub.degree()) as usize;
    let embed = subfield_embedding(big, &sub);
    // coordinates of every big-field element in the basis 1, a, ..., a^(d-1)
    let a = big.generator_x();
    let powers: Vec<FieldElement> = (0..d).map(|j| big.pow(a, j as u64)).collect();
    let mut coords = vec![Vec::new(); big.order() as usize];
    let sq = sub.order() as u64;
    for tuple in 0..sq.pow(d as u32) {
        let mut t = tuple;
        let mut c = Vec::with_capacity(d);
        let mut value = FieldElement::ZERO;
        for p in &powers {
            let s = FieldElement::from_index((t % sq) as u32);
            t /= sq;
            value = big.add(value, big.mul(embed[s.index() as usize], *p));
            c.push(s);
        }
        debug_assert!(coords[value.index() as usize].is_empty(), "basis is not independent");
        coords[value.index() as usize] = c;
    }
    let mut columns = Vec::new();
    let mut dropped = 0;
    for col in &m.columns {
        for j in 0..d {
            let v = VectorFq::new(
                col.coords()
                    .iter()
                    .map(|x| coords[x.index() as usize][j])
                    .collect(),
            );
            if v.is_zero() {
                dropped += 1;
            } else {
                columns.push(v);
            }
        }
    }
    Ok(Expansion {
        matrix: MatrixFq {
            field: sub,
            k: m.k,
            columns,
        },
        dropped,
    })
}

/// Image of every element of `sub` inside `big`, sending the class of `x` in
/// `sub` to the smallest-index root of the modulus of `sub` in `big`.
fn subfield_embedding(big: &Field, sub: &Field) -> Vec<FieldElement> {
    let p = sub.characteristic();
    if sub.degree() == 1 {
        return (0..p).map(FieldElement::from_index).collect();
    }
    let modulus = sub.modulus();
    let eval = |y: FieldElement| {
        modulus.iter().rev().fold(FieldElement::ZERO, |acc, &c| {
            big.add(big.mul(acc, y), FieldElement::from_index(c))
        })
    };
    let root = big
        .elements()
        .find(|&y| eval(y).is_zero())
        .expect("subfield modulus splits in the extension");
    (0..sub.order())
        .map(|idx| {
            // idx has base-p digits c_0 + c_1 x + ...
            let mut acc = FieldElement::ZERO;
            let mut power = FieldElement::ONE;
            let mut rest = idx;
            for _ in 0..sub.degree() {
                let c = FieldElement::from_index(rest % p);
                rest /= p;
                acc = big.add(acc, big.mul(c, power));
                power = big.mul(power, root);
            }
            acc
        })
        .collect()
}
