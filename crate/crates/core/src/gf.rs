//! Arithmetic in GF(q) for any prime power `q = p^m`.
//!
//! Elements are encoded by their canonical index in `[0, q)`: the base-`p`
//! digits of the index are the coefficients of the polynomial-basis
//! representative, constant term first. Index 0 is the additive identity and
//! index 1 the multiplicative identity. For `m > 1` the class of `x` has index
//! `p`.
//!
//! The modulus is the lexicographically smallest monic irreducible polynomial
//! of degree `m` over GF(p) (coefficients compared constant term first), so a
//! field is fully determined by `q`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

/// Default upper limit on the field order.
pub const DEFAULT_Q_CAP: u32 = 1 << 16;

/// Fields up to this order get full addition and multiplication tables.
const TABLE_LIMIT: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("field order {q} exceeds the configured cap {cap}")]
    CapExceeded { q: u32, cap: u32 },
    #[error("division by zero")]
    DivisionByZero,
}

/// An element of a finite field, stored as its canonical index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub const fn from_index(index: u32) -> Self {
        FieldElement(index)
    }

    #[inline]
    pub const fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

/// A concrete finite field GF(p^m).
#[derive(Clone, PartialEq, Eq)]
pub struct Field {
    p: u32,
    m: u32,
    q: u32,
    /// `m + 1` coefficients, constant term first, leading coefficient 1.
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

/// Splits `q` into `(p, m)` with `q = p^m`, or `None` if `q` is not a prime
/// power (or is smaller than 2).
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u32;
    while (p as u64) * (p as u64) <= q as u64 {
        if q % p == 0 {
            break;
        }
        p += 1;
    }
    if q % p != 0 {
        // q itself is prime
        return Some((q, 1));
    }
    let mut rest = q;
    let mut m = 0;
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

impl Field {
    /// Builds GF(q) with the default order cap.
    pub fn new(q: u32) -> Result<Field, FieldError> {
        Field::with_cap(q, DEFAULT_Q_CAP)
    }

    pub fn with_cap(q: u32, cap: u32) -> Result<Field, FieldError> {
        let (p, m) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        if q > cap {
            return Err(FieldError::CapExceeded { q, cap });
        }
        let modulus = if m == 1 {
            vec![0, 1]
        } else {
            smallest_irreducible(p, m)
        };
        let mut field = Field {
            p,
            m,
            q,
            modulus,
            tables: None,
        };
        if q <= TABLE_LIMIT {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Coefficients of the defining polynomial, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The element with the given index, if it is in range.
    pub fn element(&self, index: u32) -> Option<FieldElement> {
        (index < self.q).then_some(FieldElement(index))
    }

    /// All `q` elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(FieldElement)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.q).map(FieldElement)
    }

    /// The class of `x` in the polynomial basis (the prime-field element 0
    /// when `m = 1`, where the basis is just `{1}`).
    pub fn generator_x(&self) -> FieldElement {
        if self.m == 1 {
            FieldElement::ZERO
        } else {
            FieldElement(self.p)
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.tables {
            Some(t) => FieldElement(t.add[(a.0 * self.q + b.0) as usize]),
            None => FieldElement(self.add_slow(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        match &self.tables {
            Some(t) => FieldElement(t.neg[a.0 as usize]),
            None => FieldElement(self.neg_slow(a.0)),
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.tables {
            Some(t) => FieldElement(t.mul[(a.0 * self.q + b.0) as usize]),
            None => FieldElement(self.mul_slow(a.0, b.0)),
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match &self.tables {
            Some(t) => FieldElement(t.inv[a.0 as usize]),
            None => self.pow(a, (self.q - 2) as u64),
        })
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The image of the integer `n` in the prime subfield.
    pub fn from_integer(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    fn digits(&self, mut x: u32) -> Vec<u32> {
        let mut d = vec![0; self.m as usize];
        for slot in d.iter_mut() {
            *slot = x % self.p;
            x /= self.p;
        }
        d
    }

    fn from_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            return ((a as u64 + b as u64) % self.p as u64) as u32;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u32> = da
            .iter()
            .zip(&db)
            .map(|(x, y)| (x + y) % self.p)
            .collect();
        self.from_digits(&s)
    }

    fn neg_slow(&self, a: u32) -> u32 {
        if self.m == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let d: Vec<u32> = self
            .digits(a)
            .iter()
            .map(|x| (self.p - x) % self.p)
            .collect();
        self.from_digits(&d)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let prod = poly_mul(&self.digits(a), &self.digits(b), self.p);
        let mut r = poly_rem(&prod, &self.modulus, self.p);
        r.resize(self.m as usize, 0);
        self.from_digits(&r)
    }

    fn build_tables(&self) -> Tables {
        let q = self.q as usize;
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..self.q {
            for b in 0..self.q {
                add[a as usize * q + b as usize] = self.add_slow(a, b);
                mul[a as usize * q + b as usize] = self.mul_slow(a, b);
            }
        }
        let neg = (0..self.q).map(|a| self.neg_slow(a)).collect();
        let mut inv = vec![0; q];
        for a in 1..q {
            // Every nonzero element has exactly one inverse in a field; the
            // modulus was checked irreducible, so the search always succeeds.
            inv[a] = (1..q)
                .find(|&b| mul[a * q + b] == 1)
                .expect("nonzero element without inverse: modulus not irreducible")
                as u32;
        }
        Tables { add, mul, neg, inv }
    }
}

fn trim(p: &mut Vec<u32>) {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let mut out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
    trim(&mut out);
    out
}

fn mod_inv_prime(a: u32, p: u32) -> u32 {
    // a^(p-2) mod p
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Remainder of `a` modulo `b` over GF(p); `b` must have a nonzero leading
/// coefficient.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = mod_inv_prime(b[db], p) as u64;
    while r.len() > db && !(r.len() == 1 && r[0] == 0) {
        let dr = r.len() - 1;
        let factor = (r[dr] as u64 * lead_inv) % p as u64;
        if factor != 0 {
            let shift = dr - db;
            for (i, &c) in b.iter().enumerate() {
                let sub = factor * c as u64 % p as u64;
                r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
            }
        }
        r.pop();
        trim(&mut r);
        if r.len() <= db {
            break;
        }
    }
    r
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for tail in 0..count {
            let mut divisor = vec![0u32; d + 1];
            let mut x = tail;
            for c in divisor.iter_mut().take(d) {
                *c = (x % p as u64) as u32;
                x /= p as u64;
            }
            divisor[d] = 1;
            let r = poly_rem(poly, &divisor, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible polynomial of degree `m`,
/// comparing coefficient sequences constant term first.
fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
    let m = m as usize;
    let count = (p as u64).pow(m as u32);
    for rank in 0..count {
        // rank enumerates (c0, ..., c_{m-1}) with c0 most significant
        let mut poly = vec![0u32; m + 1];
        let mut x = rank;
        for i in (0..m).rev() {
            poly[i] = (x % p as u64) as u32;
            x /= p as u64;
        }
        poly[m] = 1;
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over GF(p)")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: u32) -> FieldElement {
        FieldElement::from_index(i)
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::new(5).unwrap();
        assert_eq!(f.mul(e(2), e(3)), e(1));
        assert_eq!(f.add(e(4), e(3)), e(2));
        assert_eq!(f.inv(e(2)).unwrap(), e(3));
    }

    #[test]
    fn gf4_uses_x2_x_1() {
        let f = Field::new(4).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let a = f.generator_x();
        assert_eq!(a, e(2));
        // a*a = a + 1
        assert_eq!(f.mul(a, a), f.add(a, FieldElement::ONE));
        assert_eq!(f.add(a, a), FieldElement::ZERO);
    }

    #[test]
    fn gf9_modulus_and_prime_subfield_inverse() {
        let f = Field::new(9).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        assert_eq!(f.inv(e(2)).unwrap(), e(2));
    }

    #[test]
    fn rejects_non_prime_powers() {
        assert_eq!(Field::new(6).unwrap_err(), FieldError::NotPrimePower(6));
        assert_eq!(Field::new(1).unwrap_err(), FieldError::NotPrimePower(1));
        assert_eq!(Field::new(12).unwrap_err(), FieldError::NotPrimePower(12));
        assert!(matches!(
            Field::with_cap(256, 128),
            Err(FieldError::CapExceeded { q: 256, cap: 128 })
        ));
    }

    #[test]
    fn division_by_zero() {
        let f = Field::new(7).unwrap();
        assert_eq!(f.inv(FieldElement::ZERO), Err(FieldError::DivisionByZero));
        assert_eq!(f.div(e(3), FieldElement::ZERO), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn elements_in_index_order() {
        let f2 = Field::new(2).unwrap();
        assert_eq!(f2.elements().collect::<Vec<_>>(), vec![e(0), e(1)]);
        let f3 = Field::new(3).unwrap();
        assert_eq!(f3.elements().collect::<Vec<_>>(), vec![e(0), e(1), e(2)]);
        let f4 = Field::new(4).unwrap();
        let els: Vec<_> = f4.elements().collect();
        assert_eq!(els.len(), 4);
        for &a in &els {
            for &b in &els {
                assert!(els.contains(&f4.add(a, b)));
                assert!(els.contains(&f4.mul(a, b)));
            }
        }
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(64), Some((2, 6)));
        assert_eq!(prime_power(81), Some((3, 4)));
        assert_eq!(prime_power(65536), Some((2, 16)));
        assert_eq!(prime_power(65521), Some((65521, 1)));
        assert_eq!(prime_power(100), None);
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for q in [2u32, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let f = Field::new(q).unwrap();
            let els: Vec<_> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, FieldElement::ZERO), a);
                assert_eq!(f.mul(a, FieldElement::ONE), a);
                assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn field_axioms_sampled_up_to_64() {
        // deterministic LCG sampling of triples
        let mut state = 0x2545_f491_4f6c_dd1du64;
        let mut next = |q: u32| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            FieldElement::from_index(((state >> 33) % q as u64) as u32)
        };
        for q in [17u32, 19, 23, 25, 27, 29, 31, 32, 37, 41, 43, 47, 49, 53, 59, 61, 64] {
            let f = Field::new(q).unwrap();
            for a in f.elements() {
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                }
            }
            for _ in 0..10_000 {
                let (a, b, c) = (next(q), next(q), next(q));
                assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            }
        }
    }

    #[test]
    fn frobenius_and_group_order_up_to_256() {
        for q in 2..=256u32 {
            if prime_power(q).is_none() {
                continue;
            }
            let f = Field::new(q).unwrap();
            for x in f.elements() {
                assert_eq!(f.pow(x, q as u64), x, "q={q} x={x:?}");
                if !x.is_zero() {
                    assert_eq!(f.pow(x, (q - 1) as u64), FieldElement::ONE);
                }
            }
        }
    }

    #[test]
    fn untabled_field_matches_definition() {
        // 343 = 7^3 and 1024 = 2^10 exceed the table limit
        for q in [343u32, 1024, 257] {
            let f = Field::new(q).unwrap();
            assert!(f.tables.is_none());
            for a in [1u32, 2, 5, q - 1] {
                let a = e(a);
                assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
                assert_eq!(f.pow(a, q as u64), a);
                assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
            }
        }
    }

    #[test]
    fn deterministic_construction() {
        for q in [8u32, 27, 49, 125, 256] {
            assert_eq!(Field::new(q).unwrap(), Field::new(q).unwrap());
        }
    }

    #[test]
    fn modulus_is_smallest_irreducible() {
        for q in [4u32, 8, 9, 16, 25, 27, 32, 49, 64, 81, 121, 125, 128, 243, 256] {
            let f = Field::new(q).unwrap();
            let (p, m) = prime_power(q).unwrap();
            assert!(is_irreducible(f.modulus(), p));
            assert_eq!(f.modulus().len(), m as usize + 1);
            assert_eq!(*f.modulus().last().unwrap(), 1);
        }
        // GF(8): (1,0,1,1) = x^3 + x^2 + 1 precedes (1,1,0,1) = x^3 + x + 1
        assert_eq!(Field::new(8).unwrap().modulus(), &[1, 0, 1, 1]);
    }
}
