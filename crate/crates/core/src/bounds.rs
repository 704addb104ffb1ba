//! Closed-form bounds, the knowledge base of exact values, and asymptotic
//! ratios for FP(k, t, q) and FB(k, t, q).

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::gf::prime_power;

/// Functional PIR or functional batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    FP,
    FB,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::FP => "FP",
            Kind::FB => "FB",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "FP" | "fp" => Ok(Kind::FP),
            "FB" | "fb" => Ok(Kind::FB),
            other => Err(format!("unknown kind `{other}`, expected FP or FB")),
        }
    }
}

/// Parameter point `(kind, k, t, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Params {
    pub kind: Kind,
    pub k: u64,
    pub t: u64,
    pub q: u64,
}

impl Params {
    pub fn new(kind: Kind, k: u64, t: u64, q: u64) -> Self {
        Params { kind, k, t, q }
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{},{})", self.kind, self.k, self.t, self.q)
    }
}

// ---------------------------------------------------------------------------
// integer helpers

pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn big_pow(base: u64, exp: u64) -> BigUint {
    Pow::pow(BigUint::from(base), exp)
}

fn checked_pow(base: u64, exp: u64) -> Option<u64> {
    let exp = u32::try_from(exp).ok()?;
    base.checked_pow(exp)
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

// ---------------------------------------------------------------------------
// lower-bound sources

/// `t + k - 1`
pub fn lb_basic(k: u64, t: u64) -> u64 {
    t + k - 1
}

/// `s t + 1` for the largest `s` with `C(s t, s) q^s < q^k`: below that
/// length some vector lies outside every span of `s` columns.
pub fn lb_binomial_span(k: u64, t: u64, q: u64) -> u64 {
    let qk = big_pow(q, k);
    (0..k)
        .filter(|&i| binomial(i * t, i) * big_pow(q, i) < qk)
        .map(|i| i * t + 1)
        .max()
        .unwrap_or(1)
}

/// `t (s + 1)` for the largest `1 <= s <= k-1` with `q^(k-s) >= C(t(s+1), s)`.
pub fn lb_layered(k: u64, t: u64, q: u64) -> Option<u64> {
    (1..k)
        .filter(|&s| big_pow(q, k - s) >= binomial(t * (s + 1), s))
        .map(|s| t * (s + 1))
        .max()
}

/// Smallest `n` with `(t(q-1)+1)^n >= (q^k-1)^t`. Batch only.
pub fn lb_counting(k: u64, t: u64, q: u64) -> u64 {
    let target = Pow::pow(big_pow(q, k) - 1u32, t);
    let base = BigUint::from(t * (q - 1) + 1);
    let (mut lo, mut hi) = (0u64, k * t);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if Pow::pow(&base, mid) >= target {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// Smallest `n` with `n + floor((q-1) n / (q^k-1)) >= 2t`: some line carries at
/// most that many columns, and every other recovery set for its point needs
/// two columns.
pub fn lb_line_pigeonhole(k: u64, t: u64, q: u64) -> Option<u64> {
    if k < 2 {
        return None;
    }
    let qk = big_pow(q, k) - 1u32;
    let fits = |n: u64| {
        let on_line = (BigUint::from(n) * (q - 1)) / &qk;
        BigUint::from(n) + on_line >= BigUint::from(2 * t)
    };
    let (mut lo, mut hi) = (0u64, 2 * t);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(lo)
}

/// At `t = q^(2k) + q - 2`: `ceil(2 (q^k-1) t / (q^k+q-2))`.
pub fn lb_square_point(k: u64, t: u64, q: u64) -> Option<u64> {
    let qk = checked_pow(q, k)?;
    let special = qk.checked_mul(qk)?.checked_add(q - 2)?;
    if t != special {
        return None;
    }
    let num = BigUint::from(2u32) * (qk - 1) * t;
    let den = BigUint::from(qk + q - 2);
    num.div_ceil(&den).to_u64()
}

/// Smallest `n > prev` with `n - prev >= ceil((q-1) n / (q^k-1))`, where
/// `prev` is the exact value one dimension lower.
pub fn lb_dimension_step(k: u64, q: u64, prev: u64) -> u64 {
    let qk = big_pow(q, k) - 1u32;
    let mut n = prev + 1;
    loop {
        let need = (BigUint::from(n) * (q - 1)).div_ceil(&qk);
        if BigUint::from(n - prev) >= need {
            return n;
        }
        n += 1;
    }
}

/// `q >= C(kt, k-1)` forces the value `kt`.
pub fn saturated(k: u64, t: u64, q: u64) -> bool {
    BigUint::from(q) >= binomial(k * t, k - 1)
}

// ---------------------------------------------------------------------------
// upper-bound sources

/// `k t`: concatenated identity matrices.
pub fn ub_identity(k: u64, t: u64) -> u64 {
    k * t
}

/// At `t = q^k`: `2 (q^k - 1)` from the doubled simplex. Batch.
pub fn ub_double_simplex(k: u64, t: u64, q: u64) -> Option<u64> {
    let qk = checked_pow(q, k)?;
    (t == qk).then(|| 2 * (qk - 1))
}

/// At `t = q^k + q - 2`: `2 (q^k - 1) + (q - 2) k`. Batch.
pub fn ub_near_simplex(k: u64, t: u64, q: u64) -> Option<u64> {
    let qk = checked_pow(q, k)?;
    (t == qk + q - 2).then(|| 2 * (qk - 1) + (q - 2) * k)
}

/// `ceil(h/s) * 2 * ceil((q^g+q-2)/g) * (q^g - 1 + (q-2) g)` with
/// `g = ceil(log_q s)`, `h = max(k,t)`, `s = min(k,t)`. Batch.
pub fn ub_block(k: u64, t: u64, q: u64) -> Option<u64> {
    let (h, s) = (k.max(t), k.min(t));
    if s < 2 {
        return None;
    }
    let mut g = 0u64;
    let mut qg = 1u64;
    while qg < s {
        qg = qg.checked_mul(q)?;
        g += 1;
    }
    let m = ceil_div(qg + q - 2, g);
    ceil_div(h, s)
        .checked_mul(2)?
        .checked_mul(m)?
        .checked_mul(qg - 1 + (q - 2) * g)
}

/// Proper subfields of GF(q) as `(r, d)` with `q = r^d`, `d > 1`.
pub fn subfields(q: u64) -> Vec<(u64, u64)> {
    let Some((p, m)) = u32::try_from(q).ok().and_then(prime_power) else {
        return Vec::new();
    };
    (1..m)
        .filter(|m1| m % m1 == 0)
        .map(|m1| ((p as u64).pow(m1), (m / m1) as u64))
        .collect()
}

// ---------------------------------------------------------------------------
// knowledge base

/// Where an exact value comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// `k = 1` or `t = 1`.
    Trivial,
    /// Two-dimensional batch formula.
    DimensionTwo,
    /// Binary batch codes serving two requests.
    BinaryPair,
    /// Binary PIR at multiples of `2^(k-1)`.
    BinaryPirMultiple,
    /// Binary batch at multiples of `2^k`.
    BinaryBatchMultiple,
    /// PIR at multiples of `(q^k+q-2)/2`.
    SimplexMultiple,
    /// Binary PIR step `t -> t - 2^(k-1)`, applied `steps` times.
    Recursion { steps: u32, base: Box<Provenance> },
    /// Value loaded from the seed file.
    Seed { cite: String },
    /// Seed given relative to another value.
    SeedOffset { cite: String, base: Box<Provenance> },
    /// Exhaustive search result.
    Solver,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Trivial => f.write_str("trivial dimension or single request"),
            Provenance::DimensionTwo => f.write_str("k=2 formula"),
            Provenance::BinaryPair => f.write_str("binary t=2 formula"),
            Provenance::BinaryPirMultiple => f.write_str("binary PIR multiple"),
            Provenance::BinaryBatchMultiple => f.write_str("binary batch multiple"),
            Provenance::SimplexMultiple => f.write_str("simplex multiple"),
            Provenance::Recursion { steps, base } => write!(f, "recursion x{steps} from {base}"),
            Provenance::Seed { cite } => write!(f, "seed: {cite}"),
            Provenance::SeedOffset { cite, base } => write!(f, "seed: {cite}; base {base}"),
            Provenance::Solver => f.write_str("exhaustive search"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnownValue {
    pub params: Params,
    pub value: u64,
    pub provenance: Provenance,
}

/// A seed value, either absolute or an offset from the same function at
/// another `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeedValue {
    Exact(u64),
    Offset { base_t: u64, offset: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seed {
    pub params: Params,
    pub value: SeedValue,
    pub cite: String,
}

/// A seed that disagrees with the rules or with the seedless bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedIssue {
    pub params: Params,
    pub message: String,
}

const MAX_SEED_DEPTH: u32 = 64;

/// Exact values from closed-form rules, seeds and search results.
#[derive(Debug, Clone, Default)]
pub struct KnowledgeBase {
    seeds: Vec<Seed>,
    solved: BTreeMap<Params, u64>,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_seeds(seeds: Vec<Seed>) -> Self {
        KnowledgeBase {
            seeds,
            solved: BTreeMap::new(),
        }
    }

    pub fn seeds(&self) -> &[Seed] {
        &self.seeds
    }

    /// Records an exhaustive-search value.
    pub fn insert_solved(&mut self, params: Params, value: u64) {
        self.solved.insert(params, value);
    }

    pub fn solved(&self) -> &BTreeMap<Params, u64> {
        &self.solved
    }

    pub fn known_value(&self, kind: Kind, k: u64, t: u64, q: u64) -> Option<KnownValue> {
        self.lookup(Params::new(kind, k, t, q), 0)
    }

    fn lookup(&self, p: Params, depth: u32) -> Option<KnownValue> {
        if depth > MAX_SEED_DEPTH || p.k == 0 || p.t == 0 {
            return None;
        }
        if let Some(v) = rule_value(p) {
            return Some(v);
        }
        if let Some(v) = self.recursion(p, depth) {
            return Some(v);
        }
        if let Some(v) = self.seed_value(p, depth) {
            return Some(v);
        }
        self.solved.get(&p).map(|&value| KnownValue {
            params: p,
            value,
            provenance: Provenance::Solver,
        })
    }

    fn recursion(&self, p: Params, depth: u32) -> Option<KnownValue> {
        if p.kind != Kind::FP || p.q != 2 || p.k >= 63 {
            return None;
        }
        let half = 1u64 << (p.k - 1);
        let (s, h) = (p.t / half, p.t % half);
        if s == 0 || s + h < 2 * half - 1 {
            return None;
        }
        let prev = self.lookup(Params { t: p.t - half, ..p }, depth + 1)?;
        let (steps, base) = match prev.provenance {
            Provenance::Recursion { steps, base } => (steps + 1, base),
            other => (1, Box::new(other)),
        };
        Some(KnownValue {
            params: p,
            value: prev.value + 2 * half - 1,
            provenance: Provenance::Recursion { steps, base },
        })
    }

    fn seed_value(&self, p: Params, depth: u32) -> Option<KnownValue> {
        let seed = self.seeds.iter().find(|s| s.params == p)?;
        match seed.value {
            SeedValue::Exact(value) => Some(KnownValue {
                params: p,
                value,
                provenance: Provenance::Seed {
                    cite: seed.cite.clone(),
                },
            }),
            SeedValue::Offset { base_t, offset } => {
                let base = self.lookup(Params { t: base_t, ..p }, depth + 1)?;
                let value = u64::try_from(base.value as i64 + offset).ok()?;
                Some(KnownValue {
                    params: p,
                    value,
                    provenance: Provenance::SeedOffset {
                        cite: seed.cite.clone(),
                        base: Box::new(base.provenance),
                    },
                })
            }
        }
    }

    /// Compares every seed against the closed-form rules and against the
    /// bounds computed without any seed.
    pub fn validate_seeds(&self) -> Vec<SeedIssue> {
        let bare = KnowledgeBase::new();
        let mut issues = Vec::new();
        for seed in &self.seeds {
            let p = seed.params;
            let issue = |message: String| SeedIssue { params: p, message };
            if p.k == 0 || p.t == 0 || u32::try_from(p.q).ok().and_then(prime_power).is_none() {
                issues.push(issue("parameters out of range".to_owned()));
                continue;
            }
            let Some(value) = self.seed_value(p, 0).map(|v| v.value) else {
                issues.push(issue("offset base has no known value".to_owned()));
                continue;
            };
            if let Some(rule) = rule_value(p).or_else(|| bare.recursion(p, 0)) {
                if rule.value != value {
                    issues.push(issue(format!(
                        "seed gives {value} but {} gives {}",
                        rule.provenance, rule.value
                    )));
                    continue;
                }
            }
            let rec = eval_bounds(p.kind, p.k, p.t, p.q, &bare);
            if value < rec.lb || value > rec.ub {
                issues.push(issue(format!(
                    "seed value {value} lies outside the bound interval [{}, {}]",
                    rec.lb, rec.ub
                )));
            }
        }
        issues
    }
}

/// Closed-form exact values, in priority order.
pub fn rule_value(p: Params) -> Option<KnownValue> {
    let Params { kind, k, t, q } = p;
    let known = |value: u64, provenance: Provenance| {
        Some(KnownValue {
            params: p,
            value,
            provenance,
        })
    };
    if k == 1 {
        return known(t, Provenance::Trivial);
    }
    if t == 1 {
        return known(k, Provenance::Trivial);
    }
    if kind == Kind::FB && k == 2 {
        return known(ceil_div(2 * (q + 1) * t, q + 2), Provenance::DimensionTwo);
    }
    if kind == Kind::FB && t == 2 && q == 2 {
        return known(ceil_div(3 * k, 2), Provenance::BinaryPair);
    }
    if q == 2 && k < 63 {
        let half = 1u64 << (k - 1);
        if kind == Kind::FP && t % half == 0 {
            return known((2 * half - 1) * (t / half), Provenance::BinaryPirMultiple);
        }
        if kind == Kind::FB && t % (2 * half) == 0 {
            return known((4 * half - 2) * (t / (2 * half)), Provenance::BinaryBatchMultiple);
        }
    }
    if kind == Kind::FP {
        if let Some(qk) = checked_pow(q, k) {
            let unit = (qk + q - 2) / 2;
            if t % unit == 0 {
                return known((t / unit) * (qk - 1), Provenance::SimplexMultiple);
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// aggregated bounds

/// A named bound and its value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundSource {
    pub name: &'static str,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundRecord {
    pub params: Params,
    pub lb: u64,
    pub ub: u64,
    pub lb_sources: Vec<BoundSource>,
    pub ub_sources: Vec<BoundSource>,
    pub known: Option<KnownValue>,
    pub saturated: bool,
}

impl BoundRecord {
    pub fn is_exact(&self) -> bool {
        self.lb == self.ub
    }
}

/// Cells allowed in the subadditive closure table.
pub const DEFAULT_CLOSURE_CELLS: u64 = 1 << 16;

fn src(name: &'static str, value: u64) -> BoundSource {
    BoundSource { name, value }
}

/// Lower-bound sources that need no knowledge base.
pub fn intrinsic_lower_sources(kind: Kind, k: u64, t: u64, q: u64) -> Vec<BoundSource> {
    let mut out = vec![
        src("basic", lb_basic(k, t)),
        src("binomial-span", lb_binomial_span(k, t, q)),
    ];
    if let Some(v) = lb_layered(k, t, q) {
        out.push(src("layered-span", v));
    }
    if let Some(v) = lb_line_pigeonhole(k, t, q) {
        out.push(src("line-pigeonhole", v));
    }
    if kind == Kind::FB {
        out.push(src("counting", lb_counting(k, t, q)));
    }
    if let Some(v) = lb_square_point(k, t, q) {
        out.push(src("square-point", v));
    }
    if saturated(k, t, q) {
        out.push(src("saturation", k * t));
    }
    out
}

/// Best lower bound from closed forms alone.
pub fn closed_form_lower(kind: Kind, k: u64, t: u64, q: u64) -> u64 {
    intrinsic_lower_sources(kind, k, t, q)
        .iter()
        .map(|s| s.value)
        .max()
        .unwrap_or(1)
}

fn intrinsic_upper(kind: Kind, k: u64, t: u64, q: u64, kb: &KnowledgeBase) -> u64 {
    let mut best = ub_identity(k, t);
    for v in [
        ub_double_simplex(k, t, q),
        ub_near_simplex(k, t, q),
        ub_block(k, t, q),
        kb.known_value(Kind::FB, k, t, q).map(|v| v.value),
    ]
    .into_iter()
    .flatten()
    {
        best = best.min(v);
    }
    if kind == Kind::FP {
        if let Some(v) = kb.known_value(Kind::FP, k, t, q) {
            best = best.min(v.value);
        }
    }
    best
}

fn subfield_upper(kind: Kind, k: u64, t: u64, q: u64, kb: &KnowledgeBase) -> Option<u64> {
    subfields(q)
        .into_iter()
        .map(|(r, d)| intrinsic_upper(kind, k, d * t, r, kb))
        .min()
}

fn subfield_lower(kind: Kind, k: u64, t: u64, q: u64, kb: &KnowledgeBase) -> Option<u64> {
    subfields(q)
        .into_iter()
        .map(|(r, d)| {
            let mut lb = closed_form_lower(kind, k, d * t, r);
            if let Some(v) = kb.known_value(kind, k, d * t, r) {
                lb = lb.max(v.value);
            }
            ceil_div(lb, d)
        })
        .max()
}

/// Subadditive closure of the base upper bounds over all splits of `k` and
/// `t`; `None` if the table would exceed `max_cells`.
fn closure_upper(kind: Kind, k: u64, t: u64, q: u64, kb: &KnowledgeBase, max_cells: u64) -> Option<u64> {
    if k.checked_mul(t)? > max_cells {
        return None;
    }
    let (ku, tu) = (k as usize, t as usize);
    let base = |kind: Kind, a: u64, b: u64| {
        let mut v = intrinsic_upper(kind, a, b, q, kb);
        if let Some(s) = subfield_upper(kind, a, b, q, kb) {
            v = v.min(s);
        }
        v
    };
    let fill = |kind: Kind, cap: Option<&Vec<Vec<u64>>>| {
        let mut u = vec![vec![0u64; tu + 1]; ku + 1];
        for a in 1..=ku {
            for b in 1..=tu {
                let mut best = base(kind, a as u64, b as u64);
                if let Some(c) = cap {
                    best = best.min(c[a][b]);
                }
                for b1 in 1..=b / 2 {
                    best = best.min(u[a][b1] + u[a][b - b1]);
                }
                for a1 in 1..=a / 2 {
                    best = best.min(u[a1][b] + u[a - a1][b]);
                }
                u[a][b] = best;
            }
        }
        u
    };
    let fb = fill(Kind::FB, None);
    Some(match kind {
        Kind::FB => fb[ku][tu],
        Kind::FP => fill(Kind::FP, Some(&fb))[ku][tu],
    })
}

/// Every available bound for the parameter point, with the best interval.
pub fn eval_bounds(kind: Kind, k: u64, t: u64, q: u64, kb: &KnowledgeBase) -> BoundRecord {
    eval_bounds_with(kind, k, t, q, kb, DEFAULT_CLOSURE_CELLS)
}

pub fn eval_bounds_with(
    kind: Kind,
    k: u64,
    t: u64,
    q: u64,
    kb: &KnowledgeBase,
    closure_cells: u64,
) -> BoundRecord {
    assert!(k >= 1 && t >= 1 && q >= 2, "parameters must be positive");
    let params = Params::new(kind, k, t, q);
    let mut lb_sources = intrinsic_lower_sources(kind, k, t, q);
    let sat = saturated(k, t, q);
    if k >= 2 {
        if let Some(prev) = kb.known_value(kind, k - 1, t, q) {
            lb_sources.push(src("dimension-step", lb_dimension_step(k, q, prev.value)));
        }
    }
    if let Some(v) = subfield_lower(kind, k, t, q, kb) {
        lb_sources.push(src("subfield", v));
    }
    if kind == Kind::FB {
        if let Some(v) = kb.known_value(Kind::FP, k, t, q) {
            lb_sources.push(src("pir-value", v.value));
        }
    }

    let mut ub_sources = vec![src("identity-copies", ub_identity(k, t))];
    if let Some(v) = ub_double_simplex(k, t, q) {
        ub_sources.push(src("double-simplex", v));
    }
    if let Some(v) = ub_near_simplex(k, t, q) {
        ub_sources.push(src("near-simplex", v));
    }
    if let Some(v) = ub_block(k, t, q) {
        ub_sources.push(src("block", v));
    }
    if let Some(v) = subfield_upper(kind, k, t, q, kb) {
        ub_sources.push(src("subfield", v));
    }
    if let Some(v) = closure_upper(kind, k, t, q, kb, closure_cells) {
        ub_sources.push(src("subadditive", v));
    }
    if kind == Kind::FP {
        if let Some(v) = kb.known_value(Kind::FB, k, t, q) {
            ub_sources.push(src("batch-value", v.value));
        }
    }
    if sat {
        ub_sources.push(src("saturation", k * t));
    }
    let known = kb.known_value(kind, k, t, q);
    if let Some(v) = &known {
        lb_sources.push(src("known-value", v.value));
        ub_sources.push(src("known-value", v.value));
    }
    let lb = lb_sources.iter().map(|s| s.value).max().unwrap_or(1);
    let ub = ub_sources.iter().map(|s| s.value).min().unwrap_or(k * t);
    BoundRecord {
        params,
        lb,
        ub,
        lb_sources,
        ub_sources,
        known,
        saturated: sat,
    }
}

/// `2 (q^k - 1) / (q^k + q - 2)` in lowest terms.
pub fn asymptotic_ratio_fp(k: u64, q: u64) -> Ratio<BigUint> {
    let qk = big_pow(q, k);
    let num = (&qk - 1u32) * 2u32;
    let den = qk + q - 2u32;
    Ratio::new(num, den)
}

// ---------------------------------------------------------------------------
// conjectured values

/// Statements checked against exact values at small parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conjecture {
    /// `FB(k, q^k + q - 2, q) = 2 q^k - 2`.
    NearSimplexBatch,
    /// `FB(k, (q^k - 1)/(q - 1) + 1, q) = 2 (q^k - 1)/(q - 1)`.
    ProjectiveBatch,
    /// `FB(k, t, q) < FB(t, k, q)`.
    SwapInequality { t: u64 },
}

impl Conjecture {
    pub fn name(self) -> &'static str {
        match self {
            Conjecture::NearSimplexBatch => "near-simplex-batch",
            Conjecture::ProjectiveBatch => "projective-batch",
            Conjecture::SwapInequality { .. } => "swap-inequality",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    Counterexample,
    Undecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Consistent => "consistent",
            Verdict::Counterexample => "counterexample",
            Verdict::Undecided => "undecided",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjectureReport {
    pub conjecture: Conjecture,
    pub params: Params,
    /// Conjectured exact value, absent for the swap inequality.
    pub conjectured: Option<u64>,
    /// Interval for `params` after bounds and search.
    pub interval: (u64, u64),
    /// Interval for the swapped parameters.
    pub swapped: Option<(u64, u64)>,
    pub verdict: Verdict,
}

/// Best interval for FB or FP at one point: bounds first, then the exact
/// search when `opts` is given and the bounds leave a gap.
pub fn resolve_interval(
    kind: Kind,
    k: u64,
    t: u64,
    q: u64,
    kb: &KnowledgeBase,
    opts: Option<&crate::solver::SolverOptions>,
) -> (u64, u64) {
    let rec = eval_bounds(kind, k, t, q, kb);
    let (lb, ub) = (rec.lb, rec.ub);
    if lb == ub {
        return (lb, ub);
    }
    let Some(opts) = opts else { return (lb, ub) };
    match crate::solver::min_length(kind, k, t, q, opts) {
        Ok(r) => (r.n_min, r.n_min),
        Err(crate::solver::SolverError::BudgetExceeded { lower, upper }) => (lb.max(lower), ub.min(upper)),
        Err(_) => (lb, ub),
    }
}

/// Compares a conjectured statement with the best available interval.
pub fn conjecture_check(
    conjecture: Conjecture,
    k: u64,
    q: u64,
    kb: &KnowledgeBase,
    opts: Option<&crate::solver::SolverOptions>,
) -> ConjectureReport {
    let qk = q.pow(k as u32);
    let exact = |t: u64, value: u64| {
        let interval = resolve_interval(Kind::FB, k, t, q, kb, opts);
        let verdict = if interval == (value, value) {
            Verdict::Consistent
        } else if value < interval.0 || value > interval.1 {
            Verdict::Counterexample
        } else {
            Verdict::Undecided
        };
        ConjectureReport {
            conjecture,
            params: Params::new(Kind::FB, k, t, q),
            conjectured: Some(value),
            interval,
            swapped: None,
            verdict,
        }
    };
    match conjecture {
        Conjecture::NearSimplexBatch => exact(qk + q - 2, 2 * qk - 2),
        Conjecture::ProjectiveBatch => {
            let points = (qk - 1) / (q - 1);
            exact(points + 1, 2 * points)
        }
        Conjecture::SwapInequality { t } => {
            let a = resolve_interval(Kind::FB, k, t, q, kb, opts);
            let b = resolve_interval(Kind::FB, t, k, q, kb, opts);
            let verdict = if a.1 < b.0 {
                Verdict::Consistent
            } else if a.0 >= b.1 {
                Verdict::Counterexample
            } else {
                Verdict::Undecided
            };
            ConjectureReport {
                conjecture,
                params: Params::new(Kind::FB, k, t, q),
                conjectured: None,
                interval: a,
                swapped: Some(b),
                verdict,
            }
        }
    }
}


#[cfg(test)]
mod conjecture_tests {
    use super::*;
    use crate::solver::SolverOptions;

    #[test]
    fn near_simplex_batch_small_cases() {
        let kb = KnowledgeBase::new();
        let opts = SolverOptions::default();
        let r = conjecture_check(Conjecture::NearSimplexBatch, 2, 2, &kb, Some(&opts));
        assert_eq!((r.params.t, r.conjectured, r.verdict), (4, Some(6), Verdict::Consistent));
        let r = conjecture_check(Conjecture::NearSimplexBatch, 2, 3, &kb, None);
        assert_eq!((r.params.t, r.interval, r.verdict), (10, (16, 16), Verdict::Consistent));
        for q in [4u64, 5, 7] {
            let r = conjecture_check(Conjecture::NearSimplexBatch, 2, q, &kb, None);
            assert_eq!(r.verdict, Verdict::Consistent, "q={q}");
        }
    }

    #[test]
    fn projective_batch_small_cases() {
        let kb = KnowledgeBase::new();
        let r = conjecture_check(Conjecture::ProjectiveBatch, 2, 2, &kb, None);
        assert_eq!((r.params.t, r.conjectured, r.verdict), (4, Some(6), Verdict::Consistent));
        // FB(2, q + 2, q) = 2(q + 1) for every q
        let r = conjecture_check(Conjecture::ProjectiveBatch, 2, 5, &kb, None);
        assert_eq!(r.verdict, Verdict::Consistent);
    }

    #[test]
    fn swap_inequality_without_search() {
        let kb = KnowledgeBase::new();
        let r = conjecture_check(Conjecture::SwapInequality { t: 2 }, 2, 2, &kb, None);
        assert_eq!(r.verdict, Verdict::Counterexample);
        assert_eq!(r.interval, r.swapped.unwrap());
        // over GF(2) the two-dimension and two-request formulas agree
        for t in 3..=9 {
            let r = conjecture_check(Conjecture::SwapInequality { t }, 2, 2, &kb, None);
            let v = (3 * t).div_ceil(2);
            assert_eq!((r.interval, r.swapped), ((v, v), Some((v, v))));
            assert_eq!(r.verdict, Verdict::Counterexample);
        }
    }
}
