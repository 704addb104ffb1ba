//! Exact FP / FB values by exhaustive search over projective column multisets.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::bounds::{closed_form_lower, Kind, Params};
use crate::gf::{Field, FieldError, DEFAULT_Q_CAP};
use crate::linalg::{EchelonBasis, MatrixFq, ProjectiveSpace, VectorFq};
use crate::multiset::advance;
use crate::serve::{Limits, ServeContext, ServeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    /// Every length below `lower` is refuted; `upper` is known to work.
    #[error("search budget exhausted; value lies in [{lower}, {upper}]")]
    BudgetExceeded { lower: u64, upper: u64 },
    #[error("{count} request lists exceed the budget of {budget}")]
    InstanceTooLarge { count: u128, budget: u64 },
    #[error("parameters must satisfy k >= 1 and t >= 1")]
    InvalidParameters,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Search configuration.
#[derive(Clone, Copy)]
pub struct SolverOptions<'a> {
    /// Restrict to multisets that contain every standard basis point.
    pub systematic: bool,
    /// Cap on candidates tested across all lengths.
    pub max_candidates: Option<u64>,
    pub limits: Limits,
    /// Polled between candidates; returning true aborts with a budget error.
    pub stop: Option<&'a (dyn Fn() -> bool + Sync)>,
    pub q_cap: u32,
}

impl Default for SolverOptions<'_> {
    fn default() -> Self {
        SolverOptions {
            systematic: false,
            max_candidates: None,
            limits: Limits::default(),
            stop: None,
            q_cap: DEFAULT_Q_CAP,
        }
    }
}

impl core::fmt::Debug for SolverOptions<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("SolverOptions")
            .field("systematic", &self.systematic)
            .field("max_candidates", &self.max_candidates)
            .field("limits", &self.limits)
            .field("q_cap", &self.q_cap)
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub params: Params,
    pub n_min: u64,
    pub witness: MatrixFq,
    /// Length `n_min - 1` was enumerated in full without success.
    pub exhausted_below: bool,
    /// First length enumerated.
    pub start: u64,
    pub candidates_tested: u64,
}

/// Outcome of confirming a claimed value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verification {
    Confirmed { witness: MatrixFq },
    /// A shorter code exists (`witness` set) or none exists at the claimed length.
    Refuted { witness: Option<MatrixFq> },
    Undecided { reason: SolverError },
}

/// Nondecreasing point-index sequences of length `n` whose representatives
/// span F_q^k, in lexicographic order.
pub struct CandidateEnumerator<'a> {
    field: &'a Field,
    k: usize,
    points: usize,
    reps: Vec<VectorFq>,
    units: Vec<usize>,
    n: usize,
    systematic: bool,
    cap: Option<u32>,
    /// Free part of the sequence (all of it, or the columns beyond the units).
    free: Option<Vec<usize>>,
}

impl<'a> CandidateEnumerator<'a> {
    pub fn new(field: &'a Field, k: usize, n: usize, systematic: bool, cap: Option<u32>) -> Self {
        let space = ProjectiveSpace::new(k, field.order());
        let reps = space.points().map(|p| p.into_rep()).collect();
        let mut units: Vec<usize> = (0..k).map(|i| space.unit_index(i)).collect();
        units.sort_unstable();
        let free_len = if systematic { n.checked_sub(k) } else { Some(n) };
        let free = match free_len {
            Some(len) if n >= k => Some(vec![0; len]),
            _ => None,
        };
        CandidateEnumerator {
            field,
            k,
            points: space.point_count(),
            reps,
            units,
            n,
            systematic,
            cap,
            free,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn assemble(&self, free: &[usize]) -> Vec<usize> {
        if !self.systematic {
            return free.to_vec();
        }
        let mut all = Vec::with_capacity(self.n);
        all.extend_from_slice(&self.units);
        all.extend_from_slice(free);
        all.sort_unstable();
        all
    }

    fn acceptable(&self, seq: &[usize]) -> bool {
        if let Some(cap) = self.cap {
            let mut run = 0u32;
            for i in 0..seq.len() {
                run = if i > 0 && seq[i] == seq[i - 1] { run + 1 } else { 1 };
                if run > cap {
                    return false;
                }
            }
        }
        if self.systematic {
            return true;
        }
        let mut basis = EchelonBasis::new(self.k);
        let mut r = 0;
        for (i, &p) in seq.iter().enumerate() {
            if i > 0 && seq[i - 1] == p {
                continue;
            }
            if basis.insert(self.field, &self.reps[p]) {
                r += 1;
                if r == self.k {
                    return true;
                }
            }
        }
        false
    }
}

impl Iterator for CandidateEnumerator<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        loop {
            let free = self.free.as_mut()?;
            let current = free.clone();
            if !advance(free, self.points) {
                self.free = None;
            }
            let seq = self.assemble(&current);
            if self.acceptable(&seq) {
                return Some(seq);
            }
        }
    }
}

/// Columns on each point of the candidate, indexed by point.
fn line_counts(seq: &[usize], points: usize) -> Vec<u32> {
    let mut counts = vec![0u32; points];
    for &p in seq {
        counts[p] += 1;
    }
    counts
}

/// Whether the candidate (point indices) is a `t`-functional PIR or batch
/// generator matrix.
pub fn test_candidate(
    field: &Field,
    k: usize,
    kind: Kind,
    t: u32,
    seq: &[usize],
    limits: &Limits,
) -> Result<bool, ServeError> {
    let n = seq.len() as u64;
    let points = ProjectiveSpace::new(k, field.order()).point_count();
    // a point with fewer than t columns on its line needs two columns per
    // remaining request
    if n < 2 * t as u64 {
        let counts = line_counts(seq, points);
        if counts.iter().any(|&c| c < t && n < 2 * t as u64 - c as u64) {
            return Ok(false);
        }
    }
    let ctx = ServeContext::from_points(field, k, seq);
    match kind {
        Kind::FP => Ok(ctx.pir_failure(t, limits.max_nodes)?.is_none()),
        Kind::FB => Ok(ctx.batch_failure(t, limits)?.is_none()),
    }
}

struct Searcher<'a> {
    field: Arc<Field>,
    kind: Kind,
    k: usize,
    t: u32,
    opts: SolverOptions<'a>,
    tested: u64,
}

impl Searcher<'_> {
    /// First serving candidate of length `n`, or `None` after full enumeration.
    fn length(&mut self, n: u64, cap: bool) -> Result<Option<Vec<usize>>, SearchStop> {
        let cap = cap.then_some(self.t);
        let field = self.field.clone();
        for seq in CandidateEnumerator::new(&field, self.k, n as usize, self.opts.systematic, cap) {
            self.tested += 1;
            if self.opts.max_candidates.is_some_and(|m| self.tested > m) {
                return Err(SearchStop::Budget);
            }
            if self.opts.stop.is_some_and(|f| f()) {
                return Err(SearchStop::Budget);
            }
            match test_candidate(&field, self.k, self.kind, self.t, &seq, &self.opts.limits) {
                Ok(true) => return Ok(Some(seq)),
                Ok(false) => {}
                Err(ServeError::InstanceTooLarge { count, budget }) => {
                    return Err(SearchStop::TooLarge { count, budget })
                }
                Err(_) => return Err(SearchStop::Budget),
            }
        }
        Ok(None)
    }
}

enum SearchStop {
    Budget,
    TooLarge { count: u128, budget: u64 },
}

fn setup<'a>(
    kind: Kind,
    k: u64,
    t: u64,
    q: u64,
    opts: &SolverOptions<'a>,
) -> Result<Searcher<'a>, SolverError> {
    if k == 0 || t == 0 || t > u32::MAX as u64 {
        return Err(SolverError::InvalidParameters);
    }
    let q32 = u32::try_from(q).map_err(|_| FieldError::CapExceeded {
        q: u32::MAX,
        cap: opts.q_cap,
    })?;
    let field = Arc::new(Field::with_cap(q32, opts.q_cap)?);
    Ok(Searcher {
        field,
        kind,
        k: k as usize,
        t: t as u32,
        opts: *opts,
        tested: 0,
    })
}

/// Exact minimum length by increasing `n`, starting one below the best
/// closed-form lower bound so the returned value comes with a refutation of
/// the length below it.
pub fn min_length(kind: Kind, k: u64, t: u64, q: u64, opts: &SolverOptions) -> Result<SearchResult, SolverError> {
    let mut s = setup(kind, k, t, q, opts)?;
    let lb = closed_form_lower(kind, k, t, q);
    let upper = k * t;
    let start = lb.saturating_sub(1).max(k - 1);
    for n in start..=upper {
        // lengths below n are refuted, so more than t columns on one point
        // would leave a shorter code
        match s.length(n, true) {
            Ok(Some(seq)) => {
                return Ok(SearchResult {
                    params: Params::new(kind, k, t, q),
                    n_min: n,
                    witness: MatrixFq::from_points(s.field.clone(), s.k, &seq),
                    exhausted_below: n > start,
                    start,
                    candidates_tested: s.tested,
                })
            }
            Ok(None) => {}
            Err(SearchStop::Budget) => {
                return Err(SolverError::BudgetExceeded {
                    lower: n.max(lb),
                    upper,
                })
            }
            Err(SearchStop::TooLarge { count, budget }) => {
                return Err(SolverError::InstanceTooLarge { count, budget })
            }
        }
    }
    unreachable!("concatenated identity matrices always work at length k t")
}

pub fn min_length_fp(k: u64, t: u64, q: u64, opts: &SolverOptions) -> Result<SearchResult, SolverError> {
    min_length(Kind::FP, k, t, q, opts)
}

pub fn min_length_fb(k: u64, t: u64, q: u64, opts: &SolverOptions) -> Result<SearchResult, SolverError> {
    min_length(Kind::FB, k, t, q, opts)
}

/// Confirms `claimed` by enumerating lengths `claimed - 1` and `claimed` in full.
pub fn verify_value(kind: Kind, k: u64, t: u64, q: u64, claimed: u64, opts: &SolverOptions) -> Verification {
    let mut s = match setup(kind, k, t, q, opts) {
        Ok(s) => s,
        Err(reason) => return Verification::Undecided { reason },
    };
    let stop = |e: SearchStop, lower: u64| Verification::Undecided {
        reason: match e {
            SearchStop::Budget => SolverError::BudgetExceeded { lower, upper: k * t },
            SearchStop::TooLarge { count, budget } => SolverError::InstanceTooLarge { count, budget },
        },
    };
    if claimed >= 2 {
        match s.length(claimed - 1, false) {
            Ok(Some(seq)) => {
                return Verification::Refuted {
                    witness: Some(MatrixFq::from_points(s.field.clone(), s.k, &seq)),
                }
            }
            Ok(None) => {}
            Err(e) => return stop(e, 1),
        }
    }
    match s.length(claimed, claimed >= 2) {
        Ok(Some(seq)) => Verification::Confirmed {
            witness: MatrixFq::from_points(s.field.clone(), s.k, &seq),
        },
        Ok(None) => Verification::Refuted { witness: None },
        Err(e) => stop(e, claimed),
    }
}
