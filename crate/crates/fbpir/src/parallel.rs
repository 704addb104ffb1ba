//! Multi-threaded exact search with the same answers as the serial solver.

use std::sync::Arc;

use fbpir_core::bounds::closed_form_lower;
use fbpir_core::solver::{test_candidate, CandidateEnumerator};
use fbpir_core::{Field, FieldError, Kind, MatrixFq, Params, SearchResult, ServeError, SolverError, SolverOptions};
use rayon::prelude::*;

/// Candidates handed to the thread pool at a time.
pub const DEFAULT_CHUNK: usize = 4096;

enum Outcome {
    Found(Vec<usize>),
    Exhausted,
    Budget,
    TooLarge { count: u128, budget: u64 },
}

/// Same contract as [`fbpir_core::min_length`]: lengths are tried in
/// increasing order and the witness is the first serving candidate in
/// enumeration order, so results match the serial search exactly.
pub fn par_min_length(
    kind: Kind,
    k: u64,
    t: u64,
    q: u64,
    opts: &SolverOptions,
    chunk: usize,
) -> Result<SearchResult, SolverError> {
    if k == 0 || t == 0 || t > u32::MAX as u64 {
        return Err(SolverError::InvalidParameters);
    }
    let q32 = u32::try_from(q).map_err(|_| FieldError::CapExceeded { q: u32::MAX, cap: opts.q_cap })?;
    let field = Arc::new(Field::with_cap(q32, opts.q_cap)?);
    let (ku, tu) = (k as usize, t as u32);
    let lb = closed_form_lower(kind, k, t, q);
    let upper = k * t;
    let start = lb.saturating_sub(1).max(k - 1);
    let mut tested = 0u64;
    for n in start..=upper {
        // a point carrying more than t columns has a spare one, so a shorter
        // code would already have been found
        let mut it = CandidateEnumerator::new(&field, ku, n as usize, opts.systematic, Some(tu));
        let outcome = loop {
            let mut batch: Vec<Vec<usize>> = it.by_ref().take(chunk.max(1)).collect();
            if batch.is_empty() {
                break Outcome::Exhausted;
            }
            let mut over_budget = false;
            if let Some(max) = opts.max_candidates {
                let room = max.saturating_sub(tested) as usize;
                if batch.len() > room {
                    batch.truncate(room);
                    over_budget = true;
                }
            }
            if opts.stop.is_some_and(|f| f()) {
                break Outcome::Budget;
            }
            let hit = batch.par_iter().position_first(|seq| {
                !matches!(test_candidate(&field, ku, kind, tu, seq, &opts.limits), Ok(false))
            });
            match hit {
                Some(i) => {
                    tested += i as u64 + 1;
                    match test_candidate(&field, ku, kind, tu, &batch[i], &opts.limits) {
                        Ok(_) => break Outcome::Found(batch.swap_remove(i)),
                        Err(ServeError::InstanceTooLarge { count, budget }) => {
                            break Outcome::TooLarge { count, budget }
                        }
                        Err(_) => break Outcome::Budget,
                    }
                }
                None => tested += batch.len() as u64,
            }
            if over_budget {
                break Outcome::Budget;
            }
        };
        match outcome {
            Outcome::Found(seq) => {
                return Ok(SearchResult {
                    params: Params::new(kind, k, t, q),
                    n_min: n,
                    witness: MatrixFq::from_points(field.clone(), ku, &seq),
                    exhausted_below: n > start,
                    start,
                    candidates_tested: tested,
                })
            }
            Outcome::Exhausted => {}
            Outcome::Budget => return Err(SolverError::BudgetExceeded { lower: n.max(lb), upper }),
            Outcome::TooLarge { count, budget } => return Err(SolverError::InstanceTooLarge { count, budget }),
        }
    }
    unreachable!("concatenated identity matrices always work at length k t")
}
