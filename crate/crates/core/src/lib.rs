//! Exact search, bounds and constructions for minimum-length functional PIR
//! and functional batch codes over finite fields.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod constructions;
pub mod gf;
pub mod linalg;
pub mod multiset;
pub mod serve;
pub mod solver;

pub use gf::{Field, FieldElement, FieldError};
pub use linalg::{
    enumerate_projective_points, expand_over_subfield, in_span, projective_canonical, rank,
    LinalgError, MatrixFq, ProjectivePoint, ProjectiveSpace, VectorFq,
};
pub use serve::{
    can_serve, is_functional_batch, is_functional_pir, minimal_recovery_sets, verify_plan,
    Assignment, Check, Limits, RecoveryPlan, RecoverySet, RequestList, ServeContext, ServeError,
};
pub use bounds::{
    asymptotic_ratio_fp, conjecture_check, eval_bounds, resolve_interval, BoundRecord, BoundSource, Kind, KnowledgeBase, KnownValue,
    Params, Provenance, Seed, SeedValue, Conjecture, ConjectureReport, Verdict,
};
pub use constructions::{
    construct_all_nonzero, construct_binary_t2, construct_double_all_nonzero, construct_k2,
    hall_ordering, plan_batch_double, plan_binary_t2, plan_pir_partition, Construction,
    ConstructionError, ConstructionName, HallOrdering,
};
pub use solver::{
    min_length, min_length_fb, min_length_fp, verify_value, SearchResult, SolverError,
    SolverOptions, Verification,
};
