//! The reproducibility checklist: thirteen criteria, each with a measured
//! runtime.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use fbpir_core::bounds::{Conjecture, Verdict};
use fbpir_core::constructions::construct_double_all_nonzero;
use fbpir_core::multiset::Multisets;
use fbpir_core::{
    asymptotic_ratio_fp, can_serve, conjecture_check, construct_all_nonzero, construct_binary_t2, construct_k2,
    eval_bounds, hall_ordering, is_functional_batch, is_functional_pir, min_length, plan_batch_double,
    plan_binary_t2, plan_pir_partition, rank, verify_plan, Construction, ConstructionError, Field, Kind,
    KnowledgeBase, Limits, MatrixFq, Params, ProjectiveSpace, Provenance, RequestList, SolverOptions, VectorFq,
};
use num_bigint::BigUint;
use num_rational::Ratio;

use crate::oracle::oracle_can_serve;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Every criterion, with symmetry pruning for the heaviest search.
    Fast,
    /// Every criterion with the unpruned search and wider sweeps.
    Full,
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fast" => Ok(Suite::Fast),
            "full" => Ok(Suite::Full),
            other => Err(format!("unknown suite `{other}`, expected fast or full")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] {:>2} {:<44} {:>9.3}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

pub const TITLES: [&str; 13] = [
    "FB(2,t,2) for t=1..6",
    "FB(2,t,3) for t=1..5",
    "FB(k,2,2) for k=2..5",
    "construction certificates",
    "FP(3,19,2) through the recursion and seeds",
    "FP(2,4,2) = FB(2,4,2) = 6",
    "every bound source brackets exact values",
    "saturation at FB(2,2,5)",
    "Hall orderings over F_2^2",
    "doubled simplex plans",
    "FB(2,q^2+q-2,q) = 2q^2-2 for q=2,3",
    "ratio trend towards 3/2",
    "serve checker against the assignment oracle",
];

type Outcome = Result<String, String>;

/// Shared state: the knowledge base and exact values found so far.
pub struct Runner {
    suite: Suite,
    kb: KnowledgeBase,
    values: BTreeMap<Params, u64>,
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

impl Runner {
    /// `kb` should carry the seed file; criterion 5 depends on it.
    pub fn new(suite: Suite, kb: KnowledgeBase) -> Self {
        Runner {
            suite,
            kb,
            values: BTreeMap::new(),
        }
    }

    pub fn run_all(&mut self, mut report: impl FnMut(&CriterionResult)) -> Vec<CriterionResult> {
        (1..=13)
            .map(|id| {
                let r = self.run(id);
                report(&r);
                r
            })
            .collect()
    }

    pub fn run(&mut self, id: u8) -> CriterionResult {
        let start = Instant::now();
        let outcome = match id {
            1 => self.dimension_two_binary(),
            2 => self.dimension_two_ternary(),
            3 => self.two_requests_binary(),
            4 => self.constructions(),
            5 => self.recursion_chain(),
            6 => self.multiples_coincide(),
            7 => self.bound_sandwich(),
            8 => self.saturation(),
            9 => self.hall_completeness(),
            10 => self.batch_double_sweep(),
            11 => self.near_simplex_batch(),
            12 => self.ratio_trend(),
            13 => self.oracle_equivalence(),
            _ => Err(format!("no criterion {id}")),
        };
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        CriterionResult {
            id,
            title: TITLES.get(id as usize - 1).copied().unwrap_or("unknown"),
            passed,
            detail,
            elapsed: start.elapsed(),
        }
    }

    /// Exhaustive minimum with a certificate that one column fewer fails.
    fn solve(&mut self, kind: Kind, k: u64, t: u64, q: u64, systematic: bool) -> Result<u64, String> {
        let p = Params::new(kind, k, t, q);
        let opts = SolverOptions {
            systematic,
            ..SolverOptions::default()
        };
        let r = min_length(kind, k, t, q, &opts).map_err(|e| format!("{p}: {e}"))?;
        check(r.exhausted_below, || format!("{p}: length {} not exhausted", r.n_min - 1))?;
        let lim = Limits::default();
        let holds = match kind {
            Kind::FP => is_functional_pir(&r.witness, t as u32, &lim).map(|c| c.holds()),
            Kind::FB => is_functional_batch(&r.witness, t as u32, &lim).map(|c| c.holds()),
        }
        .map_err(|e| e.to_string())?;
        check(holds, || format!("{p}: witness fails the property check"))?;
        self.values.insert(p, r.n_min);
        Ok(r.n_min)
    }

    fn sweep(&mut self, kind: Kind, cases: &[(u64, u64, u64, u64)], systematic: impl Fn(u64) -> bool) -> Outcome {
        let mut got = Vec::new();
        for &(k, t, q, want) in cases {
            let v = self.solve(kind, k, t, q, systematic(k))?;
            check(v == want, || format!("{kind}({k},{t},{q}) = {v}, expected {want}"))?;
            got.push(v.to_string());
        }
        Ok(format!("values {}", got.join(",")))
    }

    fn dimension_two_binary(&mut self) -> Outcome {
        let cases: Vec<_> = (1..=6u64).map(|t| (2, t, 2, t + t.div_ceil(2))).collect();
        self.sweep(Kind::FB, &cases, |_| false)
    }

    fn dimension_two_ternary(&mut self) -> Outcome {
        let cases: Vec<_> = (1..=5u64).map(|t| (2, t, 3, (8 * t).div_ceil(5))).collect();
        self.sweep(Kind::FB, &cases, |_| false)
    }

    fn two_requests_binary(&mut self) -> Outcome {
        let cases: Vec<_> = (2..=5u64).map(|k| (k, 2, 2, (3 * k).div_ceil(2))).collect();
        let pruned = self.suite == Suite::Fast;
        let out = self.sweep(Kind::FB, &cases, |k| pruned && k == 5)?;
        Ok(if pruned {
            format!("{out} (k=5 with unit columns fixed)")
        } else {
            out
        })
    }

    fn constructions(&mut self) -> Outcome {
        let lim = Limits::default();
        let holds = |c: &Construction| -> Result<(), String> {
            let t = c.claimed_t as u32;
            let ok = match c.claimed_kind {
                Kind::FP => is_functional_pir(&c.matrix, t, &lim).map(|c| c.holds()),
                Kind::FB => is_functional_batch(&c.matrix, t, &lim).map(|c| c.holds()),
            }
            .map_err(|e| e.to_string())?;
            check(ok, || {
                format!("{} (k={}, q={}, n={}) fails {}-{}", c.name, c.k, c.q, c.matrix.n(), c.claimed_kind, t)
            })
        };
        let mut count = 0;
        for q in [2u32, 3, 4] {
            for t in 1..=10 {
                let c = construct_k2(t, q).map_err(|e| e.to_string())?;
                let want = (2 * (q as u64 + 1) * t).div_ceil(q as u64 + 2);
                check(c.matrix.n() as u64 == want, || format!("k=2 length {} != {want}", c.matrix.n()))?;
                holds(&c)?;
                count += 1;
            }
        }
        for k in 2..=8usize {
            let c = construct_binary_t2(k).map_err(|e| e.to_string())?;
            check(c.matrix.n() == (3 * k).div_ceil(2), || format!("binary k={k} length {}", c.matrix.n()))?;
            holds(&c)?;
            count += 1;
            if k <= 6 {
                let f = c.matrix.field().clone();
                for a in 1..(1u64 << k) {
                    for b in a..(1u64 << k) {
                        let (va, vb) = (VectorFq::from_code(k, 2, a), VectorFq::from_code(k, 2, b));
                        let plan = plan_binary_t2(k, &va, &vb).map_err(|e| e.to_string())?;
                        let l = RequestList::new(&f, k, &[va, vb]).map_err(|e| e.to_string())?;
                        check(verify_plan(&c.matrix, &l, &plan), || format!("binary plan k={k} {a} {b}"))?;
                    }
                }
            }
        }
        for (k, q) in [(2usize, 2u32), (3, 2), (2, 3)] {
            for s in 1..=2 {
                let c = construct_all_nonzero(k, q, s).map_err(|e| e.to_string())?;
                holds(&c)?;
                count += 1;
                let f = c.matrix.field().clone();
                for v in ProjectiveSpace::new(k, q).points() {
                    let plan = plan_pir_partition(k, q, &v, s).map_err(|e| e.to_string())?;
                    let l = RequestList::with_multiplicities(&f, k, &[(v.rep().clone(), c.claimed_t as u32)])
                        .map_err(|e| e.to_string())?;
                    check(verify_plan(&c.matrix, &l, &plan), || format!("partition plan k={k} q={q} s={s}"))?;
                }
            }
            let c = construct_double_all_nonzero(k, q).map_err(|e| e.to_string())?;
            holds(&c)?;
            count += 1;
        }
        Ok(format!("{count} matrices verified, explicit plans checked"))
    }

    fn recursion_chain(&mut self) -> Outcome {
        let v = self
            .kb
            .known_value(Kind::FP, 3, 19, 2)
            .ok_or("FP(3,19,2) has no known value; is the seed file loaded?")?;
        check(v.value == 34, || format!("FP(3,19,2) = {}, expected 34", v.value))?;
        let uses_seed = matches!(
            &v.provenance,
            Provenance::Recursion { base, .. } if matches!(**base, Provenance::SeedOffset { .. } | Provenance::Seed { .. })
        );
        check(uses_seed, || format!("unexpected derivation: {}", v.provenance))?;
        check(KnowledgeBase::new().known_value(Kind::FP, 3, 19, 2).is_none(), || {
            "value derivable without seeds".into()
        })?;
        let issues = self.kb.validate_seeds();
        check(issues.is_empty(), || format!("seed issues: {issues:?}"))?;
        Ok(format!("34 via {}", v.provenance))
    }

    fn multiples_coincide(&mut self) -> Outcome {
        for kind in [Kind::FP, Kind::FB] {
            let v = KnowledgeBase::new()
                .known_value(kind, 2, 4, 2)
                .ok_or_else(|| format!("no rule for {kind}(2,4,2)"))?;
            check(v.value == 6, || format!("{kind}(2,4,2) rule gives {}", v.value))?;
            let s = self.solve(kind, 2, 4, 2, false)?;
            check(s == 6, || format!("{kind}(2,4,2) search gives {s}"))?;
        }
        Ok("rules and search agree on 6".into())
    }

    fn bound_sandwich(&mut self) -> Outcome {
        let mut needed: Vec<Params> = Vec::new();
        needed.extend((1..=6u64).map(|t| Params::new(Kind::FB, 2, t, 2)));
        needed.extend((1..=5).map(|t| Params::new(Kind::FB, 2, t, 3)));
        needed.extend((2..=5).map(|k| Params::new(Kind::FB, k, 2, 2)));
        needed.push(Params::new(Kind::FP, 2, 4, 2));
        let kb = KnowledgeBase::new();
        let mut sources = 0;
        for p in needed {
            let v = match self.values.get(&p) {
                Some(&v) => v,
                None => self.solve(p.kind, p.k, p.t, p.q, p.k == 5)?,
            };
            let rec = eval_bounds(p.kind, p.k, p.t, p.q, &kb);
            for s in &rec.lb_sources {
                check(s.value <= v, || format!("{p} = {v} but lower source {} = {}", s.name, s.value))?;
            }
            for s in &rec.ub_sources {
                check(s.value >= v, || format!("{p} = {v} but upper source {} = {}", s.name, s.value))?;
            }
            sources += rec.lb_sources.len() + rec.ub_sources.len();
            if p.kind == Kind::FB {
                // (t(q-1)+1)^n >= (q^k-1)^t
                let lhs = BigUint::from(p.t * (p.q - 1) + 1).pow(v as u32);
                let rhs = BigUint::from(p.q.pow(p.k as u32) - 1).pow(p.t as u32);
                check(lhs >= rhs, || format!("{p} = {v} violates the counting inequality"))?;
                check(rec.lb_sources.iter().any(|s| s.name == "counting"), || format!("{p}: no counting source"))?;
            }
        }
        Ok(format!("{sources} source values checked"))
    }

    fn saturation(&mut self) -> Outcome {
        let v = self.solve(Kind::FB, 2, 2, 5, false)?;
        check(v == 4, || format!("FB(2,2,5) = {v}"))?;
        let kb = KnowledgeBase::new();
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let rec = eval_bounds(Kind::FB, 2, 2, q, &kb);
            check(rec.saturated == (q >= 4), || format!("saturation flag wrong at q={q}"))?;
            if q >= 4 {
                check(rec.lb == 4 && rec.ub == 4, || format!("q={q}: interval [{}, {}]", rec.lb, rec.ub))?;
            }
        }
        Ok("FB(2,2,5) = 4, flagged for q >= 4 only".into())
    }

    fn hall_completeness(&mut self) -> Outcome {
        let f = Field::new(2).map_err(|e| e.to_string())?;
        let (mut ok, mut refused) = (0, 0);
        for code in 0..256u64 {
            let list: Vec<VectorFq> = (0..4).map(|i| VectorFq::from_code(2, 2, (code >> (2 * i)) & 3)).collect();
            let sum = list.iter().fold(VectorFq::zero(2), |a, x| a.add(&f, x));
            match hall_ordering(2, 2, &list) {
                Ok(h) => {
                    check(sum.is_zero(), || format!("ordering returned for nonzero-sum list {code}"))?;
                    check(h.is_valid(&f), || format!("invalid ordering for list {code}"))?;
                    ok += 1;
                }
                Err(ConstructionError::SumNonzero) => {
                    check(!sum.is_zero(), || format!("zero-sum list {code} refused"))?;
                    refused += 1;
                }
                Err(e) => return Err(e.to_string()),
            }
        }
        Ok(format!("{ok} orderings, {refused} nonzero sums refused"))
    }

    fn batch_double_sweep(&mut self) -> Outcome {
        let mut detail = Vec::new();
        for (k, q, expected_lists) in [(2usize, 2u32, 15usize), (2, 3, 220)] {
            let c = construct_double_all_nonzero(k, q).map_err(|e| e.to_string())?;
            let f = c.matrix.field().clone();
            let points: Vec<VectorFq> = ProjectiveSpace::new(k, q).points().map(|p| p.into_rep()).collect();
            let n = (q as usize).pow(k as u32);
            let mut lists = 0;
            for idx in Multisets::new(points.len(), n) {
                let list: Vec<VectorFq> = idx.iter().map(|&i| points[i].clone()).collect();
                serve_double(&c.matrix, &f, k, q, &list)?;
                lists += 1;
            }
            check(lists == expected_lists, || format!("{lists} lists, expected {expected_lists}"))?;
            if self.suite == Suite::Full {
                // every list of nonzero vectors, not only point representatives
                let nonzero: Vec<VectorFq> = (1..n as u64).map(|c| VectorFq::from_code(k, q, c)).collect();
                for idx in Multisets::new(nonzero.len(), n) {
                    let list: Vec<VectorFq> = idx.iter().map(|&i| nonzero[i].clone()).collect();
                    serve_double(&c.matrix, &f, k, q, &list)?;
                }
            }
            detail.push(format!("FB({k},{n},{q}) <= {} over {lists} lists", c.matrix.n()));
        }
        Ok(detail.join("; "))
    }

    fn near_simplex_batch(&mut self) -> Outcome {
        let kb = KnowledgeBase::new();
        for q in [2u64, 3] {
            let t = q * q + q - 2;
            let want = 2 * q * q - 2;
            let v = kb
                .known_value(Kind::FB, 2, t, q)
                .ok_or_else(|| format!("no rule for FB(2,{t},{q})"))?;
            check(v.value == want, || format!("FB(2,{t},{q}) = {}, expected {want}", v.value))?;
            let r = conjecture_check(Conjecture::NearSimplexBatch, 2, q, &kb, None);
            check(r.verdict == Verdict::Consistent, || format!("q={q}: {}", r.verdict))?;
        }
        let s = match self.values.get(&Params::new(Kind::FB, 2, 4, 2)) {
            Some(&v) => v,
            None => self.solve(Kind::FB, 2, 4, 2, false)?,
        };
        check(s == 6, || format!("search gives FB(2,4,2) = {s}"))?;
        Ok("FB(2,4,2) = 6 and FB(2,10,3) = 16".into())
    }

    fn ratio_trend(&mut self) -> Outcome {
        let kb = KnowledgeBase::new();
        let limit = asymptotic_ratio_fp(2, 2);
        let limit = Ratio::new(
            limit.numer().try_into().map_err(|_| "ratio overflow")?,
            limit.denom().try_into().map_err(|_| "ratio overflow")?,
        );
        check(limit == Ratio::new(3u64, 2), || format!("limit {limit}"))?;
        let mut prev: Option<Ratio<u64>> = None;
        for s in 1..=8 {
            let t = 2 * s;
            let v = kb.known_value(Kind::FP, 2, t, 2).ok_or_else(|| format!("no FP(2,{t},2)"))?;
            let r = Ratio::new(v.value, t);
            check(prev.is_none_or(|p| r <= p), || format!("FP ratio increases at t={t}"))?;
            check(r == limit, || format!("FP(2,{t},2)/t = {r}"))?;
            prev = Some(r);
        }
        let fb = kb.known_value(Kind::FB, 2, 20, 2).ok_or("no FB(2,20,2)")?;
        let gap = Ratio::new(fb.value, 20u64);
        let diff = if gap > limit { gap - limit } else { limit - gap };
        check(diff <= Ratio::new(1, 20), || format!("FB(2,20,2)/20 = {gap}"))?;
        Ok(format!("FP ratio constant at 3/2, FB(2,20,2)/20 = {gap}"))
    }

    fn oracle_equivalence(&mut self) -> Outcome {
        let f = Arc::new(Field::new(2).map_err(|e| e.to_string())?);
        let max_n = if self.suite == Suite::Full { 6 } else { 5 };
        let points: Vec<VectorFq> = (1..4).map(|c| VectorFq::from_code(2, 2, c)).collect();
        let lists: Vec<Vec<VectorFq>> = (1..=3)
            .flat_map(|t| Multisets::new(3, t))
            .map(|idx| idx.iter().map(|&i| points[i].clone()).collect())
            .collect();
        let (mut matrices, mut cases) = (0, 0);
        for n in 1..=max_n {
            for code in 0..3u64.pow(n as u32) {
                let cols: Vec<VectorFq> = (0..n).map(|i| points[((code / 3u64.pow(i)) % 3) as usize].clone()).collect();
                if rank(&f, 2, &cols) < 2 {
                    continue;
                }
                let m = MatrixFq::new(f.clone(), 2, cols).map_err(|e| e.to_string())?;
                matrices += 1;
                for list in &lists {
                    let l = RequestList::new(&f, 2, list).map_err(|e| e.to_string())?;
                    let fast = can_serve(&m, &l).map_err(|e| e.to_string())?;
                    if let Some(plan) = &fast {
                        check(verify_plan(&m, &l, plan), || "plan fails verification".into())?;
                    }
                    let slow = oracle_can_serve(&m, list);
                    check(fast.is_some() == slow, || format!("disagreement on {:?} / {list:?}", m.columns()))?;
                    cases += 1;
                }
            }
        }
        Ok(format!("{matrices} matrices, {cases} cases agree"))
    }
}

fn serve_double(m: &MatrixFq, f: &Field, k: usize, q: u32, list: &[VectorFq]) -> Result<(), String> {
    let plan = plan_batch_double(k, q, list).map_err(|e| e.to_string())?;
    let l = RequestList::new(f, k, list).map_err(|e| e.to_string())?;
    check(verify_plan(m, &l, &plan), || format!("plan fails for {list:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_criterion_fails() {
        let mut r = Runner::new(Suite::Fast, KnowledgeBase::new());
        let res = r.run(14);
        assert!(!res.passed);
    }

    #[test]
    fn recursion_criterion_needs_seeds() {
        let mut r = Runner::new(Suite::Fast, KnowledgeBase::new());
        assert!(!r.run(5).passed);
    }
}
