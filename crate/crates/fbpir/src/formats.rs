//! Matrix, request-list, recovery-plan and seed files.

use std::sync::Arc;

use anyhow::{anyhow, bail, ensure, Context, Result};
use fbpir_core::{
    Field, FieldElement, Kind, MatrixFq, Params, RecoveryPlan, RequestList, Seed, SeedValue, VectorFq,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub q: u32,
    pub k: usize,
    /// One entry per column, each of length `k`.
    pub columns: Vec<Vec<u32>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &MatrixFq) -> Self {
        MatrixFile {
            q: m.field().order(),
            k: m.k(),
            columns: m.columns().iter().map(|c| c.indices()).collect(),
        }
    }

    pub fn to_matrix(&self, q_cap: u32) -> Result<MatrixFq> {
        let f = Arc::new(Field::with_cap(self.q, q_cap)?);
        let cols = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| {
                ensure!(c.len() == self.k, "column {} has {} entries, expected {}", i + 1, c.len(), self.k);
                Ok(VectorFq::from_indices(&f, c)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixFq::new(f, self.k, cols)?)
    }
}

/// Reads a matrix in JSON or in the plain-text layout `q k n` followed by
/// `k` rows of `n` indices.
pub fn parse_matrix(text: &str, q_cap: u32) -> Result<MatrixFq> {
    let file = if text.trim_start().starts_with('{') {
        serde_json::from_str::<MatrixFile>(text).context("malformed matrix JSON")?
    } else {
        parse_matrix_text(text)?
    };
    file.to_matrix(q_cap)
}

fn parse_matrix_text(text: &str) -> Result<MatrixFile> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header: Vec<usize> = lines
        .next()
        .ok_or_else(|| anyhow!("empty matrix file"))?
        .split_whitespace()
        .map(str::parse)
        .collect::<Result<_, _>>()
        .context("header must be `q k n`")?;
    let [q, k, n] = header[..] else {
        bail!("header must be `q k n`");
    };
    let mut rows = Vec::with_capacity(k);
    for r in 0..k {
        let row: Vec<u32> = lines
            .next()
            .ok_or_else(|| anyhow!("expected {k} rows, found {r}"))?
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .with_context(|| format!("row {}", r + 1))?;
        ensure!(row.len() == n, "row {} has {} entries, expected {n}", r + 1, row.len());
        rows.push(row);
    }
    ensure!(lines.next().is_none(), "trailing data after {k} rows");
    let columns = (0..n).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
    Ok(MatrixFile {
        q: u32::try_from(q)?,
        k,
        columns,
    })
}

pub fn matrix_to_json(m: &MatrixFq) -> String {
    serde_json::to_string(&MatrixFile::from_matrix(m)).expect("matrix serializes")
}

pub fn matrix_to_text(m: &MatrixFq) -> String {
    let mut out = format!("{} {} {}\n", m.field().order(), m.k(), m.n());
    for r in 0..m.k() {
        let row: Vec<String> = m.columns().iter().map(|c| c.coords()[r].index().to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequestEntry {
    pub vector: Vec<u32>,
    #[serde(default = "one")]
    pub mult: u32,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequestFile {
    pub q: u32,
    pub k: usize,
    pub requests: Vec<RequestEntry>,
}

impl RequestFile {
    pub fn to_list(&self, field: &Field) -> Result<RequestList> {
        ensure!(field.order() == self.q, "request file is over GF({}), matrix over GF({})", self.q, field.order());
        let entries = self
            .requests
            .iter()
            .map(|r| {
                ensure!(r.vector.len() == self.k, "request {:?} does not have {} entries", r.vector, self.k);
                let v = VectorFq::from_indices(field, &r.vector)?;
                ensure!(!v.is_zero(), "request vectors must be nonzero");
                Ok((v, r.mult))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RequestList::with_multiplicities(field, self.k, &entries)?)
    }

    pub fn from_list(list: &RequestList) -> Self {
        RequestFile {
            q: list.q(),
            k: list.k(),
            requests: list
                .entries()
                .iter()
                .map(|(p, m)| RequestEntry {
                    vector: p.rep().indices(),
                    mult: *m,
                })
                .collect(),
        }
    }
}

pub fn parse_requests(text: &str, field: &Field) -> Result<RequestList> {
    let file: RequestFile = serde_json::from_str(text).context("malformed request JSON")?;
    file.to_list(field)
}

/// One recovery set; column positions are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanEntry {
    pub request: Vec<u32>,
    pub columns: Vec<usize>,
    pub coefficients: Vec<u32>,
    pub scalar: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanFile {
    pub q: u32,
    pub k: usize,
    pub assignments: Vec<PlanEntry>,
}

impl PlanFile {
    pub fn from_plan(m: &MatrixFq, plan: &RecoveryPlan) -> Self {
        PlanFile {
            q: m.field().order(),
            k: m.k(),
            assignments: plan
                .assignments
                .iter()
                .map(|a| PlanEntry {
                    request: a.request.rep().indices(),
                    columns: a.indices.iter().map(|i| i + 1).collect(),
                    coefficients: a.coefficients.iter().map(|c| c.index()).collect(),
                    scalar: a.scalar.index(),
                })
                .collect(),
        }
    }

    /// Rebuilds the plan against `m`, recomputing each served point.
    pub fn to_plan(&self, m: &MatrixFq) -> Result<RecoveryPlan> {
        let f = m.field();
        ensure!(self.q == f.order() && self.k == m.k(), "plan does not match the matrix");
        let assignments = self
            .assignments
            .iter()
            .map(|e| {
                ensure!(e.columns.len() == e.coefficients.len(), "column and coefficient counts differ");
                let indices = e
                    .columns
                    .iter()
                    .map(|&c| {
                        ensure!(c >= 1 && c <= m.n(), "column {c} out of range 1..={}", m.n());
                        Ok(c - 1)
                    })
                    .collect::<Result<Vec<_>>>()?;
                let coefficients = e
                    .coefficients
                    .iter()
                    .map(|&c| f.element(c).ok_or_else(|| anyhow!("{c} is not a field element")))
                    .collect::<Result<Vec<FieldElement>>>()?;
                Ok(fbpir_core::Assignment::from_witness(m, indices, coefficients)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RecoveryPlan { assignments })
    }
}

pub fn plan_to_json(m: &MatrixFq, plan: &RecoveryPlan) -> String {
    serde_json::to_string_pretty(&PlanFile::from_plan(m, plan)).expect("plan serializes")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedOffset {
    pub base_t: u64,
    pub delta: i64,
}

/// A seed entry: exactly one of `value` and `offset` is present.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedEntry {
    pub kind: String,
    pub k: u64,
    pub t: u64,
    pub q: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<SeedOffset>,
    pub cite: String,
}

pub fn parse_seeds(text: &str) -> Result<Vec<Seed>> {
    let entries: Vec<SeedEntry> = serde_json::from_str(text).context("malformed seed JSON")?;
    entries
        .into_iter()
        .map(|e| {
            let kind: Kind = e.kind.parse().map_err(|m: String| anyhow!(m))?;
            let value = match (e.value, e.offset) {
                (Some(v), None) => SeedValue::Exact(v),
                (None, Some(o)) => SeedValue::Offset {
                    base_t: o.base_t,
                    offset: o.delta,
                },
                _ => bail!("seed {kind}({},{},{}) needs exactly one of `value` and `offset`", e.k, e.t, e.q),
            };
            Ok(Seed {
                params: Params::new(kind, e.k, e.t, e.q),
                value,
                cite: e.cite,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use fbpir_core::{can_serve, verify_plan};

    #[test]
    fn text_and_json_matrices_agree() {
        let text = "2 2 3\n1 0 1\n0 1 1\n";
        let json = r#"{"q":2,"k":2,"columns":[[1,0],[0,1],[1,1]]}"#;
        let a = parse_matrix(text, 256).unwrap();
        let b = parse_matrix(json, 256).unwrap();
        assert_eq!(a, b);
        assert_eq!(matrix_to_text(&a), text);
        assert_eq!(parse_matrix(&matrix_to_json(&a), 256).unwrap(), a);
    }

    #[test]
    fn malformed_matrices_are_rejected() {
        assert!(parse_matrix("2 2 2\n1 0\n0 0\n", 256).is_err());
        assert!(parse_matrix("2 2 3\n1 0 1\n", 256).is_err());
        assert!(parse_matrix(r#"{"q":6,"k":1,"columns":[[1]]}"#, 256).is_err());
        assert!(parse_matrix(r#"{"q":2,"k":2,"columns":[[1]]}"#, 256).is_err());
        assert!(parse_matrix(r#"{"q":2,"k":1,"columns":[[2]]}"#, 256).is_err());
        assert!(parse_matrix(r#"{"q":1024,"k":1,"columns":[[1]]}"#, 256).is_err());
    }

    #[test]
    fn plans_round_trip_with_one_based_columns() {
        let m = parse_matrix("2 2 3\n1 0 1\n0 1 1\n", 256).unwrap();
        let r = parse_requests(r#"{"q":2,"k":2,"requests":[{"vector":[1,0],"mult":2}]}"#, m.field()).unwrap();
        let plan = can_serve(&m, &r).unwrap().unwrap();
        let file = PlanFile::from_plan(&m, &plan);
        assert!(file.assignments.iter().flat_map(|a| &a.columns).all(|&c| (1..=3).contains(&c)));
        let back = file.to_plan(&m).unwrap();
        assert!(verify_plan(&m, &r, &back));
        let text = plan_to_json(&m, &plan);
        let parsed: PlanFile = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed, file);
    }

    #[test]
    fn request_defaults_and_errors() {
        let f = Field::new(3).unwrap();
        let r = parse_requests(r#"{"q":3,"k":2,"requests":[{"vector":[1,2]},{"vector":[2,1]}]}"#, &f).unwrap();
        assert_eq!(r.total(), 2);
        assert!(parse_requests(r#"{"q":3,"k":2,"requests":[{"vector":[0,0]}]}"#, &f).is_err());
        assert!(parse_requests(r#"{"q":2,"k":2,"requests":[{"vector":[1,0]}]}"#, &f).is_err());
    }

    #[test]
    fn seeds_parse_both_forms() {
        let seeds = parse_seeds(
            r#"[{"kind":"FP","k":3,"t":16,"q":2,"value":28,"cite":"a"},
                {"kind":"FP","k":3,"t":15,"q":2,"offset":{"base_t":16,"delta":-1},"cite":"b"}]"#,
        )
        .unwrap();
        assert_eq!(seeds[0].value, SeedValue::Exact(28));
        assert_eq!(seeds[1].value, SeedValue::Offset { base_t: 16, offset: -1 });
        assert!(parse_seeds(r#"[{"kind":"FP","k":3,"t":16,"q":2,"cite":"a"}]"#).is_err());
        assert!(parse_seeds(r#"[{"kind":"XX","k":3,"t":16,"q":2,"value":1,"cite":"a"}]"#).is_err());
    }
}
