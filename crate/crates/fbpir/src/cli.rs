//! Argument parsing and subcommand adapters.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fbpir_core::gf::DEFAULT_Q_CAP;
use fbpir_core::serve::can_serve_limited;
use fbpir_core::{
    conjecture_check, eval_bounds, is_functional_batch, is_functional_pir, verify_plan, Check,
    Conjecture, Field, Kind, KnowledgeBase, Limits, Params, ServeError, SolverError,
    SolverOptions, Verdict,
};

use crate::acceptance::{Runner, Suite};
use crate::cache::{CacheEntry, CacheMismatch, ValueCache};
use crate::formats::{self, MatrixFile};
use crate::parallel::{par_min_length, DEFAULT_CHUNK};

pub mod exit {
    pub const OK: i32 = 0;
    pub const INVALID: i32 = 1;
    pub const BUDGET: i32 = 2;
    pub const NO: i32 = 3;
    pub const SEED_INTEGRITY: i32 = 4;
    pub const CACHE_MISMATCH: i32 = 5;
}

#[derive(Debug, Parser)]
#[command(name = "fbpir", version, about = "Minimum lengths of functional PIR and batch codes")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Largest field order accepted.
    #[arg(long, global = true, default_value_t = DEFAULT_Q_CAP)]
    pub q_cap: u32,
    /// Wall-clock budget for searches.
    #[arg(long, global = true)]
    pub max_seconds: Option<f64>,
    /// Node budget for each serving search.
    #[arg(long, global = true)]
    pub max_nodes: Option<u64>,
    /// JSON-lines value cache.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Seed values replacing the bundled ones.
    #[arg(long, global = true)]
    pub seed_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    #[value(name = "FP", alias = "fp")]
    Fp,
    #[value(name = "FB", alias = "fb")]
    Fb,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Fp => Kind::FP,
            KindArg::Fb => Kind::FB,
        }
    }
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    #[arg(value_enum)]
    pub kind: KindArg,
    pub k: u64,
    pub t: u64,
    pub q: u64,
}

impl ParamArgs {
    fn params(&self) -> Params {
        Params::new(self.kind.into(), self.k, self.t, self.q)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TableFormat {
    Md,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SuiteArg {
    Fast,
    Full,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ConjectureArg {
    NearSimplexBatch,
    ProjectiveBatch,
    SwapInequality,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Known value or bound interval; `--exact` runs the search if needed.
    Value {
        #[command(flatten)]
        p: ParamArgs,
        #[arg(long)]
        exact: bool,
        /// Only search matrices containing the unit vectors.
        #[arg(long)]
        systematic: bool,
    },
    /// Every lower and upper bound source.
    Bounds {
        #[command(flatten)]
        p: ParamArgs,
    },
    /// Whether a matrix serves a request list.
    ServeCheck {
        matrix: PathBuf,
        requests: PathBuf,
        #[arg(long)]
        plan_out: Option<PathBuf>,
    },
    /// Builds a named construction from `key=value` parameters.
    Construct {
        name: String,
        params: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Check the claimed property with the generic serving search.
        #[arg(long)]
        verify: bool,
        /// Request list to plan for.
        #[arg(long)]
        requests: Option<PathBuf>,
        #[arg(long, requires = "requests")]
        plan_out: Option<PathBuf>,
    },
    /// Exhaustive minimum-length search.
    Search {
        #[command(flatten)]
        p: ParamArgs,
        #[arg(long)]
        systematic: bool,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Grid of values and intervals.
    Table {
        #[arg(value_enum)]
        kind: KindArg,
        /// `a..b`, `a` or `a,b,c`.
        #[arg(long)]
        k: String,
        #[arg(long)]
        t: String,
        #[arg(long)]
        q: String,
        #[arg(long, value_enum, default_value = "md")]
        format: TableFormat,
    },
    /// Runs the acceptance checklist.
    VerifyPaper {
        #[arg(long, value_enum, default_value = "fast")]
        suite: SuiteArg,
    },
    /// Compares a conjectured value with the computed interval.
    Conjecture {
        #[arg(value_enum)]
        name: ConjectureArg,
        k: u64,
        q: u64,
        /// Request count for the swap inequality.
        #[arg(long, default_value_t = 2)]
        t: u64,
    },
}

/// Error carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        if let Some(m) = e.downcast_ref::<CacheMismatch>() {
            return Failure::new(exit::CACHE_MISMATCH, m.to_string());
        }
        Failure::new(exit::INVALID, format!("{e:#}"))
    }
}

impl From<CacheMismatch> for Failure {
    fn from(e: CacheMismatch) -> Self {
        Failure::new(exit::CACHE_MISMATCH, e.to_string())
    }
}

type CmdResult = std::result::Result<i32, Failure>;

struct Session {
    global: Global,
    kb: KnowledgeBase,
    cache: Option<ValueCache>,
    started: Instant,
}

impl Session {
    fn limits(&self) -> Limits {
        Limits {
            max_nodes: self.global.max_nodes,
            ..Limits::default()
        }
    }

    fn deadline(&self) -> Option<Instant> {
        self.global
            .max_seconds
            .map(|s| self.started + Duration::from_secs_f64(s.max(0.0)))
    }

    fn record(&mut self, entry: CacheEntry) -> std::result::Result<(), CacheMismatch> {
        match &mut self.cache {
            Some(c) => c.record(entry),
            None => Ok(()),
        }
    }
}

/// Parses arguments, runs the command and returns the exit code. Output goes
/// to `out`, diagnostics to stderr.
pub fn run(cli: Cli, out: &mut dyn std::io::Write) -> i32 {
    match execute(cli, out) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn load_kb(global: &Global) -> std::result::Result<KnowledgeBase, Failure> {
    let text = match &global.seed_file {
        Some(p) => fs::read_to_string(p)
            .map_err(|e| Failure::new(exit::SEED_INTEGRITY, format!("seed file {}: {e}", p.display())))?,
        None => crate::DEFAULT_SEEDS.to_owned(),
    };
    let seeds = formats::parse_seeds(&text).map_err(|e| Failure::new(exit::SEED_INTEGRITY, format!("seed file: {e:#}")))?;
    let kb = KnowledgeBase::with_seeds(seeds);
    let issues = kb.validate_seeds();
    if !issues.is_empty() {
        let msg: Vec<String> = issues.iter().map(|i| format!("{}: {}", i.params, i.message)).collect();
        return Err(Failure::new(exit::SEED_INTEGRITY, format!("seed integrity: {}", msg.join("; "))));
    }
    Ok(kb)
}

fn execute(cli: Cli, out: &mut dyn std::io::Write) -> CmdResult {
    let mut kb = load_kb(&cli.global)?;
    let cache = match &cli.global.cache {
        Some(p) => {
            let c = ValueCache::open(p)?;
            c.load_into(&mut kb);
            Some(c)
        }
        None => None,
    };
    let mut ctx = Session {
        global: cli.global,
        kb,
        cache,
        started: Instant::now(),
    };
    let mut text = String::new();
    let result = match cli.command {
        Command::Value { p, exact, systematic } => cmd_value(&mut ctx, &mut text, p.params(), exact, systematic),
        Command::Bounds { p } => cmd_bounds(&ctx, &mut text, p.params()),
        Command::ServeCheck {
            matrix,
            requests,
            plan_out,
        } => cmd_serve_check(&ctx, &mut text, &matrix, &requests, plan_out.as_deref()),
        Command::Construct {
            name,
            params,
            out: path,
            verify,
            requests,
            plan_out,
        } => cmd_construct(&ctx, &mut text, &name, &params, path.as_deref(), verify, requests.as_deref(), plan_out.as_deref()),
        Command::Search {
            p,
            systematic,
            threads,
            witness_out,
        } => cmd_search(&mut ctx, &mut text, p.params(), systematic, threads, witness_out.as_deref()),
        Command::Table { kind, k, t, q, format } => cmd_table(&ctx, &mut text, kind.into(), &k, &t, &q, format),
        Command::VerifyPaper { suite } => cmd_verify(&ctx, out, suite),
        Command::Conjecture { name, k, q, t } => cmd_conjecture(&ctx, &mut text, name, k, q, t),
    };
    out.write_all(text.as_bytes()).ok();
    // single writer, at the end
    if let Some(c) = &mut ctx.cache {
        c.flush().map_err(Failure::from)?;
    }
    result
}

fn check_params(p: Params, q_cap: u32) -> std::result::Result<(), Failure> {
    if p.k == 0 || p.t == 0 {
        return Err(Failure::new(exit::INVALID, "k and t must be at least 1"));
    }
    let q = u32::try_from(p.q).map_err(|_| Failure::new(exit::INVALID, "q too large"))?;
    Field::with_cap(q, q_cap).map_err(|e| Failure::new(exit::INVALID, e.to_string()))?;
    Ok(())
}

fn solver_options<'a>(ctx: &Session, systematic: bool, stop: &'a (dyn Fn() -> bool + Sync)) -> SolverOptions<'a> {
    SolverOptions {
        systematic,
        limits: ctx.limits(),
        stop: Some(stop),
        q_cap: ctx.global.q_cap,
        ..SolverOptions::default()
    }
}

fn cmd_value(ctx: &mut Session, o: &mut String, p: Params, exact: bool, systematic: bool) -> CmdResult {
    check_params(p, ctx.global.q_cap)?;
    if let Some(v) = ctx.kb.known_value(p.kind, p.k, p.t, p.q) {
        ctx.record(CacheEntry::exact(p, v.value, &v.provenance.to_string()))?;
        writeln!(o, "{} (exact, {})", v.value, v.provenance).ok();
        return Ok(exit::OK);
    }
    let rec = eval_bounds(p.kind, p.k, p.t, p.q, &ctx.kb);
    if rec.lb == rec.ub {
        ctx.record(CacheEntry::exact(p, rec.lb, "matching bounds"))?;
        writeln!(o, "{} (exact, matching bounds)", rec.lb).ok();
        return Ok(exit::OK);
    }
    if !exact {
        writeln!(o, "{}", describe_interval(rec.lb, rec.ub, &rec)).ok();
        return Ok(exit::OK);
    }
    let deadline = ctx.deadline();
    let stop = move || deadline.is_some_and(|d| Instant::now() >= d);
    let opts = solver_options(ctx, systematic, &stop);
    match par_min_length(p.kind, p.k, p.t, p.q, &opts, DEFAULT_CHUNK) {
        Ok(r) => {
            record_search(ctx, p, &r)?;
            writeln!(o, "{} (exact, exhaustive search)", r.n_min).ok();
            Ok(exit::OK)
        }
        Err(SolverError::BudgetExceeded { lower, upper }) => {
            let (lb, ub) = (rec.lb.max(lower), rec.ub.min(upper));
            ctx.record(CacheEntry::interval(p, lb, ub, "bounds and partial search"))?;
            writeln!(o, "{} (search budget exhausted)", describe_interval(lb, ub, &rec)).ok();
            Ok(exit::BUDGET)
        }
        Err(e @ SolverError::InstanceTooLarge { .. }) => {
            writeln!(o, "{} ({e})", describe_interval(rec.lb, rec.ub, &rec)).ok();
            Ok(exit::BUDGET)
        }
        Err(e) => Err(Failure::new(exit::INVALID, e.to_string())),
    }
}

fn record_search(ctx: &mut Session, p: Params, r: &fbpir_core::SearchResult) -> std::result::Result<(), CacheMismatch> {
    let mut e = CacheEntry::exact(p, r.n_min, "exhaustive search");
    e.witness = Some(MatrixFile::from_matrix(&r.witness).columns);
    e.exhausted_below = Some(r.exhausted_below);
    ctx.record(e)
}

fn describe_interval(lb: u64, ub: u64, rec: &fbpir_core::BoundRecord) -> String {
    let best = |v: &[fbpir_core::BoundSource], x: u64| -> Vec<&str> {
        v.iter().filter(|s| s.value == x).map(|s| s.name).collect()
    };
    let lo = best(&rec.lb_sources, lb);
    let hi = best(&rec.ub_sources, ub);
    let name = |v: Vec<&str>| if v.is_empty() { "search".to_owned() } else { v.join(", ") };
    format!("[{lb}, {ub}] (lower: {}; upper: {})", name(lo), name(hi))
}

fn cmd_bounds(ctx: &Session, o: &mut String, p: Params) -> CmdResult {
    check_params(p, ctx.global.q_cap)?;
    let rec = eval_bounds(p.kind, p.k, p.t, p.q, &ctx.kb);
    writeln!(o, "{p}: [{}, {}]", rec.lb, rec.ub).ok();
    if let Some(v) = &rec.known {
        writeln!(o, "known: {} ({})", v.value, v.provenance).ok();
    }
    for s in &rec.lb_sources {
        writeln!(o, "lower {:<16} {}", s.name, s.value).ok();
    }
    for s in &rec.ub_sources {
        writeln!(o, "upper {:<16} {}", s.name, s.value).ok();
    }
    if rec.saturated {
        writeln!(o, "saturated: larger q cannot lower the value").ok();
    }
    Ok(exit::OK)
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(exit::INVALID, format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::new(exit::INVALID, format!("{}: {e}", path.display())))
}

fn serve_error(e: ServeError) -> Failure {
    match e {
        ServeError::BudgetExceeded(_) | ServeError::InstanceTooLarge { .. } => Failure::new(exit::BUDGET, e.to_string()),
        other => Failure::new(exit::INVALID, other.to_string()),
    }
}

fn cmd_serve_check(
    ctx: &Session,
    o: &mut String,
    matrix: &Path,
    requests: &Path,
    plan_out: Option<&Path>,
) -> CmdResult {
    let m = formats::parse_matrix(&read(matrix)?, ctx.global.q_cap)?;
    if m.n() == 0 {
        return Err(Failure::new(exit::INVALID, "matrix has no columns"));
    }
    let l = formats::parse_requests(&read(requests)?, m.field())?;
    match can_serve_limited(&m, &l, ctx.global.max_nodes).map_err(serve_error)? {
        Some(plan) => {
            writeln!(o, "servable: {} requests using {} of {} columns", l.total(), plan.columns_used(), m.n()).ok();
            let json = formats::plan_to_json(&m, &plan);
            match plan_out {
                Some(path) => write_file(path, &(json + "\n"))?,
                None => {
                    writeln!(o, "{json}").ok();
                }
            }
            Ok(exit::OK)
        }
        None => {
            writeln!(o, "not servable").ok();
            Ok(exit::NO)
        }
    }
}

fn parse_key_values(items: &[String]) -> Result<BTreeMap<String, u64>> {
    let mut map = BTreeMap::new();
    for item in items {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| anyhow!("expected key=value, found `{item}`"))?;
        let v: u64 = value.parse().with_context(|| format!("value of `{key}`"))?;
        if map.insert(key.to_ascii_lowercase(), v).is_some() {
            bail!("`{key}` given twice");
        }
    }
    Ok(map)
}

fn take(map: &mut BTreeMap<String, u64>, key: &str) -> Result<u64> {
    map.remove(key).ok_or_else(|| anyhow!("missing parameter `{key}`"))
}

#[allow(clippy::too_many_arguments)]
fn cmd_construct(
    ctx: &Session,
    o: &mut String,
    name: &str,
    params: &[String],
    path: Option<&Path>,
    verify: bool,
    requests: Option<&Path>,
    plan_out: Option<&Path>,
) -> CmdResult {
    use fbpir_core::constructions::*;
    let name: ConstructionName = name.parse().map_err(|e: ConstructionError| Failure::new(exit::INVALID, e.to_string()))?;
    let mut kv = parse_key_values(params)?;
    let q32 = |v: u64| u32::try_from(v).map_err(|_| anyhow!("q too large"));
    let c = match name {
        ConstructionName::K2Projective => {
            let t = take(&mut kv, "t")?;
            construct_k2(t, q32(take(&mut kv, "q")?)?)
        }
        ConstructionName::BinaryT2Even | ConstructionName::BinaryT2Odd => {
            kv.remove("q").filter(|&q| q != 2).map_or(Ok(()), |q| Err(anyhow!("this construction is binary, got q={q}")))?;
            let k = take(&mut kv, "k")? as usize;
            let parity_ok = (k % 2 == 0) == (name == ConstructionName::BinaryT2Even);
            if !parity_ok {
                return Err(Failure::new(exit::INVALID, format!("{name} does not accept k={k}")));
            }
            construct_binary_t2(k)
        }
        ConstructionName::AllNonzeroRepeated => {
            let k = take(&mut kv, "k")? as usize;
            let q = q32(take(&mut kv, "q")?)?;
            let s = kv.remove("s").unwrap_or(1);
            construct_all_nonzero(k, q, s)
        }
        ConstructionName::DoubleAllNonzero => {
            let k = take(&mut kv, "k")? as usize;
            construct_double_all_nonzero(k, q32(take(&mut kv, "q")?)?)
        }
    }
    .map_err(|e| Failure::new(exit::INVALID, e.to_string()))?;
    if let Some(extra) = kv.keys().next() {
        return Err(Failure::new(exit::INVALID, format!("unknown parameter `{extra}` for {name}")));
    }
    if c.matrix.field().order() > ctx.global.q_cap {
        return Err(Failure::new(exit::INVALID, "field order exceeds --q-cap"));
    }
    let json = formats::matrix_to_json(&c.matrix);
    match path {
        Some(p) => write_file(p, &(json.clone() + "\n"))?,
        None => {
            writeln!(o, "{json}").ok();
        }
    }
    let mut code = exit::OK;
    if verify {
        let t = c.claimed_t as u32;
        let lim = ctx.limits();
        let failure = match c.claimed_kind {
            Kind::FP => match is_functional_pir(&c.matrix, t, &lim).map_err(serve_error)? {
                Check::Holds => None,
                Check::Fails(p) => Some(format!("point {:?}", p.rep().indices())),
            },
            Kind::FB => match is_functional_batch(&c.matrix, t, &lim).map_err(serve_error)? {
                Check::Holds => None,
                Check::Fails(l) => Some(format!("list {:?}", formats::RequestFile::from_list(&l).requests)),
            },
        };
        match failure {
            None => {
                eprintln!("verified: {} columns, {}-{} with t={t}", c.matrix.n(), c.claimed_kind, c.claimed_kind);
            }
            Some(w) => {
                eprintln!("VERIFICATION FAILED: {name} does not serve {w}");
                code = exit::NO;
            }
        }
    }
    if let Some(req) = requests {
        let l = formats::parse_requests(&read(req)?, c.matrix.field())?;
        match can_serve_limited(&c.matrix, &l, ctx.global.max_nodes).map_err(serve_error)? {
            Some(plan) if verify_plan(&c.matrix, &l, &plan) => {
                let plan_json = formats::plan_to_json(&c.matrix, &plan) + "\n";
                match plan_out {
                    Some(p) => write_file(p, &plan_json)?,
                    None => o.push_str(&plan_json),
                }
            }
            _ => {
                eprintln!("request list is not servable by this matrix");
                code = exit::NO;
            }
        }
    }
    Ok(code)
}

fn cmd_search(
    ctx: &mut Session,
    o: &mut String,
    p: Params,
    systematic: bool,
    threads: Option<usize>,
    witness_out: Option<&Path>,
) -> CmdResult {
    check_params(p, ctx.global.q_cap)?;
    let deadline = ctx.deadline();
    let stop = move || deadline.is_some_and(|d| Instant::now() >= d);
    let opts = solver_options(ctx, systematic, &stop);
    let run = || par_min_length(p.kind, p.k, p.t, p.q, &opts, DEFAULT_CHUNK);
    let res = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::new(exit::INVALID, e.to_string()))?
            .install(run),
        None => run(),
    };
    match res {
        Ok(r) => {
            writeln!(o, "{p} = {}", r.n_min).ok();
            writeln!(
                o,
                "lengths {}..{} searched, {} candidates, shorter lengths exhausted: {}",
                r.start,
                r.n_min,
                r.candidates_tested,
                r.exhausted_below || r.n_min == r.start
            )
            .ok();
            let json = formats::matrix_to_json(&r.witness);
            match witness_out {
                Some(path) => write_file(path, &(json + "\n"))?,
                None => {
                    writeln!(o, "{json}").ok();
                }
            }
            record_search(ctx, p, &r)?;
            Ok(exit::OK)
        }
        Err(SolverError::BudgetExceeded { lower, upper }) => {
            writeln!(o, "{p} in [{lower}, {upper}] (search budget exhausted)").ok();
            Ok(exit::BUDGET)
        }
        Err(e @ SolverError::InstanceTooLarge { .. }) => {
            writeln!(o, "{e}").ok();
            Ok(exit::BUDGET)
        }
        Err(e) => Err(Failure::new(exit::INVALID, e.to_string())),
    }
}

/// `a..b` (inclusive), `a` or `a,b,c`.
pub fn parse_range(s: &str) -> Result<Vec<u64>> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().with_context(|| format!("range `{s}`"))?;
        let b: u64 = b.trim_start_matches('=').trim().parse().with_context(|| format!("range `{s}`"))?;
        if a > b {
            bail!("empty range `{s}`");
        }
        return Ok((a..=b).collect());
    }
    s.split(',')
        .map(|x| x.trim().parse::<u64>().with_context(|| format!("list `{s}`")))
        .collect()
}

fn cmd_table(ctx: &Session, o: &mut String, kind: Kind, k: &str, t: &str, q: &str, format: TableFormat) -> CmdResult {
    let (ks, ts, qs) = (parse_range(k)?, parse_range(t)?, parse_range(q)?);
    for &qv in &qs {
        for &kv in &ks {
            check_params(Params::new(kind, kv, 1, qv), ctx.global.q_cap)?;
        }
    }
    if ts.contains(&0) {
        return Err(Failure::new(exit::INVALID, "t must be at least 1"));
    }
    let header: Vec<String> = ["q".to_owned(), "k".to_owned()]
        .into_iter()
        .chain(ts.iter().map(|t| format!("t={t}")))
        .collect();
    match format {
        TableFormat::Md => {
            writeln!(o, "| {} |", header.join(" | ")).ok();
            writeln!(o, "|{}", "---|".repeat(header.len())).ok();
        }
        TableFormat::Csv => {
            writeln!(o, "{}", header.join(",")).ok();
        }
    }
    for &qv in &qs {
        for &kv in &ks {
            let mut row = vec![qv.to_string(), kv.to_string()];
            for &tv in &ts {
                let rec = eval_bounds(kind, kv, tv, qv, &ctx.kb);
                row.push(if rec.lb == rec.ub {
                    rec.lb.to_string()
                } else {
                    format!("{}\u{2013}{}", rec.lb, rec.ub)
                });
            }
            match format {
                TableFormat::Md => writeln!(o, "| {} |", row.join(" | ")),
                TableFormat::Csv => writeln!(o, "{}", row.join(",")),
            }
            .ok();
        }
    }
    Ok(exit::OK)
}

fn cmd_verify(ctx: &Session, out: &mut dyn std::io::Write, suite: SuiteArg) -> CmdResult {
    let suite = match suite {
        SuiteArg::Fast => Suite::Fast,
        SuiteArg::Full => Suite::Full,
    };
    let mut runner = Runner::new(suite, ctx.kb.clone());
    let started = Instant::now();
    let results = runner.run_all(|r| {
        writeln!(out, "{r}").ok();
        out.flush().ok();
    });
    let failed = results.iter().filter(|r| !r.passed).count();
    writeln!(
        out,
        "{} of {} criteria passed in {:.1}s",
        results.len() - failed,
        results.len(),
        started.elapsed().as_secs_f64()
    )
    .ok();
    Ok(if failed == 0 { exit::OK } else { exit::NO })
}

fn cmd_conjecture(ctx: &Session, o: &mut String, name: ConjectureArg, k: u64, q: u64, t: u64) -> CmdResult {
    check_params(Params::new(Kind::FB, k, t, q), ctx.global.q_cap)?;
    let c = match name {
        ConjectureArg::NearSimplexBatch => Conjecture::NearSimplexBatch,
        ConjectureArg::ProjectiveBatch => Conjecture::ProjectiveBatch,
        ConjectureArg::SwapInequality => Conjecture::SwapInequality { t },
    };
    let deadline = ctx.deadline();
    let stop = move || deadline.is_some_and(|d| Instant::now() >= d);
    let opts = solver_options(ctx, false, &stop);
    let searching = ctx.global.max_seconds.is_some();
    let r = conjecture_check(c, k, q, &ctx.kb, searching.then_some(&opts));
    write!(o, "{} at {}: interval [{}, {}]", c.name(), r.params, r.interval.0, r.interval.1).ok();
    if let Some(v) = r.conjectured {
        write!(o, ", conjectured {v}").ok();
    }
    if let Some((a, b)) = r.swapped {
        write!(o, ", swapped FB({},{},{}) in [{a}, {b}]", r.params.t, r.params.k, q).ok();
    }
    writeln!(o, ": {}", r.verdict).ok();
    Ok(match r.verdict {
        Verdict::Consistent => exit::OK,
        Verdict::Counterexample => exit::NO,
        Verdict::Undecided => exit::BUDGET,
    })
}
