//! Append-only JSON-lines store of computed values.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use fbpir_core::{Kind, KnowledgeBase, Params};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub kind: String,
    pub k: u64,
    pub t: u64,
    pub q: u64,
    /// Exact value when known, otherwise the interval below.
    pub value: Option<u64>,
    pub lb: u64,
    pub ub: u64,
    pub provenance: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exhausted_below: Option<bool>,
    pub tool_version: String,
    pub timestamp: u64,
}

impl CacheEntry {
    pub fn exact(params: Params, value: u64, provenance: &str) -> Self {
        CacheEntry {
            kind: params.kind.name().to_owned(),
            k: params.k,
            t: params.t,
            q: params.q,
            value: Some(value),
            lb: value,
            ub: value,
            provenance: provenance.to_owned(),
            witness: None,
            exhausted_below: None,
            tool_version: TOOL_VERSION.to_owned(),
            timestamp: now(),
        }
    }

    pub fn interval(params: Params, lb: u64, ub: u64, provenance: &str) -> Self {
        CacheEntry {
            value: None,
            lb,
            ub,
            ..CacheEntry::exact(params, lb, provenance)
        }
    }

    pub fn params(&self) -> Option<Params> {
        let kind: Kind = self.kind.parse().ok()?;
        Some(Params::new(kind, self.k, self.t, self.q))
    }
}

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cached {params} = {cached} disagrees with recomputed {computed} (tool version {version})")]
pub struct CacheMismatch {
    pub params: Params,
    pub cached: u64,
    pub computed: u64,
    pub version: String,
}

/// Entries read at open time plus entries recorded since; new entries are
/// written by [`ValueCache::flush`].
#[derive(Debug)]
pub struct ValueCache {
    path: PathBuf,
    entries: Vec<CacheEntry>,
    pending: Vec<CacheEntry>,
}

impl ValueCache {
    pub fn open(path: &Path) -> Result<Self> {
        let mut entries = Vec::new();
        if path.exists() {
            let text = fs::read_to_string(path).with_context(|| format!("reading cache {}", path.display()))?;
            for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
                let e: CacheEntry = serde_json::from_str(line)
                    .with_context(|| format!("cache {} line {}", path.display(), i + 1))?;
                entries.push(e);
            }
        }
        Ok(ValueCache {
            path: path.to_owned(),
            entries,
            pending: Vec::new(),
        })
    }

    pub fn entries(&self) -> impl Iterator<Item = &CacheEntry> {
        self.entries.iter().chain(&self.pending)
    }

    /// Latest exact value for the parameters.
    pub fn exact(&self, params: Params) -> Option<&CacheEntry> {
        self.entries()
            .filter(|e| e.value.is_some() && e.params() == Some(params))
            .last()
    }

    /// Feeds every exact entry into the knowledge base.
    pub fn load_into(&self, kb: &mut KnowledgeBase) {
        for e in self.entries() {
            if let (Some(v), Some(p)) = (e.value, e.params()) {
                kb.insert_solved(p, v);
            }
        }
    }

    /// Queues an entry. An exact value that contradicts a cached exact value
    /// from the same tool version is refused.
    pub fn record(&mut self, entry: CacheEntry) -> Result<(), CacheMismatch> {
        if let (Some(computed), Some(p)) = (entry.value, entry.params()) {
            let clash = self
                .entries()
                .filter(|e| e.tool_version == entry.tool_version && e.params() == Some(p))
                .find_map(|e| e.value.filter(|&v| v != computed));
            if let Some(cached) = clash {
                return Err(CacheMismatch {
                    params: p,
                    cached,
                    computed,
                    version: entry.tool_version,
                });
            }
        }
        self.pending.push(entry);
        Ok(())
    }

    /// Appends queued entries to the file.
    pub fn flush(&mut self) -> Result<()> {
        if self.pending.is_empty() {
            return Ok(());
        }
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .with_context(|| format!("opening cache {}", self.path.display()))?;
        for e in self.pending.drain(..) {
            writeln!(file, "{}", serde_json::to_string(&e)?)?;
            self.entries.push(e);
        }
        Ok(())
    }
}
