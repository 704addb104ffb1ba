//! Command-line workbench around `fbpir-core`: file formats, the value
//! cache, a parallel search driver, a brute-force serving oracle and the
//! acceptance checklist.

pub mod acceptance;
pub mod cache;
pub mod cli;
pub mod formats;
pub mod oracle;
pub mod parallel;

use anyhow::Result;
use fbpir_core::KnowledgeBase;

/// Seed values shipped with the tool.
pub const DEFAULT_SEEDS: &str = include_str!("../data/seeds.json");

/// Knowledge base loaded with the bundled seeds.
pub fn default_knowledge_base() -> Result<KnowledgeBase> {
    Ok(KnowledgeBase::with_seeds(formats::parse_seeds(DEFAULT_SEEDS)?))
}

#[cfg(test)]
mod tests {
    #[test]
    fn bundled_seeds_are_consistent() {
        let kb = super::default_knowledge_base().unwrap();
        assert_eq!(kb.seeds().len(), 2);
        assert!(kb.validate_seeds().is_empty());
    }
}
