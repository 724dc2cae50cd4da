//! Benchmark fixtures.

use std::fs;
use std::path::PathBuf;

use minimalist_core::equivalence::PairedGrammar;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

/// Loads a corpus lexicon with its MCG side.
pub fn fixture(name: &str) -> PairedGrammar {
    let path = corpus_dir().join(name);
    let text = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    text.parse().unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}
