//! Minimalist Grammars: lexicon, merge, move and bounded derivation search.
//!
//! The running example lexicon
//!
//! ```text
//! walks :: =d +CASE v
//! a     :: =n d -case
//! man   :: n
//! accept: v
//! ```
//!
//! derives `a man walks` in three steps (merge, merge, move). The case
//! licensor sits on the verb itself; a fuller analysis would put it on a
//! separate inflectional item, which needs head movement and is not modelled.

mod derive;
pub(crate) mod lexicon;
mod rules;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::feature::{FeatureKind, FeatureSequence};

pub use derive::{derive, recognize, Accepted, Chart, ChartItem, Derivations, MgRule, Recognition, Trace};
pub use lexicon::LexiconError;
pub use rules::{merge, move_tree, move_with_strength, MergeError, MoveError};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LexicalItem {
    /// Empty for phonologically null items.
    pub phon: String,
    pub features: FeatureSequence,
}

impl LexicalItem {
    pub fn new(phon: impl Into<String>, features: FeatureSequence) -> Self {
        LexicalItem {
            phon: phon.into(),
            features,
        }
    }

    /// Builds an item from a feature string, panicking on invalid input.
    /// Intended for tests and fixtures.
    pub fn parse(phon: &str, features: &str) -> Self {
        let fs = FeatureSequence::parse(features).unwrap_or_else(|e| panic!("bad feature sequence `{features}`: {e}"));
        LexicalItem::new(lexicon::phon_of(phon), fs)
    }
}

impl fmt::Display for LexicalItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let phon = if self.phon.is_empty() { "eps" } else { &self.phon };
        write!(f, "{phon} :: {}", self.features)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MgOptions {
    /// Shortest Move Condition: block move when two leaves expose the
    /// requested licensee.
    pub smc: bool,
    /// Specifier Island Condition: nothing moves out of a specifier.
    pub spic: bool,
}

impl Default for MgOptions {
    fn default() -> Self {
        MgOptions { smc: true, spic: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MGrammar {
    pub lexicon: Vec<LexicalItem>,
    /// Name of the accepting category.
    pub accepting: String,
    pub options: MgOptions,
}

impl MGrammar {
    pub fn new(lexicon: Vec<LexicalItem>, accepting: impl Into<String>) -> Self {
        MGrammar {
            lexicon,
            accepting: accepting.into(),
            options: MgOptions::default(),
        }
    }

    pub fn with_options(mut self, options: MgOptions) -> Self {
        self.options = options;
        self
    }

    /// Category names: basic features and selector targets.
    pub fn categories(&self) -> BTreeSet<&str> {
        self.names(|k| matches!(k, FeatureKind::Basic | FeatureKind::Selector))
    }

    /// Move feature names: licensors and licensees.
    pub fn move_features(&self) -> BTreeSet<&str> {
        self.names(|k| matches!(k, FeatureKind::Licensor | FeatureKind::Licensee))
    }

    fn names(&self, keep: impl Fn(FeatureKind) -> bool) -> BTreeSet<&str> {
        self.lexicon
            .iter()
            .flat_map(|item| item.features.features())
            .filter(|f| keep(f.kind))
            .map(|f| f.name.as_str())
            .collect()
    }

    /// Non-fatal problems: the accepting category never occurs, or a name is
    /// used both as a category and as a move feature.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let cats = self.categories();
        if !self.lexicon.is_empty() && !cats.contains(self.accepting.as_str()) {
            out.push(format!(
                "accepting category `{}` does not occur in the lexicon",
                self.accepting
            ));
        }
        for name in cats.intersection(&self.move_features()) {
            out.push(format!("`{name}` is used both as a category and as a move feature"));
        }
        out
    }
}

impl fmt::Display for MGrammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.lexicon {
            writeln!(f, "{item}")?;
        }
        writeln!(f, "accept: {}", self.accepting)?;
        let mut opts = Vec::new();
        opts.push(if self.options.smc { "smc" } else { "no-smc" });
        opts.push(if self.options.spic { "spic" } else { "no-spic" });
        writeln!(f, "options: {}", opts.join(" "))
    }
}
