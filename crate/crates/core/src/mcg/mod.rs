//! Minimalist Categorial Grammars: labelled proofs in a fragment of mixed
//! linear logic.
//!
//! The running example lexicon
//!
//! ```text
//! walks :: case \ v / d
//! a     :: (case * d) / n
//! man   :: n
//! p1: v d n
//! p2: case
//! accept: v
//! ```
//!
//! proves `|- (a man, walks, eps) : v` with three merges and one move.

mod check;
mod formula;
mod generate;
mod lexicon;
mod rules;
mod sequent;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::feature::Strength;

pub use check::{check_proof, CheckError, CheckErrorKind, CheckReport};
pub use formula::{validate_formula, AtomPartition, Formula, FormulaParseError, FormulaViolation};
pub use generate::{generate, prove, Generation, McgAccepted, Proved};
pub use rules::{axiom, cyclic, hypothesis, lex, lex_item, merge, move_at, move_packet, RuleError, VarSupply};
pub use sequent::{Background, GBackground, Hypothesis, McgRule, ProofNode, Sequent};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct McgItem {
    /// Empty for phonologically null items.
    pub phon: String,
    pub formula: Formula,
}

impl McgItem {
    pub fn new(phon: impl Into<String>, formula: Formula) -> Self {
        McgItem {
            phon: phon.into(),
            formula,
        }
    }

    /// Panics on a malformed formula. Intended for tests and fixtures.
    pub fn parse(phon: &str, formula: &str) -> Self {
        let f = Formula::parse(formula).unwrap_or_else(|e| panic!("bad formula `{formula}`: {e}"));
        McgItem::new(crate::mg::lexicon::phon_of(phon), f)
    }
}

impl fmt::Display for McgItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let phon = if self.phon.is_empty() { "eps" } else { &self.phon };
        write!(f, "{phon} :: {}", self.formula)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MCGrammar {
    pub lexicon: Vec<McgItem>,
    pub partition: AtomPartition,
    /// Accepting atom, in p1.
    pub accepting: String,
    /// Move atoms whose moves are weak; all others move strongly.
    pub weak: BTreeSet<String>,
}

impl MCGrammar {
    pub fn new(lexicon: Vec<McgItem>, partition: AtomPartition, accepting: impl Into<String>) -> Self {
        MCGrammar {
            lexicon,
            partition,
            accepting: accepting.into(),
            weak: BTreeSet::new(),
        }
    }

    pub fn with_weak<I: IntoIterator<Item = S>, S: Into<String>>(mut self, atoms: I) -> Self {
        self.weak = atoms.into_iter().map(Into::into).collect();
        self
    }

    pub fn strength(&self, atom: &str) -> Strength {
        if self.weak.contains(atom) {
            Strength::Weak
        } else {
            Strength::Strong
        }
    }

    pub fn item(&self, phon: &str) -> Option<&McgItem> {
        self.lexicon.iter().find(|i| i.phon == phon)
    }

    /// Items whose formula is not a valid lexical formula, with the reason.
    pub fn violations(&self) -> Vec<(usize, FormulaViolation)> {
        self.lexicon
            .iter()
            .enumerate()
            .filter_map(|(i, item)| validate_formula(&item.formula, &self.partition).err().map(|e| (i, e)))
            .collect()
    }

    /// Partition from usage: left factors of products are move atoms, the
    /// rest are constituent atoms.
    pub fn infer_partition(lexicon: &[McgItem], accepting: &str) -> AtomPartition {
        fn left_factors<'a>(f: &'a Formula, out: &mut BTreeSet<&'a str>) {
            match f {
                Formula::Atom(_) => {}
                Formula::Product(a, b) => {
                    if let Some(x) = a.as_atom() {
                        out.insert(x);
                    }
                    left_factors(a, out);
                    left_factors(b, out);
                }
                Formula::Under(a, b) | Formula::Over(a, b) => {
                    left_factors(a, out);
                    left_factors(b, out);
                }
            }
        }
        let mut p2 = BTreeSet::new();
        let mut all = BTreeSet::new();
        for item in lexicon {
            left_factors(&item.formula, &mut p2);
            all.extend(item.formula.atoms());
        }
        all.insert(accepting);
        let p1: Vec<&str> = all.difference(&p2).copied().collect();
        AtomPartition::new(p1, p2)
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let used: BTreeSet<&str> = self.lexicon.iter().flat_map(|i| i.formula.atoms()).collect();
        if !self.lexicon.is_empty() && !used.contains(self.accepting.as_str()) {
            out.push(format!(
                "accepting atom `{}` does not occur in the lexicon",
                self.accepting
            ));
        }
        for w in &self.weak {
            if !self.partition.p2.contains(w) {
                out.push(format!("weak atom `{w}` is not a move atom"));
            }
        }
        out
    }

    /// Atoms that may label a hypothesis: every factor of a lexical
    /// product, since only those can later be discharged by a move.
    pub(crate) fn hypothesis_atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        for item in &self.lexicon {
            collect_products(&item.formula, &mut |p| {
                for f in p.factors() {
                    if let Some(a) = f.as_atom() {
                        out.insert(a);
                    }
                }
            });
        }
        out
    }

    /// Proper product tails `A * B` of lexical packets: the types a cyclic
    /// move may introduce.
    pub(crate) fn cyclic_types(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        for item in &self.lexicon {
            collect_products(&item.formula, &mut |p| {
                if let Formula::Product(_, rest) = p {
                    if matches!(rest.as_ref(), Formula::Product(..)) {
                        out.insert(rest.as_ref().clone());
                    }
                }
            });
        }
        out
    }
}

fn collect_products<'a>(f: &'a Formula, visit: &mut impl FnMut(&'a Formula)) {
    match f {
        Formula::Atom(_) => {}
        Formula::Product(_, b) => {
            visit(f);
            collect_products(b, visit);
        }
        Formula::Under(a, b) | Formula::Over(a, b) => {
            collect_products(a, visit);
            collect_products(b, visit);
        }
    }
}

impl fmt::Display for MCGrammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.lexicon {
            writeln!(f, "{item}")?;
        }
        let join = |s: &BTreeSet<String>| s.iter().cloned().collect::<Vec<_>>().join(" ");
        writeln!(f, "p1: {}", join(&self.partition.p1))?;
        writeln!(f, "p2: {}", join(&self.partition.p2))?;
        if !self.weak.is_empty() {
            writeln!(f, "weak: {}", join(&self.weak))?;
        }
        writeln!(f, "accept: {}", self.accepting)
    }
}
