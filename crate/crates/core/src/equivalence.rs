//! MG to MCG translation and empirical comparison of generated languages.
//!
//! An MG item `t1 t2 ... tk x -l1 ... -lm` becomes
//! `(t2 \ ... \ tk \ (lm * ... * l1 * x)) / t1`: the first selector is the
//! `/` argument (merged first, as a complement), the remaining selectors
//! and licensors are `\` arguments in the order they are checked, and the
//! category with its licensees forms the product, last licensee outermost.
//! Categories go to p1 and move features to p2; weak licensors mark their
//! atom weak.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;
use std::thread;

use serde::Serialize;
use thiserror::Error;

use crate::feature::{Feature, FeatureKind, Strength};
use crate::mcg::{self, AtomPartition, Formula, MCGrammar, McgItem};
use crate::mg::{self, LexicalItem, LexiconError, MGrammar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("`{name}` is used both as a category and as a move feature (item `{item}`)")]
    KindClash { name: String, item: String },
    #[error("licensor `{name}` is strong in one item and weak in another (item `{item}`)")]
    MixedStrength { name: String, item: String },
}

fn atom(f: &Feature) -> Formula {
    Formula::atom(f.name.clone())
}

/// Translates one item; the partition and strengths are the caller's
/// concern.
pub fn translate_item(item: &LexicalItem) -> McgItem {
    let fs = &item.features;
    let mut factors: Vec<Formula> = fs.licensees().iter().rev().map(atom).collect();
    factors.push(atom(fs.category()));
    let packet = Formula::product_of(&factors);
    let formula = match fs.triggers().split_first() {
        None => packet,
        Some((first, rest)) => {
            let body = rest.iter().rev().fold(packet, |acc, t| Formula::under(atom(t), acc));
            Formula::over(body, atom(first))
        }
    };
    McgItem::new(item.phon.clone(), formula)
}

pub fn translate_lexicon(g: &MGrammar) -> Result<MCGrammar, TranslateError> {
    let mut p1 = BTreeSet::new();
    let mut p2 = BTreeSet::new();
    let mut strength: BTreeMap<&str, Strength> = BTreeMap::new();
    p1.insert(g.accepting.clone());
    for item in &g.lexicon {
        for f in item.features.features() {
            match f.kind {
                FeatureKind::Basic | FeatureKind::Selector => p1.insert(f.name.clone()),
                FeatureKind::Licensor | FeatureKind::Licensee => p2.insert(f.name.clone()),
            };
            if f.kind == FeatureKind::Licensor && *strength.entry(&f.name).or_insert(f.strength) != f.strength {
                return Err(TranslateError::MixedStrength {
                    name: f.name.clone(),
                    item: item.to_string(),
                });
            }
        }
    }
    if let Some(name) = p1.intersection(&p2).next() {
        let item = g
            .lexicon
            .iter()
            .find(|i| i.features.features().iter().any(|f| &f.name == name))
            .map_or_else(String::new, |i| i.to_string());
        return Err(TranslateError::KindClash {
            name: name.clone(),
            item,
        });
    }
    let weak: Vec<&str> = strength
        .into_iter()
        .filter(|&(_, s)| s == Strength::Weak)
        .map(|(n, _)| n)
        .collect();
    Ok(MCGrammar::new(
        g.lexicon.iter().map(translate_item).collect(),
        AtomPartition { p1, p2 },
        g.accepting.clone(),
    )
    .with_weak(weak))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairedError {
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error("item `{0}` has no partner with the same pronunciation")]
    Unpaired(String),
}

/// An MG lexicon with its MCG counterpart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairedGrammar {
    pub mg: MGrammar,
    pub mcg: MCGrammar,
    /// `(mg index, mcg index)` pairs of items with the same pronunciation.
    pub pairing: Vec<(usize, usize)>,
}

impl PairedGrammar {
    /// Pairs `mg` with its translation.
    pub fn from_mg(mg: MGrammar) -> Result<Self, TranslateError> {
        let mcg = translate_lexicon(&mg)?;
        let pairing = (0..mg.lexicon.len()).map(|i| (i, i)).collect();
        Ok(PairedGrammar { mg, mcg, pairing })
    }

    /// Pairs items by pronunciation; every item on both sides needs a partner.
    pub fn new(mg: MGrammar, mcg: MCGrammar) -> Result<Self, PairedError> {
        let mut pairing = Vec::new();
        for (i, a) in mg.lexicon.iter().enumerate() {
            for (j, b) in mcg.lexicon.iter().enumerate() {
                if a.phon == b.phon {
                    pairing.push((i, j));
                }
            }
        }
        if let Some((_, a)) = mg
            .lexicon
            .iter()
            .enumerate()
            .find(|(i, _)| !pairing.iter().any(|p| p.0 == *i))
        {
            return Err(PairedError::Unpaired(a.to_string()));
        }
        if let Some((_, b)) = mcg
            .lexicon
            .iter()
            .enumerate()
            .find(|(j, _)| !pairing.iter().any(|p| p.1 == *j))
        {
            return Err(PairedError::Unpaired(b.to_string()));
        }
        Ok(PairedGrammar { mg, mcg, pairing })
    }

    pub fn is_translated(&self) -> bool {
        translate_lexicon(&self.mg).is_ok_and(|t| t == self.mcg)
    }
}

/// A paired file is an MG lexicon, optionally followed by an
/// `mcg-override:` block (ended by `end`) giving the MCG side explicitly.
/// Without a block the MCG side is the translation.
impl FromStr for PairedGrammar {
    type Err = PairedError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mg: MGrammar = text.parse()?;
        // the block's lines in place, everything else blanked, so that
        // diagnostics keep the file's line numbers
        let mut found = false;
        let mut inside = false;
        let mut lines = Vec::new();
        for line in text.lines() {
            let t = mg::lexicon::strip_comment(line).trim();
            if inside && t == "end" {
                inside = false;
                lines.push("");
            } else if inside {
                lines.push(line);
            } else {
                if t == "mcg-override:" {
                    inside = true;
                    found = true;
                }
                lines.push("");
            }
        }
        if !found {
            return Ok(PairedGrammar::from_mg(mg)?);
        }
        let mut source = lines.join("\n");
        if !lines
            .iter()
            .any(|l| mg::lexicon::strip_comment(l).trim().starts_with("accept:"))
        {
            source.push_str(&format!("\naccept: {}\n", mg.accepting));
        }
        let mcg: MCGrammar = source.parse()?;
        PairedGrammar::new(mg, mcg)
    }
}

/// MG and MCG derivations of one string, rendered.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub mg: Option<String>,
    pub mcg: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    pub bound: usize,
    /// Effective bounds after escalation.
    pub mg_bound: usize,
    pub mcg_bound: usize,
    pub mg_strings: BTreeSet<String>,
    pub mcg_strings: BTreeSet<String>,
    pub common: BTreeSet<String>,
    pub mg_only: BTreeSet<String>,
    pub mcg_only: BTreeSet<String>,
    /// Derivations for every string in `mg_only` or `mcg_only`.
    pub witnesses: BTreeMap<String, Witness>,
    pub notes: Vec<String>,
}

impl ComparisonReport {
    pub fn agrees(&self) -> bool {
        self.mg_only.is_empty() && self.mcg_only.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let list = |s: &BTreeSet<String>| {
            if s.is_empty() {
                " (none)".to_string()
            } else {
                s.iter().map(|x| format!("\n  {x}")).collect::<String>()
            }
        };
        out.push_str(&format!(
            "bound: {} (mg searched to {}, mcg to {})\n",
            self.bound, self.mg_bound, self.mcg_bound
        ));
        out.push_str(&format!("common:{}\n", list(&self.common)));
        out.push_str(&format!("mg only:{}\n", list(&self.mg_only)));
        out.push_str(&format!("mcg only:{}\n", list(&self.mcg_only)));
        for (s, w) in &self.witnesses {
            out.push_str(&format!("\nwitness `{s}`\n"));
            let none = "no derivation within the searched bound\n".to_string();
            out.push_str(&format!("mg:\n{}", w.mg.clone().unwrap_or_else(|| none.clone())));
            out.push_str(&format!("mcg:\n{}", w.mcg.clone().unwrap_or(none)));
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }
}

/// Runs both engines at `max_steps` and compares the generated strings. A
/// string found on one side only sends the other side to twice the bound
/// once before it is reported, since an MCG proof needs one move per
/// licensee on top of the MG steps.
pub fn compare(pg: &PairedGrammar, max_steps: usize) -> ComparisonReport {
    let (mgd, mcgd) = thread::scope(|s| {
        let a = s.spawn(|| mg::derive(&pg.mg, max_steps));
        let b = s.spawn(|| mcg::generate(&pg.mcg, max_steps));
        (a.join().expect("mg search"), b.join().expect("mcg search"))
    });
    let mg_base = mgd.strings();
    let mcg_base = mcgd.strings();
    let escalated = 2 * max_steps;
    let mut notes = Vec::new();

    let mcg_more = (!mg_base.is_subset(&mcg_base)).then(|| mcg::generate(&pg.mcg, escalated));
    let mg_more = (!mcg_base.is_subset(&mg_base)).then(|| mg::derive(&pg.mg, escalated));

    let mut mg_strings = mg_base.clone();
    if let Some(more) = &mg_more {
        mg_strings.extend(more.strings().intersection(&mcg_base).cloned());
        notes.push(format!("mg bound raised to {escalated} to look for mcg-only strings"));
    }
    let mut mcg_strings = mcg_base.clone();
    if let Some(more) = &mcg_more {
        mcg_strings.extend(more.strings().intersection(&mg_base).cloned());
        notes.push(format!("mcg bound raised to {escalated} to look for mg-only strings"));
    }
    let common: BTreeSet<String> = mg_strings.intersection(&mcg_strings).cloned().collect();
    let mg_only: BTreeSet<String> = mg_strings.difference(&mcg_strings).cloned().collect();
    let mcg_only: BTreeSet<String> = mcg_strings.difference(&mg_strings).cloned().collect();
    if !mcg_only.is_empty() && pg.mg.options.smc {
        notes.push("the shortest move condition is applied on the mg side only".to_string());
    }

    let mg_full = mg_more.as_ref().unwrap_or(&mgd);
    let mcg_full = mcg_more.as_ref().unwrap_or(&mcgd);
    let witnesses = mg_only
        .iter()
        .chain(&mcg_only)
        .map(|s| {
            let w = Witness {
                mg: mg_full.witness(s).map(|a| a.trace.render()),
                mcg: mcg_full.witness(s).map(|a| a.proof.render()),
            };
            (s.clone(), w)
        })
        .collect();

    ComparisonReport {
        bound: max_steps,
        mg_bound: if mg_more.is_some() { escalated } else { max_steps },
        mcg_bound: if mcg_more.is_some() { escalated } else { max_steps },
        mg_strings,
        mcg_strings,
        common,
        mg_only,
        mcg_only,
        witnesses,
        notes,
    }
}
