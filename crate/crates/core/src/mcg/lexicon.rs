//! MCG lexicon files:
//!
//! ```text
//! walks :: case \ v / d
//! a     :: (case * d) / n
//! man   :: n
//! p1: v d n
//! p2: case
//! weak: case
//! accept: v
//! ```
//!
//! Without `p1:`/`p2:` lines the partition is inferred. An atom written in
//! capitals (`CASE`) is the same atom marked strong; strong is the default.

use std::collections::BTreeSet;
use std::str::FromStr;

use crate::mg::lexicon::{column_of, phon_of, strip_comment};
use crate::mg::LexiconError;

use super::{AtomPartition, Formula, MCGrammar, McgItem};

fn lowercase_atoms(f: &Formula, strong: &mut BTreeSet<String>) -> Formula {
    match f {
        Formula::Atom(a) => {
            let lower = a.to_lowercase();
            if lower != *a && a.to_uppercase() == *a {
                strong.insert(lower.clone());
                Formula::Atom(lower)
            } else {
                f.clone()
            }
        }
        Formula::Under(a, b) => Formula::under(lowercase_atoms(a, strong), lowercase_atoms(b, strong)),
        Formula::Over(a, b) => Formula::over(lowercase_atoms(a, strong), lowercase_atoms(b, strong)),
        Formula::Product(a, b) => Formula::product(lowercase_atoms(a, strong), lowercase_atoms(b, strong)),
    }
}

impl FromStr for MCGrammar {
    type Err = LexiconError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut lexicon = Vec::new();
        // (line, column) of each item's formula, for validation errors
        let mut positions = Vec::new();
        let mut p1: Option<(usize, BTreeSet<String>)> = None;
        let mut p2: Option<BTreeSet<String>> = None;
        let mut weak = BTreeSet::new();
        let mut strong = BTreeSet::new();
        let mut accepting: Option<(usize, usize, String)> = None;

        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = strip_comment(raw);
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let directive = |name: &str| {
                trimmed
                    .strip_prefix(name)
                    .map(|r| r.split_whitespace().map(String::from))
            };
            if let Some(atoms) = directive("p1:") {
                p1.get_or_insert((line_no, BTreeSet::new())).1.extend(atoms);
                continue;
            }
            if let Some(atoms) = directive("p2:") {
                p2.get_or_insert_with(BTreeSet::new).extend(atoms);
                continue;
            }
            if let Some(atoms) = directive("weak:") {
                weak.extend(atoms);
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix("accept:") {
                let name = rest.trim();
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(LexiconError::new(
                        line_no,
                        column_of(raw, trimmed),
                        "`accept:` takes exactly one atom",
                    ));
                }
                accepting = Some((line_no, column_of(raw, name), name.to_string()));
                continue;
            }
            let Some((phon, formula)) = line.split_once("::") else {
                return Err(LexiconError::new(
                    line_no,
                    column_of(raw, trimmed),
                    "expected `phon :: formula` or a directive",
                ));
            };
            let phon = phon.trim();
            if phon.is_empty() {
                return Err(LexiconError::new(
                    line_no,
                    1,
                    "missing phonological form (write `eps` for an empty one)",
                ));
            }
            let text = formula.trim();
            if text.is_empty() {
                return Err(LexiconError::new(
                    line_no,
                    raw.trim_end().chars().count() + 1,
                    "missing formula",
                ));
            }
            let start = column_of(raw, text);
            let f = Formula::parse(text).map_err(|e| LexiconError::new(line_no, start + e.column - 1, e.message))?;
            lexicon.push(McgItem::new(phon_of(phon), lowercase_atoms(&f, &mut strong)));
            positions.push((line_no, start));
        }

        if let Some(both) = weak.intersection(&strong).next() {
            return Err(LexiconError::new(
                1,
                1,
                format!("`{both}` is written strong but listed as weak"),
            ));
        }
        let (accept_line, accept_col, accepting) = accepting.unwrap_or((0, 0, "c".to_string()));
        let partition = match (p1, p2) {
            (None, None) => MCGrammar::infer_partition(&lexicon, &accepting),
            (p1, p2) => {
                let (p1_line, p1) = p1.unwrap_or_default();
                let p2 = p2.unwrap_or_default();
                if let Some(both) = p1.intersection(&p2).next() {
                    return Err(LexiconError::new(
                        p1_line.max(1),
                        1,
                        format!("`{both}` is declared in both p1 and p2"),
                    ));
                }
                let partition = AtomPartition { p1, p2 };
                for (item, &(line, col)) in lexicon.iter().zip(&positions) {
                    if let Some(a) = item
                        .formula
                        .atoms()
                        .into_iter()
                        .find(|a| !partition.p1.contains(*a) && !partition.p2.contains(*a))
                    {
                        return Err(LexiconError::new(
                            line,
                            col,
                            format!("atom `{a}` is in neither p1 nor p2"),
                        ));
                    }
                }
                partition
            }
        };
        if !partition.p1.contains(&accepting) {
            return Err(LexiconError::new(
                accept_line.max(1),
                accept_col.max(1),
                format!("accepting atom `{accepting}` must be a constituent atom (p1)"),
            ));
        }
        let g = MCGrammar {
            lexicon,
            partition,
            accepting,
            weak,
        };
        if let Some((i, v)) = g.violations().into_iter().next() {
            let (line, col) = positions[i];
            return Err(LexiconError::new(line, col, v.to_string()));
        }
        Ok(g)
    }
}
