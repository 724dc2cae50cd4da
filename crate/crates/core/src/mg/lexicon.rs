//! Line-oriented lexicon files:
//!
//! ```text
//! # comment
//! walks :: =d +CASE v
//! eps   :: =v +WH c
//! accept: c
//! options: smc no-spic
//! ```
//!
//! `mcg-override:` blocks (used by paired lexicons) run until a line `end`
//! or the end of the file and are skipped here.

use std::str::FromStr;

use thiserror::Error;

use crate::feature::{FeatureSequence, FeatureSequenceError};

use super::{LexicalItem, MGrammar, MgOptions};

/// A parse error with 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct LexiconError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl LexiconError {
    pub(crate) fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        LexiconError {
            line,
            column,
            message: message.into(),
        }
    }
}

/// Strips a trailing `#` comment; returns the remaining text untrimmed.
pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

pub(crate) fn column_of(line: &str, part: &str) -> usize {
    // `part` is a subslice of `line`
    let offset = part.as_ptr() as usize - line.as_ptr() as usize;
    line[..offset].chars().count() + 1
}

/// `eps` spells the empty phonological form.
pub(crate) fn phon_of(text: &str) -> String {
    if text == "eps" {
        String::new()
    } else {
        text.to_string()
    }
}

impl FromStr for MGrammar {
    type Err = LexiconError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut lexicon = Vec::new();
        let mut accepting = None;
        let mut options = MgOptions::default();
        let mut in_override = false;

        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = strip_comment(raw);
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if in_override {
                if trimmed == "end" {
                    in_override = false;
                }
                continue;
            }
            if trimmed == "mcg-override:" {
                in_override = true;
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix("accept:") {
                let name = rest.trim();
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(LexiconError::new(
                        line_no,
                        column_of(raw, trimmed),
                        "`accept:` takes exactly one category name",
                    ));
                }
                accepting = Some(name.to_string());
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix("options:") {
                for word in rest.split_whitespace() {
                    match word {
                        "smc" => options.smc = true,
                        "no-smc" => options.smc = false,
                        "spic" => options.spic = true,
                        "no-spic" => options.spic = false,
                        _ => {
                            return Err(LexiconError::new(
                                line_no,
                                column_of(raw, word),
                                format!("unknown option `{word}`"),
                            ))
                        }
                    }
                }
                continue;
            }
            let Some((phon, feats)) = line.split_once("::") else {
                return Err(LexiconError::new(
                    line_no,
                    column_of(raw, trimmed),
                    "expected `phon :: features` or a directive",
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
            let tokens: Vec<&str> = feats.split_whitespace().collect();
            let features = FeatureSequence::new(
                tokens
                    .iter()
                    .enumerate()
                    .map(|(i, t)| {
                        crate::feature::Feature::parse(t)
                            .map_err(|e| LexiconError::new(line_no, column_of(raw, t), format!("token {}: {e}", i + 1)))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            )
            .map_err(|e| {
                let column = match &e {
                    FeatureSequenceError::Rejected { index, .. } | FeatureSequenceError::Token { index, .. } => {
                        column_of(raw, tokens[index - 1])
                    }
                    FeatureSequenceError::Incomplete { .. } => raw.trim_end().chars().count() + 1,
                };
                LexiconError::new(line_no, column, e.to_string())
            })?;
            lexicon.push(LexicalItem::new(phon_of(phon), features));
        }

        Ok(MGrammar {
            lexicon,
            accepting: accepting.unwrap_or_else(|| "c".to_string()),
            options,
        })
    }
}
