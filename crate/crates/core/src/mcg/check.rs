use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::rules::{axiom_node, eliminate, lex_item, merge_over, merge_under, sequent_invariant};
use super::{Formula, MCGrammar, McgItem, McgRule, ProofNode, RuleError, Sequent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckErrorKind {
    #[error("`{0}` is not in the lexicon")]
    UnknownLexicalItem(McgItem),
    #[error("{rule} takes {expected} premises, found {found}")]
    Arity {
        rule: String,
        expected: usize,
        found: usize,
    },
    #[error("an axiom needs exactly one hypothesis")]
    BadAxiom,
    #[error("hypothesis variable {0} is introduced twice")]
    VariableReused(crate::label::Var),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error("conclusion `{found}` does not follow; the rule gives `{expected}`")]
    ConclusionMismatch {
        expected: Box<Sequent>,
        found: Box<Sequent>,
    },
    #[error("{0}")]
    Invariant(String),
}

/// A schema violation and the premise-index path to the offending node.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct CheckError {
    pub path: Vec<usize>,
    pub kind: CheckErrorKind,
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
        write!(f, "at node [{}]: {}", path.join("."), self.kind)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub nodes: usize,
    pub steps: usize,
    pub conclusion: Sequent,
    /// Closed and concluding the accepting atom.
    pub accepted: bool,
    pub string: String,
}

/// Replays every node of `p` against its rule schema.
pub fn check_proof(p: &ProofNode, g: &MCGrammar) -> Result<CheckReport, CheckError> {
    let mut seen = BTreeSet::new();
    let mut first_reuse = None;
    p.walk(&mut |path, n| {
        if n.rule == McgRule::Axiom && first_reuse.is_none() {
            for h in n.conclusion.background.iter() {
                if !seen.insert(h.var) {
                    first_reuse = Some((path.to_vec(), h.var));
                }
            }
        }
    });
    if let Some((path, v)) = first_reuse {
        return Err(CheckError {
            path,
            kind: CheckErrorKind::VariableReused(v),
        });
    }
    replay(p, g, &mut Vec::new())?;
    let c = &p.conclusion;
    Ok(CheckReport {
        nodes: p.size(),
        steps: p.steps(),
        conclusion: c.clone(),
        accepted: c.is_closed() && c.formula == Formula::atom(g.accepting.clone()),
        string: c.label.concat_string(),
    })
}

fn replay(n: &ProofNode, g: &MCGrammar, path: &mut Vec<usize>) -> Result<(), CheckError> {
    for (i, p) in n.premises.iter().enumerate() {
        path.push(i);
        replay(p, g, path)?;
        path.pop();
    }
    let fail = |kind: CheckErrorKind| CheckError {
        path: path.clone(),
        kind,
    };
    let arity = match n.rule {
        McgRule::Lex | McgRule::Axiom => 0,
        _ => 2,
    };
    if n.premises.len() != arity {
        return Err(fail(CheckErrorKind::Arity {
            rule: n.rule.name(),
            expected: arity,
            found: n.premises.len(),
        }));
    }
    let c = &n.conclusion;
    let expected = match n.rule {
        McgRule::Lex => {
            let item = McgItem::new(c.label.concat_string(), c.formula.clone());
            if !g.lexicon.contains(&item) {
                return Err(fail(CheckErrorKind::UnknownLexicalItem(item)));
            }
            lex_item(&item)
        }
        McgRule::Axiom => {
            let mut hyps = c.background.iter();
            match (hyps.next(), hyps.next()) {
                (Some(h), None) => axiom_node(h.var, h.formula.clone()),
                _ => return Err(fail(CheckErrorKind::BadAxiom)),
            }
        }
        McgRule::MergeOver => merge_over(n.premises[0].clone(), n.premises[1].clone()).map_err(|e| fail(e.into()))?,
        McgRule::MergeUnder => merge_under(n.premises[0].clone(), n.premises[1].clone()).map_err(|e| fail(e.into()))?,
        McgRule::Move { strength, u, v } | McgRule::Cyclic { strength, u, v } => eliminate(
            &g.partition,
            n.premises[0].clone(),
            n.premises[1].clone(),
            u,
            v,
            strength,
            matches!(n.rule, McgRule::Cyclic { .. }),
        )
        .map_err(|e| fail(e.into()))?,
    };
    if expected.conclusion != *c {
        return Err(fail(CheckErrorKind::ConclusionMismatch {
            expected: Box::new(expected.conclusion),
            found: Box::new(c.clone()),
        }));
    }
    sequent_invariant(c).map_err(|e| fail(CheckErrorKind::Invariant(e)))
}
