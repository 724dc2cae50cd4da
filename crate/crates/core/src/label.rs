//! String-triplet labels `(spec, head, comp)` over words and variables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

/// A label variable, rendered `?x<n>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Var(pub u32);

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?x{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Token {
    Word(String),
    Var(Var),
}

impl Token {
    pub fn word(w: impl Into<String>) -> Self {
        Token::Word(w.into())
    }

    pub fn as_var(&self) -> Option<Var> {
        match self {
            Token::Var(v) => Some(*v),
            Token::Word(_) => None,
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Word(w) => f.write_str(w),
            Token::Var(v) => v.fmt(f),
        }
    }
}

impl Serialize for Token {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Splits a phonological form into word tokens. The empty string gives no
/// tokens.
pub fn words(phon: &str) -> Vec<Token> {
    phon.split_whitespace().map(Token::word).collect()
}

/// Renders a token sequence, `eps` when empty.
pub fn render(tokens: &[Token]) -> String {
    if tokens.is_empty() {
        "eps".to_string()
    } else {
        let parts: Vec<String> = tokens.iter().map(|t| t.to_string()).collect();
        parts.join(" ")
    }
}

/// Partial map from variables to token sequences.
pub type LabelSubstitution = BTreeMap<Var, Vec<Token>>;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Label {
    pub spec: Vec<Token>,
    pub head: Vec<Token>,
    pub comp: Vec<Token>,
}

impl Label {
    pub fn new(spec: Vec<Token>, head: Vec<Token>, comp: Vec<Token>) -> Self {
        Label { spec, head, comp }
    }

    /// `(eps, t, eps)`
    pub fn head_only(head: Vec<Token>) -> Self {
        Label::new(Vec::new(), head, Vec::new())
    }

    pub fn components(&self) -> [&[Token]; 3] {
        [&self.spec, &self.head, &self.comp]
    }

    fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.spec.iter().chain(&self.head).chain(&self.comp)
    }

    /// `spec • head • comp`
    pub fn concat(&self) -> Vec<Token> {
        self.tokens().cloned().collect()
    }

    /// Space-joined surface string of `concat`; empty for the empty label.
    pub fn concat_string(&self) -> String {
        let parts: Vec<String> = self.tokens().map(|t| t.to_string()).collect();
        parts.join(" ")
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.tokens().filter_map(Token::as_var).collect()
    }

    /// Occurrence count of every variable in the label.
    pub fn occurrences(&self) -> BTreeMap<Var, usize> {
        let mut out = BTreeMap::new();
        for v in self.tokens().filter_map(Token::as_var) {
            *out.entry(v).or_insert(0) += 1;
        }
        out
    }

    /// Variables occurring more than once.
    pub fn nonlinear_variables(&self) -> Vec<Var> {
        self.occurrences()
            .into_iter()
            .filter(|&(_, n)| n > 1)
            .map(|(v, _)| v)
            .collect()
    }

    pub fn is_linear(&self) -> bool {
        self.nonlinear_variables().is_empty()
    }

    /// Simultaneous substitution; unmapped variables stay.
    pub fn substitute(&self, sigma: &LabelSubstitution) -> Label {
        Label {
            spec: substitute(&self.spec, sigma),
            head: substitute(&self.head, sigma),
            comp: substitute(&self.comp, sigma),
        }
    }

    /// Applies a variable-to-variable renaming.
    pub fn rename(&self, renaming: &BTreeMap<Var, Var>) -> Label {
        let sigma: LabelSubstitution = renaming.iter().map(|(&a, &b)| (a, vec![Token::Var(b)])).collect();
        self.substitute(&sigma)
    }

    /// Variables in order of first occurrence, reading spec, head, comp.
    pub fn variable_order(&self) -> Vec<Var> {
        let mut seen = BTreeSet::new();
        self.tokens()
            .filter_map(Token::as_var)
            .filter(|v| seen.insert(*v))
            .collect()
    }
}

pub fn substitute(tokens: &[Token], sigma: &LabelSubstitution) -> Vec<Token> {
    let mut out = Vec::with_capacity(tokens.len());
    for t in tokens {
        match t.as_var().and_then(|v| sigma.get(&v)) {
            Some(image) => out.extend(image.iter().cloned()),
            None => out.push(t.clone()),
        }
    }
    out
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            render(&self.spec),
            render(&self.head),
            render(&self.comp)
        )
    }
}
