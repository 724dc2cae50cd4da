//! Syntactic features of minimalist lexical items and the automaton that
//! validates lexical feature sequences.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// The four feature kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureKind {
    /// A category such as `d` or `v`.
    Basic,
    /// `=x`, asks for a tree whose head carries `x`.
    Selector,
    /// `+x` (weak) or `+X` (strong), triggers move.
    Licensor,
    /// `-x`, marks a constituent that must be moved.
    Licensee,
}

/// Strength of a licensor. Only meaningful for [`FeatureKind::Licensor`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strength {
    Strong,
    Weak,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Feature {
    pub kind: FeatureKind,
    /// Normalised (lowercase for licensors) feature name.
    pub name: String,
    pub strength: Strength,
}

impl Feature {
    pub fn basic(name: &str) -> Self {
        Self::new(FeatureKind::Basic, name)
    }

    pub fn selector(name: &str) -> Self {
        Self::new(FeatureKind::Selector, name)
    }

    pub fn licensee(name: &str) -> Self {
        Self::new(FeatureKind::Licensee, name)
    }

    pub fn licensor(name: &str, strength: Strength) -> Self {
        Feature {
            kind: FeatureKind::Licensor,
            name: name.to_lowercase(),
            strength,
        }
    }

    fn new(kind: FeatureKind, name: &str) -> Self {
        Feature {
            kind,
            name: name.to_string(),
            strength: Strength::Weak,
        }
    }

    /// Parses a single token: `=x`, `+x`, `+X`, `-x` or `x`.
    pub fn parse(token: &str) -> Result<Self, FeatureTokenError> {
        let (kind, name) = match token.chars().next() {
            Some('=') => (FeatureKind::Selector, &token[1..]),
            Some('+') => (FeatureKind::Licensor, &token[1..]),
            Some('-') => (FeatureKind::Licensee, &token[1..]),
            Some(_) => (FeatureKind::Basic, token),
            None => return Err(FeatureTokenError::Empty),
        };
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(FeatureTokenError::BadName(token.to_string()));
        }
        Ok(match kind {
            FeatureKind::Licensor => {
                let strong = name.chars().any(char::is_alphabetic) && name.chars().all(|c| !c.is_lowercase());
                let strength = if strong { Strength::Strong } else { Strength::Weak };
                Feature::licensor(name, strength)
            }
            _ => Feature::new(kind, name),
        })
    }

    pub fn is_strong(&self) -> bool {
        self.kind == FeatureKind::Licensor && self.strength == Strength::Strong
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FeatureKind::Basic => write!(f, "{}", self.name),
            FeatureKind::Selector => write!(f, "={}", self.name),
            FeatureKind::Licensee => write!(f, "-{}", self.name),
            FeatureKind::Licensor if self.strength == Strength::Strong => {
                write!(f, "+{}", self.name.to_uppercase())
            }
            FeatureKind::Licensor => write!(f, "+{}", self.name),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeatureTokenError {
    #[error("empty feature token")]
    Empty,
    #[error("malformed feature token `{0}`")]
    BadName(String),
}

/// States of the lexical feature automaton.
///
/// `Triggers` is entered after the first selector and loops on selectors
/// and licensors; `Category` is entered on the basic feature and is the only
/// accepting state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AutomatonState {
    Start,
    Triggers,
    Category,
}

impl AutomatonState {
    fn step(self, kind: FeatureKind) -> Option<Self> {
        use AutomatonState::*;
        use FeatureKind::*;
        match (self, kind) {
            (Start | Triggers, Selector) => Some(Triggers),
            (Triggers, Licensor) => Some(Triggers),
            (Start | Triggers, Basic) => Some(Category),
            (Category, Licensee) => Some(Category),
            _ => None,
        }
    }
}

impl fmt::Display for AutomatonState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AutomatonState::Start => "I",
            AutomatonState::Triggers => "II",
            AutomatonState::Category => "III",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeatureSequenceError {
    #[error("token {index}: {source}")]
    Token {
        index: usize,
        #[source]
        source: FeatureTokenError,
    },
    /// `index` is 1-based.
    #[error("token {index} (`{feature}`) not accepted in state {state}")]
    Rejected {
        index: usize,
        feature: String,
        state: AutomatonState,
    },
    #[error("sequence ends in state {state} without a category feature")]
    Incomplete { state: AutomatonState },
}

/// A feature list accepted by the lexical automaton, i.e. a member of
/// `(S (S | La)*)* B Le*`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct FeatureSequence(Vec<Feature>);

impl FeatureSequence {
    pub fn new(features: Vec<Feature>) -> Result<Self, FeatureSequenceError> {
        let mut state = AutomatonState::Start;
        for (i, feature) in features.iter().enumerate() {
            state = state.step(feature.kind).ok_or_else(|| FeatureSequenceError::Rejected {
                index: i + 1,
                feature: feature.to_string(),
                state,
            })?;
        }
        if state != AutomatonState::Category {
            return Err(FeatureSequenceError::Incomplete { state });
        }
        Ok(FeatureSequence(features))
    }

    /// Parses whitespace separated tokens such as `=d +case v`.
    pub fn parse(text: &str) -> Result<Self, FeatureSequenceError> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        parse_feature_sequence(&tokens)
    }

    pub fn features(&self) -> &[Feature] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Feature> {
        self.0
    }

    /// The features before the category.
    pub fn triggers(&self) -> &[Feature] {
        &self.0[..self.category_index()]
    }

    pub fn category(&self) -> &Feature {
        &self.0[self.category_index()]
    }

    pub fn licensees(&self) -> &[Feature] {
        &self.0[self.category_index() + 1..]
    }

    fn category_index(&self) -> usize {
        self.0
            .iter()
            .position(|f| f.kind == FeatureKind::Basic)
            .expect("validated sequence has a category")
    }
}

/// Validates a token list against the lexical automaton.
pub fn parse_feature_sequence<S: AsRef<str>>(tokens: &[S]) -> Result<FeatureSequence, FeatureSequenceError> {
    let features = tokens
        .iter()
        .enumerate()
        .map(|(i, t)| Feature::parse(t.as_ref()).map_err(|source| FeatureSequenceError::Token { index: i + 1, source }))
        .collect::<Result<Vec<_>, _>>()?;
    FeatureSequence::new(features)
}

impl fmt::Display for FeatureSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_features(f, &self.0)
    }
}

pub(crate) fn write_features(f: &mut fmt::Formatter<'_>, features: &[Feature]) -> fmt::Result {
    for (i, feature) in features.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{feature}")?;
    }
    Ok(())
}
