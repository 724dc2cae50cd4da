//! Minimalist trees, one-hole contexts and the structural relations between
//! subtrees (dominance, precedence, projection).
//!
//! A subtree is always identified by its context: the tree with that subtree
//! cut out and replaced by a hole. Contexts are stored as root-to-hole paths,
//! see [`TreeContext`].

mod context;
mod graded;
mod relations;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::Serialize;
use thiserror::Error;

use crate::feature::{write_features, Feature};

pub use context::{ContextStep, TreeContext};
pub use graded::{substitute, GradedAlphabet, GradedTree, GradedTreeError, Symbol, VariableBinding};
pub(crate) use relations::maximal_projection_path;
pub use relations::{
    classify_position, dominates, head, maximal_projection, precedes, projects_over, strictly_precedes, PositionClass,
    RelationError, Relations,
};

/// Which daughter of a binary node projects: `<` points left, `>` points right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Projection {
    #[serde(rename = "<")]
    Left,
    #[serde(rename = ">")]
    Right,
}

impl Projection {
    pub fn symbol(self) -> &'static str {
        match self {
            Projection::Left => "<",
            Projection::Right => ">",
        }
    }

    /// The side of the projecting daughter.
    pub fn head_side(self) -> Side {
        match self {
            Projection::Left => Side::Left,
            Projection::Right => Side::Right,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// A leaf: phonological form plus the features it still has to check.
///
/// Traces and spent empty items share the representation `("", [])`; the
/// `trace` flag only records how the leaf came about and is ignored by
/// equality, ordering and hashing.
#[derive(Clone, Debug, Serialize)]
pub struct Leaf {
    pub phon: String,
    pub features: Vec<Feature>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub trace: bool,
}

impl Leaf {
    pub fn new(phon: impl Into<String>, features: Vec<Feature>) -> Self {
        Leaf {
            phon: phon.into(),
            features,
            trace: false,
        }
    }

    pub fn trace() -> Self {
        Leaf {
            phon: String::new(),
            features: Vec::new(),
            trace: true,
        }
    }

    fn key(&self) -> (&str, &[Feature]) {
        (&self.phon, &self.features)
    }
}

impl PartialEq for Leaf {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Leaf {}

impl Hash for Leaf {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state)
    }
}

impl PartialOrd for Leaf {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Leaf {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.phon.is_empty() {
            f.write_str("eps")?;
        } else {
            f.write_str(&self.phon)?;
        }
        if !self.features.is_empty() {
            f.write_str(" / ")?;
            write_features(f, &self.features)?;
        }
        Ok(())
    }
}

/// Binary tree over `{<, >}` with [`Leaf`] labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum MinimalistTree {
    Leaf(Leaf),
    Node {
        projection: Projection,
        left: Box<MinimalistTree>,
        right: Box<MinimalistTree>,
    },
}

impl MinimalistTree {
    pub fn leaf(phon: impl Into<String>, features: Vec<Feature>) -> Self {
        MinimalistTree::Leaf(Leaf::new(phon, features))
    }

    pub fn trace() -> Self {
        MinimalistTree::Leaf(Leaf::trace())
    }

    pub fn node(projection: Projection, left: MinimalistTree, right: MinimalistTree) -> Self {
        MinimalistTree::Node {
            projection,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn left(left: MinimalistTree, right: MinimalistTree) -> Self {
        Self::node(Projection::Left, left, right)
    }

    pub fn right(left: MinimalistTree, right: MinimalistTree) -> Self {
        Self::node(Projection::Right, left, right)
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, MinimalistTree::Leaf(_))
    }

    pub fn as_leaf(&self) -> Option<&Leaf> {
        match self {
            MinimalistTree::Leaf(l) => Some(l),
            MinimalistTree::Node { .. } => None,
        }
    }

    pub fn child(&self, side: Side) -> Option<&MinimalistTree> {
        match self {
            MinimalistTree::Leaf(_) => None,
            MinimalistTree::Node { left, right, .. } => Some(match side {
                Side::Left => left,
                Side::Right => right,
            }),
        }
    }

    pub fn subtree_at(&self, path: &[Side]) -> Option<&MinimalistTree> {
        path.iter().try_fold(self, |t, &side| t.child(side))
    }

    pub fn subtree_at_mut(&mut self, path: &[Side]) -> Option<&mut MinimalistTree> {
        let mut t = self;
        for &side in path {
            t = match t {
                MinimalistTree::Leaf(_) => return None,
                MinimalistTree::Node { left, right, .. } => match side {
                    Side::Left => left,
                    Side::Right => right,
                },
            };
        }
        Some(t)
    }

    /// Path of the head leaf, found by following the projection marks.
    pub fn head_path(&self) -> Vec<Side> {
        let mut path = Vec::new();
        let mut t = self;
        while let MinimalistTree::Node { projection, .. } = t {
            let side = projection.head_side();
            path.push(side);
            t = t.child(side).expect("binary node");
        }
        path
    }

    pub fn head_leaf(&self) -> &Leaf {
        let mut t = self;
        loop {
            match t {
                MinimalistTree::Leaf(l) => return l,
                MinimalistTree::Node {
                    projection,
                    left,
                    right,
                } => {
                    t = match projection {
                        Projection::Left => left,
                        Projection::Right => right,
                    }
                }
            }
        }
    }

    pub fn head_leaf_mut(&mut self) -> &mut Leaf {
        match self {
            MinimalistTree::Leaf(l) => l,
            MinimalistTree::Node {
                projection: Projection::Left,
                left,
                ..
            } => left.head_leaf_mut(),
            MinimalistTree::Node { right, .. } => right.head_leaf_mut(),
        }
    }

    /// Every node position in pre-order (root first, left before right).
    pub fn positions(&self) -> Vec<Vec<Side>> {
        fn go(t: &MinimalistTree, path: &mut Vec<Side>, out: &mut Vec<Vec<Side>>) {
            out.push(path.clone());
            if let MinimalistTree::Node { left, right, .. } = t {
                path.push(Side::Left);
                go(left, path, out);
                path.pop();
                path.push(Side::Right);
                go(right, path, out);
                path.pop();
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Leaves with their paths, left to right.
    pub fn leaves(&self) -> Vec<(Vec<Side>, &Leaf)> {
        fn go<'a>(t: &'a MinimalistTree, path: &mut Vec<Side>, out: &mut Vec<(Vec<Side>, &'a Leaf)>) {
            match t {
                MinimalistTree::Leaf(l) => out.push((path.clone(), l)),
                MinimalistTree::Node { left, right, .. } => {
                    path.push(Side::Left);
                    go(left, path, out);
                    path.pop();
                    path.push(Side::Right);
                    go(right, path, out);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn for_each_leaf_mut(&mut self, f: &mut impl FnMut(&mut Leaf)) {
        match self {
            MinimalistTree::Leaf(l) => f(l),
            MinimalistTree::Node { left, right, .. } => {
                left.for_each_leaf_mut(f);
                right.for_each_leaf_mut(f);
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            MinimalistTree::Leaf(_) => 1,
            MinimalistTree::Node { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }

    /// Number of binary nodes.
    pub fn node_count(&self) -> usize {
        self.leaf_count() - 1
    }

    /// Total number of unchecked features over all leaves.
    pub fn feature_count(&self) -> usize {
        self.leaves().iter().map(|(_, l)| l.features.len()).sum()
    }

    /// Left-to-right phonological yield, empty forms skipped, words joined
    /// with single spaces.
    pub fn yield_string(&self) -> String {
        self.yield_words().join(" ")
    }

    pub fn yield_words(&self) -> Vec<&str> {
        self.leaves()
            .into_iter()
            .filter(|(_, l)| !l.phon.is_empty())
            .map(|(_, l)| l.phon.as_str())
            .collect()
    }

    /// Parses the rendering produced by `Display`, e.g. `<( a , man / n )`.
    pub fn parse(text: &str) -> Result<Self, TreeParseError> {
        let mut p = TreeParser { src: text, pos: 0 };
        let t = p.tree()?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(TreeParseError::Trailing(p.pos));
        }
        Ok(t)
    }
}

/// Concatenation of leaf phonological forms, traces and empty forms skipped.
pub fn yield_string(t: &MinimalistTree) -> String {
    t.yield_string()
}

impl fmt::Display for MinimalistTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinimalistTree::Leaf(l) => write!(f, "{l}"),
            MinimalistTree::Node {
                projection,
                left,
                right,
            } => write!(f, "{}( {left} , {right} )", projection.symbol()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeParseError {
    #[error("unexpected end of input")]
    Eof,
    #[error("expected `{expected}` at byte {at}")]
    Expected { expected: &'static str, at: usize },
    #[error("bad feature in leaf at byte {0}")]
    BadFeature(usize),
    #[error("trailing input at byte {0}")]
    Trailing(usize),
}

struct TreeParser<'a> {
    src: &'a str,
    pos: usize,
}

impl TreeParser<'_> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn eat(&mut self, s: &'static str) -> Result<(), TreeParseError> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            Ok(())
        } else {
            Err(TreeParseError::Expected {
                expected: s,
                at: self.pos,
            })
        }
    }

    fn tree(&mut self) -> Result<MinimalistTree, TreeParseError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        if rest.is_empty() {
            return Err(TreeParseError::Eof);
        }
        for projection in [Projection::Left, Projection::Right] {
            let opener = if projection == Projection::Left { "<(" } else { ">(" };
            if rest.starts_with(opener) {
                self.pos += 2;
                let left = self.tree()?;
                self.eat(",")?;
                let right = self.tree()?;
                self.eat(")")?;
                return Ok(MinimalistTree::node(projection, left, right));
            }
        }
        let start = self.pos;
        let end = rest.find([',', ')']).unwrap_or(rest.len());
        self.pos += end;
        let text = rest[..end].trim();
        let (phon, feats) = match text.split_once(" / ") {
            Some((p, fs)) => (p.trim(), fs),
            None => (text, ""),
        };
        let features = feats
            .split_whitespace()
            .map(Feature::parse)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| TreeParseError::BadFeature(start))?;
        if phon == "eps" {
            let mut leaf = Leaf::new("", features);
            leaf.trace = leaf.features.is_empty();
            Ok(MinimalistTree::Leaf(leaf))
        } else {
            Ok(MinimalistTree::leaf(phon, features))
        }
    }
}
