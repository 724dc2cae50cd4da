use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::{MinimalistTree, Projection};

/// A symbol together with its rank (arity).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub name: String,
    pub rank: usize,
}

impl Symbol {
    pub fn new(name: impl Into<String>, rank: usize) -> Self {
        Symbol {
            name: name.into(),
            rank,
        }
    }
}

/// A finite graded alphabet: symbol names and their ranks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedAlphabet {
    ranks: BTreeMap<String, usize>,
}

impl GradedAlphabet {
    pub fn new<I, S>(symbols: I) -> Self
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        GradedAlphabet {
            ranks: symbols.into_iter().map(|(s, r)| (s.into(), r)).collect(),
        }
    }

    pub fn rank(&self, name: &str) -> Option<usize> {
        self.ranks.get(name).copied()
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.rank(name).map(|r| Symbol::new(name, r))
    }

    /// Checks that every node of `t` uses a known symbol with the right
    /// number of children. Variables are always allowed.
    pub fn check(&self, t: &GradedTree) -> Result<(), GradedTreeError> {
        match t {
            GradedTree::Var(_) => Ok(()),
            GradedTree::Node { symbol, children } => {
                match self.rank(&symbol.name) {
                    None => return Err(GradedTreeError::UnknownSymbol(symbol.name.clone())),
                    Some(rank) if rank != children.len() || rank != symbol.rank => {
                        return Err(GradedTreeError::RankMismatch {
                            symbol: symbol.name.clone(),
                            rank,
                            children: children.len(),
                        })
                    }
                    Some(_) => {}
                }
                children.iter().try_for_each(|c| self.check(c))
            }
        }
    }
}

/// A tree over a graded alphabet, possibly containing variables `x1, x2, ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GradedTree {
    Node { symbol: Symbol, children: Vec<GradedTree> },
    Var(usize),
}

/// Assignment of trees to variables, applied simultaneously.
pub type VariableBinding = BTreeMap<usize, GradedTree>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedTreeError {
    #[error("variable x{0} is unbound")]
    UnboundVariable(usize),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` has rank {rank} but {children} children")]
    RankMismatch {
        symbol: String,
        rank: usize,
        children: usize,
    },
}

impl GradedTree {
    pub fn leaf(name: impl Into<String>) -> Self {
        GradedTree::Node {
            symbol: Symbol::new(name, 0),
            children: Vec::new(),
        }
    }

    pub fn node(name: impl Into<String>, children: Vec<GradedTree>) -> Self {
        let symbol = Symbol::new(name, children.len());
        GradedTree::Node { symbol, children }
    }

    pub(crate) fn projection_symbol(p: Projection) -> Symbol {
        Symbol::new(p.symbol(), 2)
    }

    /// Leaves become rank-0 symbols named by their rendering.
    pub fn from_minimalist(t: &MinimalistTree) -> Self {
        match t {
            MinimalistTree::Leaf(l) => GradedTree::leaf(l.to_string()),
            MinimalistTree::Node {
                projection,
                left,
                right,
            } => GradedTree::Node {
                symbol: Self::projection_symbol(*projection),
                children: vec![Self::from_minimalist(left), Self::from_minimalist(right)],
            },
        }
    }

    pub fn variables(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<usize>) {
        match self {
            GradedTree::Var(x) => out.push(*x),
            GradedTree::Node { children, .. } => children.iter().for_each(|c| c.collect_vars(out)),
        }
    }

    /// `t[t1, ..., tk]`: every occurrence of `xi` replaced by `bindings[i]`.
    /// Substituted trees are not scanned again.
    pub fn substitute(&self, bindings: &VariableBinding) -> Result<GradedTree, GradedTreeError> {
        match self {
            GradedTree::Var(x) => bindings.get(x).cloned().ok_or(GradedTreeError::UnboundVariable(*x)),
            GradedTree::Node { symbol, children } => Ok(GradedTree::Node {
                symbol: symbol.clone(),
                children: children
                    .iter()
                    .map(|c| c.substitute(bindings))
                    .collect::<Result<_, _>>()?,
            }),
        }
    }
}

/// Free-function form of [`GradedTree::substitute`].
pub fn substitute(t: &GradedTree, bindings: &VariableBinding) -> Result<GradedTree, GradedTreeError> {
    t.substitute(bindings)
}

impl fmt::Display for GradedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GradedTree::Var(x) => write!(f, "x{x}"),
            GradedTree::Node { symbol, children } if children.is_empty() => f.write_str(&symbol.name),
            GradedTree::Node { symbol, children } => {
                write!(f, "{}( ", symbol.name)?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" , ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(" )")
            }
        }
    }
}
