use std::fmt;

use super::graded::GradedTree;
use super::{MinimalistTree, Projection, Side};

/// One step from the root towards the hole: the node's projection mark,
/// the side the hole lies on, and the untouched sibling subtree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContextStep {
    pub projection: Projection,
    pub hole: Side,
    pub sibling: MinimalistTree,
}

/// A minimalist tree with exactly one hole.
///
/// Stored as the root-to-hole path; plugging rebuilds the tree bottom-up.
/// The empty path is the identity context `x1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct TreeContext {
    steps: Vec<ContextStep>,
}

impl TreeContext {
    pub fn identity() -> Self {
        TreeContext::default()
    }

    pub fn from_steps(steps: Vec<ContextStep>) -> Self {
        TreeContext { steps }
    }

    /// The context of the subtree of `t` at `path`.
    pub fn at(t: &MinimalistTree, path: &[Side]) -> Option<Self> {
        let mut steps = Vec::with_capacity(path.len());
        let mut cur = t;
        for &side in path {
            let MinimalistTree::Node { projection, .. } = cur else {
                return None;
            };
            steps.push(ContextStep {
                projection: *projection,
                hole: side,
                sibling: cur.child(side.other())?.clone(),
            });
            cur = cur.child(side)?;
        }
        Some(TreeContext { steps })
    }

    /// All contexts of `t`, in pre-order of the subtrees they cut out.
    pub fn all(t: &MinimalistTree) -> Vec<Self> {
        t.positions()
            .iter()
            .map(|p| Self::at(t, p).expect("position of t"))
            .collect()
    }

    pub fn steps(&self) -> &[ContextStep] {
        &self.steps
    }

    pub fn path(&self) -> Vec<Side> {
        self.steps.iter().map(|s| s.hole).collect()
    }

    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    pub fn is_identity(&self) -> bool {
        self.steps.is_empty()
    }

    /// The context one level up, if any.
    pub fn parent(&self) -> Option<Self> {
        let (_, rest) = self.steps.split_last()?;
        Some(TreeContext { steps: rest.to_vec() })
    }

    pub fn last_step(&self) -> Option<&ContextStep> {
        self.steps.last()
    }

    /// `C[t]`: fills the hole with `t`.
    pub fn plug(&self, t: MinimalistTree) -> MinimalistTree {
        self.steps.iter().rev().fold(t, |acc, step| {
            let sibling = step.sibling.clone();
            match step.hole {
                Side::Left => MinimalistTree::node(step.projection, acc, sibling),
                Side::Right => MinimalistTree::node(step.projection, sibling, acc),
            }
        })
    }

    /// `C[C']`: the context obtained by plugging `inner` into this one.
    pub fn compose(&self, inner: &TreeContext) -> TreeContext {
        let mut steps = self.steps.clone();
        steps.extend(inner.steps.iter().cloned());
        TreeContext { steps }
    }

    /// The subtree of `t` sitting in the hole, provided this really is a
    /// context of `t` (same marks and siblings along the way).
    pub fn focus<'a>(&self, t: &'a MinimalistTree) -> Option<&'a MinimalistTree> {
        let mut cur = t;
        for step in &self.steps {
            match cur {
                MinimalistTree::Node { projection, .. } if *projection == step.projection => {
                    if cur.child(step.hole.other())? != &step.sibling {
                        return None;
                    }
                    cur = cur.child(step.hole)?;
                }
                _ => return None,
            }
        }
        Some(cur)
    }

    pub fn is_context_of(&self, t: &MinimalistTree) -> bool {
        self.focus(t).is_some()
    }

    /// The context as a graded tree whose hole is variable `x1`.
    pub fn to_graded(&self) -> GradedTree {
        self.steps.iter().rev().fold(GradedTree::Var(1), |acc, step| {
            let sibling = GradedTree::from_minimalist(&step.sibling);
            let symbol = GradedTree::projection_symbol(step.projection);
            let children = match step.hole {
                Side::Left => vec![acc, sibling],
                Side::Right => vec![sibling, acc],
            };
            GradedTree::Node { symbol, children }
        })
    }
}

impl fmt::Display for TreeContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_graded())
    }
}
