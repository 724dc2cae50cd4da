use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use super::{MinimalistTree, Projection, Side, TreeContext};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("context #{0} is not a context of the given tree")]
    NotAContext(u8),
}

fn check(c: &TreeContext, t: &MinimalistTree, which: u8) -> Result<(), RelationError> {
    if c.is_context_of(t) {
        Ok(())
    } else {
        Err(RelationError::NotAContext(which))
    }
}

fn check_both(c1: &TreeContext, c2: &TreeContext, t: &MinimalistTree) -> Result<(), RelationError> {
    check(c1, t, 1)?;
    check(c2, t, 2)
}

fn is_prefix(a: &[Side], b: &[Side]) -> bool {
    a.len() <= b.len() && a == &b[..a.len()]
}

/// `c1 ⊲* c2`: some `C'` satisfies `c1[C'] = c2`. Reflexive.
pub fn dominates(c1: &TreeContext, c2: &TreeContext, t: &MinimalistTree) -> Result<bool, RelationError> {
    check_both(c1, c2, t)?;
    Ok(is_prefix(&c1.path(), &c2.path()))
}

/// `c1 ≺~ c2`, the least relation containing immediate (sibling)
/// precedence and closed under transitivity and `c1 ⊲* c2 ⟹ c2 ≺~ c1`.
pub fn precedes(c1: &TreeContext, c2: &TreeContext, t: &MinimalistTree) -> Result<bool, RelationError> {
    check_both(c1, c2, t)?;
    let rel = Relations::compute(t);
    Ok(rel.precedes(&c1.path(), &c2.path()))
}

/// `c1 <~ c2`, the least relation closed under the projection rules
/// `[0]`, `[trans]`, `[~]`, `[A]` and `[B]`.
pub fn projects_over(c1: &TreeContext, c2: &TreeContext, t: &MinimalistTree) -> Result<bool, RelationError> {
    check_both(c1, c2, t)?;
    let rel = Relations::compute(t);
    Ok(rel.projects_over(&c1.path(), &c2.path()))
}

/// `c1 ≺⁺ c2`: `c1` lies entirely to the left of `c2`.
///
/// Holds when neither context dominates the other and, at the node where
/// their paths part, `c1` goes left and `c2` goes right. Equivalently some
/// dominance-unrelated `a1 ⊲* c1`, `a2 ⊲* c2` have `a1 ≺~ a2`.
pub fn strictly_precedes(c1: &TreeContext, c2: &TreeContext, t: &MinimalistTree) -> Result<bool, RelationError> {
    check_both(c1, c2, t)?;
    Ok(path_left_of(&c1.path(), &c2.path()))
}

pub(crate) fn path_left_of(p1: &[Side], p2: &[Side]) -> bool {
    p1.iter()
        .zip(p2)
        .find(|(a, b)| a != b)
        .is_some_and(|(a, _)| *a == Side::Left)
}

/// The head of `t`, found by following projection marks from the root.
pub fn head(t: &MinimalistTree) -> TreeContext {
    TreeContext::at(t, &t.head_path()).expect("head path lies in the tree")
}

/// The largest subtree that `c` heads: climb while the parent projects
/// towards the current position.
pub fn maximal_projection(c: &TreeContext, t: &MinimalistTree) -> Result<TreeContext, RelationError> {
    check(c, t, 1)?;
    Ok(maximal_projection_unchecked(c))
}

pub(crate) fn maximal_projection_unchecked(c: &TreeContext) -> TreeContext {
    let mut cur = c.clone();
    loop {
        match cur.last_step() {
            Some(step) if step.hole == step.projection.head_side() => {
                cur = cur.parent().expect("non-empty context");
            }
            _ => return cur,
        }
    }
}

pub(crate) fn maximal_projection_path(path: &[Side], t: &MinimalistTree) -> Vec<Side> {
    let mut end = path.len();
    while end > 0 {
        let parent = t.subtree_at(&path[..end - 1]).expect("path in tree");
        match parent {
            MinimalistTree::Node { projection, .. } if projection.head_side() == path[end - 1] => end -= 1,
            _ => break,
        }
    }
    path[..end].to_vec()
}

/// Position of a subtree relative to the head of the whole tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PositionClass {
    Head,
    Complement,
    Specifier,
    Neither,
}

/// Classifies `c` with respect to `head(t)`: complement when it lies in the
/// head's maximal projection after the head, specifier when before it.
pub fn classify_position(c: &TreeContext, t: &MinimalistTree) -> Result<PositionClass, RelationError> {
    check(c, t, 1)?;
    let head_path = t.head_path();
    let path = c.path();
    if path == head_path {
        return Ok(PositionClass::Head);
    }
    let head_ctx = TreeContext::at(t, &head_path).expect("head path");
    let max_proj = maximal_projection_unchecked(&head_ctx).path();
    if !is_prefix(&max_proj, &path) {
        return Ok(PositionClass::Neither);
    }
    Ok(if path_left_of(&head_path, &path) {
        PositionClass::Complement
    } else if path_left_of(&path, &head_path) {
        PositionClass::Specifier
    } else {
        PositionClass::Neither
    })
}

/// All three relations of one tree, tabulated over its node positions.
///
/// Dominance is read off paths; precedence and projection are the least
/// fixpoints of their rule systems, computed by saturation.
#[derive(Clone, Debug)]
pub struct Relations {
    positions: Vec<Vec<Side>>,
    index: HashMap<Vec<Side>, usize>,
    leaf: Vec<bool>,
    dominance: Vec<Vec<bool>>,
    immediate_precedence: Vec<Vec<bool>>,
    precedence: Vec<Vec<bool>>,
    immediate_projection: Vec<Vec<bool>>,
    projection: Vec<Vec<bool>>,
}

impl Relations {
    pub fn compute(t: &MinimalistTree) -> Self {
        let positions = t.positions();
        let n = positions.len();
        let index: HashMap<Vec<Side>, usize> = positions.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let leaf: Vec<bool> = positions
            .iter()
            .map(|p| t.subtree_at(p).expect("position").is_leaf())
            .collect();
        let matrix = || vec![vec![false; n]; n];

        let mut dominance = matrix();
        for (i, a) in positions.iter().enumerate() {
            for (j, b) in positions.iter().enumerate() {
                dominance[i][j] = is_prefix(a, b);
            }
        }

        let mut immediate_precedence = matrix();
        let mut immediate_projection = matrix();
        // parent index for immediate dominance
        let mut parent_of = vec![None; n];
        for (i, p) in positions.iter().enumerate() {
            if let Some(MinimalistTree::Node { projection, .. }) = t.subtree_at(p) {
                let mut lp = p.clone();
                lp.push(Side::Left);
                let mut rp = p.clone();
                rp.push(Side::Right);
                let (l, r) = (index[&lp], index[&rp]);
                parent_of[l] = Some(i);
                parent_of[r] = Some(i);
                immediate_precedence[l][r] = true;
                match projection {
                    Projection::Left => immediate_projection[l][r] = true,
                    Projection::Right => immediate_projection[r][l] = true,
                }
            }
        }

        // [*] and [dom], then [trans]
        let mut precedence = immediate_precedence.clone();
        for i in 0..n {
            for j in 0..n {
                if dominance[i][j] {
                    precedence[j][i] = true;
                }
            }
        }
        transitive_closure(&mut precedence);

        // [0], [~], [A], [B], then [trans]
        let mut projection = immediate_projection.clone();
        for (i, row) in projection.iter_mut().enumerate() {
            row[i] = true;
        }
        for c2 in 0..n {
            for c3 in 0..n {
                if !immediate_projection[c2][c3] {
                    continue;
                }
                for c1 in 0..n {
                    if !dominance[c1][c2] {
                        continue;
                    }
                    for c4 in 0..n {
                        if dominance[c3][c4] {
                            projection[c1][c4] = true;
                        }
                    }
                }
                if let Some(c1) = parent_of[c2] {
                    projection[c2][c1] = true;
                }
            }
        }
        transitive_closure(&mut projection);

        Relations {
            positions,
            index,
            leaf,
            dominance,
            immediate_precedence,
            precedence,
            immediate_projection,
            projection,
        }
    }

    pub fn positions(&self) -> &[Vec<Side>] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn index_of(&self, path: &[Side]) -> Option<usize> {
        self.index.get(path).copied()
    }

    pub fn is_leaf(&self, i: usize) -> bool {
        self.leaf[i]
    }

    fn lookup(&self, m: &[Vec<bool>], a: &[Side], b: &[Side]) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => m[i][j],
            _ => false,
        }
    }

    pub fn dominates(&self, a: &[Side], b: &[Side]) -> bool {
        self.lookup(&self.dominance, a, b)
    }

    pub fn precedes(&self, a: &[Side], b: &[Side]) -> bool {
        self.lookup(&self.precedence, a, b)
    }

    pub fn projects_over(&self, a: &[Side], b: &[Side]) -> bool {
        self.lookup(&self.projection, a, b)
    }

    pub fn dominance_matrix(&self) -> &[Vec<bool>] {
        &self.dominance
    }

    pub fn immediate_precedence_matrix(&self) -> &[Vec<bool>] {
        &self.immediate_precedence
    }

    pub fn precedence_matrix(&self) -> &[Vec<bool>] {
        &self.precedence
    }

    pub fn immediate_projection_matrix(&self) -> &[Vec<bool>] {
        &self.immediate_projection
    }

    pub fn projection_matrix(&self) -> &[Vec<bool>] {
        &self.projection
    }

    /// Positions that project over every position of the tree.
    pub fn projection_minima(&self) -> Vec<Vec<Side>> {
        (0..self.len())
            .filter(|&i| self.projection[i].iter().all(|&b| b))
            .map(|i| self.positions[i].clone())
            .collect()
    }
}

#[allow(clippy::needless_range_loop)]
fn transitive_closure(m: &mut [Vec<bool>]) {
    let n = m.len();
    for k in 0..n {
        for i in 0..n {
            if !m[i][k] {
                continue;
            }
            for j in 0..n {
                if m[k][j] {
                    m[i][j] = true;
                }
            }
        }
    }
}
