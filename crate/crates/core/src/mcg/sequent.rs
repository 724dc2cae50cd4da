use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::feature::Strength;
use crate::label::{Label, Var};

use super::Formula;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Hypothesis {
    pub var: Var,
    pub formula: Formula,
}

impl Hypothesis {
    pub fn new(var: Var, formula: Formula) -> Self {
        Hypothesis { var, formula }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {}", self.var, self.formula)
    }
}

/// Series-parallel order over hypotheses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GBackground {
    Empty,
    Hyp(Hypothesis),
    /// `<G1; G2>`
    Seq(Box<GBackground>, Box<GBackground>),
    /// `(G1, G2)`
    Par(Box<GBackground>, Box<GBackground>),
}

impl GBackground {
    pub fn seq(a: GBackground, b: GBackground) -> Self {
        match (a, b) {
            (GBackground::Empty, x) | (x, GBackground::Empty) => x,
            (a, b) => GBackground::Seq(Box::new(a), Box::new(b)),
        }
    }

    pub fn par(a: GBackground, b: GBackground) -> Self {
        match (a, b) {
            (GBackground::Empty, x) | (x, GBackground::Empty) => x,
            (a, b) => GBackground::Par(Box::new(a), Box::new(b)),
        }
    }

    pub fn from_background(b: &Background) -> Self {
        b.iter()
            .cloned()
            .map(GBackground::Hyp)
            .fold(GBackground::Empty, GBackground::par)
    }

    /// Entropy: forget all order.
    pub fn flatten(&self) -> Background {
        let mut out = Vec::new();
        self.collect(&mut out);
        Background::new(out)
    }

    fn collect(&self, out: &mut Vec<Hypothesis>) {
        match self {
            GBackground::Empty => {}
            GBackground::Hyp(h) => out.push(h.clone()),
            GBackground::Seq(a, b) | GBackground::Par(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }
}

impl fmt::Display for GBackground {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GBackground::Empty => Ok(()),
            GBackground::Hyp(h) => h.fmt(f),
            GBackground::Seq(a, b) => write!(f, "<{a}; {b}>"),
            GBackground::Par(a, b) => write!(f, "({a}, {b})"),
        }
    }
}

/// A commutative background: hypotheses kept sorted by variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Background(Vec<Hypothesis>);

impl Background {
    pub fn new(mut hyps: Vec<Hypothesis>) -> Self {
        hyps.sort();
        Background(hyps)
    }

    pub fn single(h: Hypothesis) -> Self {
        Background(vec![h])
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Hypothesis> {
        self.0.iter()
    }

    pub fn get(&self, var: Var) -> Option<&Formula> {
        self.0.iter().find(|h| h.var == var).map(|h| &h.formula)
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.0.iter().map(|h| h.var).collect()
    }

    /// Variables bound more than once.
    pub fn repeated_variables(&self) -> Vec<Var> {
        let mut seen = BTreeSet::new();
        let mut out: Vec<Var> = self.0.iter().map(|h| h.var).filter(|v| !seen.insert(*v)).collect();
        out.dedup();
        out
    }

    pub fn union(&self, other: &Background) -> Background {
        Background::new(self.0.iter().chain(&other.0).cloned().collect())
    }

    /// `self` without the hypotheses on `vars`.
    pub fn without(&self, vars: &[Var]) -> Background {
        Background(self.0.iter().filter(|h| !vars.contains(&h.var)).cloned().collect())
    }

    pub fn rename(&self, renaming: &BTreeMap<Var, Var>) -> Background {
        Background::new(
            self.0
                .iter()
                .map(|h| Hypothesis::new(*renaming.get(&h.var).unwrap_or(&h.var), h.formula.clone()))
                .collect(),
        )
    }
}

impl fmt::Display for Background {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, h) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            h.fmt(f)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Sequent {
    pub background: Background,
    pub label: Label,
    pub formula: Formula,
}

impl Sequent {
    pub fn new(background: Background, label: Label, formula: Formula) -> Self {
        Sequent {
            background,
            label,
            formula,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.background.is_empty()
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.label
            .variables()
            .union(&self.background.variables())
            .copied()
            .collect()
    }

    pub fn rename(&self, renaming: &BTreeMap<Var, Var>) -> Sequent {
        Sequent {
            background: self.background.rename(renaming),
            label: self.label.rename(renaming),
            formula: self.formula.clone(),
        }
    }

    /// Renames variables to `?x0, ?x1, ...` in order of first occurrence in
    /// the label. Returns the renamed sequent and the map used.
    pub fn canonical(&self) -> (Sequent, BTreeMap<Var, Var>) {
        let mut renaming: BTreeMap<Var, Var> = BTreeMap::new();
        for v in self.label.variable_order() {
            let next = Var(renaming.len() as u32);
            renaming.insert(v, next);
        }
        for v in self.background.variables() {
            let next = Var(renaming.len() as u32);
            renaming.entry(v).or_insert(next);
        }
        (self.rename(&renaming), renaming)
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.background.is_empty() {
            write!(f, "|- {} : {}", self.label, self.formula)
        } else {
            write!(f, "{} |- {} : {}", self.background, self.label, self.formula)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "rule")]
pub enum McgRule {
    #[serde(rename = "lex")]
    Lex,
    #[serde(rename = "axiom")]
    Axiom,
    /// Elimination of `/` with a lexical major; premises `[major, minor]`.
    #[serde(rename = "mg-slash")]
    MergeOver,
    /// Elimination of `\`; premises `[minor, major]`.
    #[serde(rename = "mg-backslash")]
    MergeUnder,
    /// Product elimination; premises `[packet, host]`. `u` receives the
    /// landing site, `v` the remainder.
    #[serde(rename = "mv")]
    Move { strength: Strength, u: Var, v: Var },
    /// Move with a hypothesis `x : A * B` as packet, linking the two
    /// hypotheses of a chain.
    #[serde(rename = "mv-cyclic")]
    Cyclic { strength: Strength, u: Var, v: Var },
}

impl McgRule {
    pub fn name(&self) -> String {
        match self {
            McgRule::Lex => "lex".into(),
            McgRule::Axiom => "axiom".into(),
            McgRule::MergeOver => "mg/".into(),
            McgRule::MergeUnder => "mg\\".into(),
            McgRule::Move { strength, .. } => format!("mv-{}", strength_name(*strength)),
            McgRule::Cyclic { strength, .. } => format!("mv-cyclic-{}", strength_name(*strength)),
        }
    }

    /// Counts towards the step bound: merges and moves.
    pub fn is_step(&self) -> bool {
        !matches!(self, McgRule::Lex | McgRule::Axiom)
    }
}

fn strength_name(s: Strength) -> &'static str {
    match s {
        Strength::Strong => "strong",
        Strength::Weak => "weak",
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProofNode {
    #[serde(flatten)]
    pub rule: McgRule,
    pub conclusion: Sequent,
    pub premises: Vec<ProofNode>,
}

impl ProofNode {
    pub fn new(rule: McgRule, premises: Vec<ProofNode>, conclusion: Sequent) -> Self {
        ProofNode {
            rule,
            premises,
            conclusion,
        }
    }

    pub fn steps(&self) -> usize {
        usize::from(self.rule.is_step()) + self.premises.iter().map(ProofNode::steps).sum::<usize>()
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(ProofNode::size).sum::<usize>()
    }

    /// Pre-order walk with the premise-index path to each node.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&[usize], &'a ProofNode)) {
        fn go<'a>(n: &'a ProofNode, path: &mut Vec<usize>, f: &mut impl FnMut(&[usize], &'a ProofNode)) {
            f(path, n);
            for (i, p) in n.premises.iter().enumerate() {
                path.push(i);
                go(p, path, f);
                path.pop();
            }
        }
        go(self, &mut Vec::new(), f)
    }

    pub fn node_at(&self, path: &[usize]) -> Option<&ProofNode> {
        path.iter().try_fold(self, |n, &i| n.premises.get(i))
    }

    pub fn node_at_mut(&mut self, path: &[usize]) -> Option<&mut ProofNode> {
        path.iter().try_fold(self, |n, &i| n.premises.get_mut(i))
    }

    /// All variables bound anywhere in the proof.
    pub fn variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.walk(&mut |_, n| out.extend(n.conclusion.variables()));
        out
    }

    pub fn rename(&self, renaming: &BTreeMap<Var, Var>) -> ProofNode {
        let r = |v: &Var| *renaming.get(v).unwrap_or(v);
        let rule = match self.rule {
            McgRule::Move { strength, u, v } => McgRule::Move {
                strength,
                u: r(&u),
                v: r(&v),
            },
            McgRule::Cyclic { strength, u, v } => McgRule::Cyclic {
                strength,
                u: r(&u),
                v: r(&v),
            },
            other => other,
        };
        ProofNode {
            rule,
            conclusion: self.conclusion.rename(renaming),
            premises: self.premises.iter().map(|p| p.rename(renaming)).collect(),
        }
    }

    /// One rule per line, premises indented below their conclusion.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.walk(&mut |path, n| {
            out.push_str(&"  ".repeat(path.len()));
            out.push_str(&format!("[{}] {}\n", n.rule.name(), n.conclusion));
        });
        out
    }
}
