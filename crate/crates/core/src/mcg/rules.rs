use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::feature::Strength;
use crate::label::{words, Label, LabelSubstitution, Token, Var};

use super::{
    AtomPartition, Background, Formula, GBackground, Hypothesis, MCGrammar, McgItem, McgRule, ProofNode, Sequent,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("no lexical item `{0}`")]
    UnknownItem(String),
    #[error("variable {0} is already in use")]
    VariableReuse(Var),
    #[error("merge needs an implication, found `{0}`")]
    NotAnImplication(Formula),
    #[error("argument mismatch: the major premise expects `{expected}`, the minor premise has `{found}`")]
    ArgumentMismatch { expected: Formula, found: Formula },
    #[error("merge with `/` needs a lexical major premise")]
    NonLexicalMajor,
    #[error("premises share variables {}", show_vars(.0))]
    VariableClash(Vec<Var>),
    #[error("move needs a product, found `{0}`")]
    NotAPacket(Formula),
    #[error("no hypothesis {0} in the background")]
    MissingHypothesis(Var),
    #[error("move needs the landing hypothesis to be a move atom, found `{0}`")]
    NotAMoveAtom(Formula),
    #[error("`{0}` is not a sequence of move atoms ending in a constituent atom")]
    MalformedRemainder(Formula),
    #[error("move uses the same hypothesis {0} twice")]
    SameHypothesis(Var),
    #[error("packet `{found}` does not match the hypotheses `{expected}`")]
    PacketMismatch { expected: Formula, found: Formula },
    #[error("no hypotheses `{0}` in the background")]
    NoHypothesisFor(Formula),
    #[error("cyclic move needs an axiom as its packet")]
    CyclicWithoutAxiom,
    #[error("sequent `{sequent}` breaks an invariant: {detail}")]
    Invariant { sequent: String, detail: String },
}

fn show_vars(vs: &[Var]) -> String {
    let parts: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
    parts.join(", ")
}

/// Hands out variables not used so far in one derivation.
#[derive(Clone, Debug, Default)]
pub struct VarSupply {
    next: u32,
    used: BTreeSet<Var>,
}

impl VarSupply {
    pub fn new() -> Self {
        VarSupply::default()
    }

    /// A variable never handed out or reserved before; it is marked used.
    pub fn fresh(&mut self) -> Var {
        while self.used.contains(&Var(self.next)) {
            self.next += 1;
        }
        let v = Var(self.next);
        self.used.insert(v);
        v
    }

    /// Marks `v` used; fails when it already is.
    pub fn claim(&mut self, v: Var) -> Result<(), RuleError> {
        if self.used.insert(v) {
            Ok(())
        } else {
            Err(RuleError::VariableReuse(v))
        }
    }

    pub fn reserve(&mut self, vars: impl IntoIterator<Item = Var>) {
        self.used.extend(vars);
    }
}

/// `|- (eps, s, eps) : A` for the first item pronounced `phon`.
pub fn lex(g: &MCGrammar, phon: &str) -> Result<ProofNode, RuleError> {
    g.item(phon)
        .map(lex_item)
        .ok_or_else(|| RuleError::UnknownItem(phon.to_string()))
}

pub fn lex_item(item: &McgItem) -> ProofNode {
    ProofNode::new(
        McgRule::Lex,
        vec![],
        Sequent::new(
            Background::default(),
            Label::head_only(words(&item.phon)),
            item.formula.clone(),
        ),
    )
}

/// `x : A |- (eps, x, eps) : A`; fails when `x` was used before.
pub fn axiom(x: Var, a: Formula, supply: &mut VarSupply) -> Result<ProofNode, RuleError> {
    supply.claim(x)?;
    Ok(axiom_node(x, a))
}

/// An axiom on a fresh variable.
pub fn hypothesis(a: Formula, supply: &mut VarSupply) -> ProofNode {
    axiom_node(supply.fresh(), a)
}

pub(crate) fn axiom_node(x: Var, a: Formula) -> ProofNode {
    ProofNode::new(
        McgRule::Axiom,
        vec![],
        Sequent::new(
            Background::single(Hypothesis::new(x, a.clone())),
            Label::head_only(vec![Token::Var(x)]),
            a,
        ),
    )
}

/// Renames the variables of `p` that also occur in `avoid`.
fn apart(p: ProofNode, avoid: &BTreeSet<Var>, supply: &mut VarSupply) -> ProofNode {
    let vars = p.variables();
    supply.reserve(vars.iter().copied());
    supply.reserve(avoid.iter().copied());
    let renaming: BTreeMap<Var, Var> = vars.intersection(avoid).map(|&v| (v, supply.fresh())).collect();
    if renaming.is_empty() {
        p
    } else {
        p.rename(&renaming)
    }
}

/// `[mg]`: implication elimination followed by entropy. The variant is
/// chosen by the major premise's connective; `minor` is renamed apart from
/// `major` first.
pub fn merge(major: ProofNode, minor: ProofNode, supply: &mut VarSupply) -> Result<ProofNode, RuleError> {
    let minor = apart(minor, &major.variables(), supply);
    match &major.conclusion.formula {
        Formula::Over(..) => merge_over(major, minor),
        Formula::Under(..) => merge_under(minor, major),
        other => Err(RuleError::NotAnImplication(other.clone())),
    }
}

fn disjoint(a: &Sequent, b: &Sequent) -> Result<(), RuleError> {
    let shared: Vec<Var> = a.variables().intersection(&b.variables()).copied().collect();
    if shared.is_empty() {
        Ok(())
    } else {
        Err(RuleError::VariableClash(shared))
    }
}

/// `|- r : A / B` and `D |- s : B` give `D |- (r_s, r_h, r_c . s) : A`.
pub(crate) fn merge_over(major: ProofNode, minor: ProofNode) -> Result<ProofNode, RuleError> {
    let Formula::Over(a, b) = &major.conclusion.formula else {
        return Err(RuleError::NotAnImplication(major.conclusion.formula.clone()));
    };
    if major.rule != McgRule::Lex {
        return Err(RuleError::NonLexicalMajor);
    }
    if minor.conclusion.formula != **b {
        return Err(RuleError::ArgumentMismatch {
            expected: (**b).clone(),
            found: minor.conclusion.formula.clone(),
        });
    }
    disjoint(&major.conclusion, &minor.conclusion)?;
    let r = &major.conclusion.label;
    let mut comp = r.comp.clone();
    comp.extend(minor.conclusion.label.concat());
    let background = GBackground::seq(
        GBackground::from_background(&major.conclusion.background),
        GBackground::from_background(&minor.conclusion.background),
    )
    .flatten();
    let conclusion = Sequent::new(
        background,
        Label::new(r.spec.clone(), r.head.clone(), comp),
        (**a).clone(),
    );
    checked(ProofNode::new(McgRule::MergeOver, vec![major, minor], conclusion))
}

/// `D |- s : B` and `G |- r : B \ A` give `D, G |- (s . r_s, r_h, r_c) : A`.
pub(crate) fn merge_under(minor: ProofNode, major: ProofNode) -> Result<ProofNode, RuleError> {
    let Formula::Under(b, a) = &major.conclusion.formula else {
        return Err(RuleError::NotAnImplication(major.conclusion.formula.clone()));
    };
    if minor.conclusion.formula != **b {
        return Err(RuleError::ArgumentMismatch {
            expected: (**b).clone(),
            found: minor.conclusion.formula.clone(),
        });
    }
    disjoint(&major.conclusion, &minor.conclusion)?;
    let r = &major.conclusion.label;
    let mut spec = minor.conclusion.label.concat();
    spec.extend(r.spec.iter().cloned());
    let background = GBackground::seq(
        GBackground::from_background(&minor.conclusion.background),
        GBackground::from_background(&major.conclusion.background),
    )
    .flatten();
    let conclusion = Sequent::new(
        background,
        Label::new(spec, r.head.clone(), r.comp.clone()),
        (**a).clone(),
    );
    checked(ProofNode::new(McgRule::MergeUnder, vec![minor, major], conclusion))
}

/// `[mv]` on named hypotheses: `u : A` and `v : B` in the host's background
/// are replaced by the packet's background, and the host label gets
/// `[s/u, eps/v]` (strong) or `[eps/u, s/v]` (weak) with `s` the packet's
/// concatenated label. Premises must already use disjoint variables.
pub fn move_at(
    partition: &AtomPartition,
    packet: ProofNode,
    host: ProofNode,
    u: Var,
    v: Var,
    strength: Strength,
) -> Result<ProofNode, RuleError> {
    eliminate(partition, packet, host, u, v, strength, false)
}

pub(crate) fn eliminate(
    partition: &AtomPartition,
    packet: ProofNode,
    host: ProofNode,
    u: Var,
    v: Var,
    strength: Strength,
    cyclic: bool,
) -> Result<ProofNode, RuleError> {
    if u == v {
        return Err(RuleError::SameHypothesis(u));
    }
    let bg = &host.conclusion.background;
    let a = bg.get(u).ok_or(RuleError::MissingHypothesis(u))?;
    let b = bg.get(v).ok_or(RuleError::MissingHypothesis(v))?;
    if !partition.is_p2(a) {
        return Err(RuleError::NotAMoveAtom(a.clone()));
    }
    if !partition.is_constituent(b) {
        return Err(RuleError::MalformedRemainder(b.clone()));
    }
    let expected = Formula::product(a.clone(), b.clone());
    if packet.conclusion.formula != expected {
        return Err(RuleError::PacketMismatch {
            expected,
            found: packet.conclusion.formula.clone(),
        });
    }
    if cyclic && packet.rule != McgRule::Axiom {
        return Err(RuleError::CyclicWithoutAxiom);
    }
    disjoint(&packet.conclusion, &host.conclusion)?;
    let s = packet.conclusion.label.concat();
    let sigma: LabelSubstitution = match strength {
        Strength::Strong => [(u, s), (v, vec![])].into_iter().collect(),
        Strength::Weak => [(u, vec![]), (v, s)].into_iter().collect(),
    };
    let label = host.conclusion.label.substitute(&sigma);
    let background = bg.without(&[u, v]).union(&packet.conclusion.background);
    let conclusion = Sequent::new(background, label, host.conclusion.formula.clone());
    let rule = if cyclic {
        McgRule::Cyclic { strength, u, v }
    } else {
        McgRule::Move { strength, u, v }
    };
    checked(ProofNode::new(rule, vec![packet, host], conclusion))
}

/// `[mv]` choosing the first matching hypotheses of the host. The packet is
/// renamed apart from the host first.
pub fn move_packet(
    partition: &AtomPartition,
    packet: ProofNode,
    host: ProofNode,
    strength: Strength,
    supply: &mut VarSupply,
) -> Result<ProofNode, RuleError> {
    let Formula::Product(a, b) = &packet.conclusion.formula else {
        return Err(RuleError::NotAPacket(packet.conclusion.formula.clone()));
    };
    let find = |f: &Formula| {
        host.conclusion
            .background
            .iter()
            .find(|h| h.formula == *f)
            .map(|h| h.var)
            .ok_or_else(|| RuleError::NoHypothesisFor(f.clone()))
    };
    let u = find(a)?;
    let v = find(b)?;
    let packet = apart(packet, &host.variables(), supply);
    move_at(partition, packet, host, u, v, strength)
}

/// Cyclic move: links `u : A` and `v : B` through a fresh hypothesis
/// `x : A * B`.
pub fn cyclic(
    partition: &AtomPartition,
    host: ProofNode,
    u: Var,
    v: Var,
    strength: Strength,
    supply: &mut VarSupply,
) -> Result<ProofNode, RuleError> {
    let bg = &host.conclusion.background;
    let a = bg.get(u).ok_or(RuleError::MissingHypothesis(u))?.clone();
    let b = bg.get(v).ok_or(RuleError::MissingHypothesis(v))?.clone();
    supply.reserve(host.variables());
    let x = hypothesis(Formula::product(a, b), supply);
    eliminate(partition, x, host, u, v, strength, true)
}

/// Every derivable sequent has a linear label whose variables are exactly
/// those of its background.
pub(crate) fn sequent_invariant(s: &Sequent) -> Result<(), String> {
    if let Some(v) = s.background.repeated_variables().first() {
        return Err(format!("{v} is bound twice in the background"));
    }
    if let Some(v) = s.label.nonlinear_variables().first() {
        return Err(format!("{v} occurs more than once in the label"));
    }
    let lv = s.label.variables();
    let bv = s.background.variables();
    if lv != bv {
        let missing: Vec<Var> = bv.symmetric_difference(&lv).copied().collect();
        return Err(format!(
            "label and background variables differ on {}",
            show_vars(&missing)
        ));
    }
    Ok(())
}

fn checked(node: ProofNode) -> Result<ProofNode, RuleError> {
    match sequent_invariant(&node.conclusion) {
        Ok(()) => Ok(node),
        Err(detail) => Err(RuleError::Invariant {
            sequent: node.conclusion.to_string(),
            detail,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcg::fixtures::a_man_walks;

    fn f(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    /// The two halves of the example: the verb with its two hypotheses and
    /// the determiner phrase.
    fn halves(g: &MCGrammar, supply: &mut VarSupply) -> (ProofNode, ProofNode) {
        let u = hypothesis(f("d"), supply);
        let vp = merge(lex(g, "walks").unwrap(), u, supply).unwrap();
        assert_eq!(vp.conclusion.to_string(), "?x0 : d |- (eps, walks, ?x0) : case \\ v");
        let v = hypothesis(f("case"), supply);
        let vp = merge(vp, v, supply).unwrap();
        assert_eq!(
            vp.conclusion.to_string(),
            "?x0 : d, ?x1 : case |- (?x1, walks, ?x0) : v"
        );
        let dp = merge(lex(g, "a").unwrap(), lex(g, "man").unwrap(), supply).unwrap();
        assert_eq!(dp.conclusion.to_string(), "|- (eps, a, man) : case * d");
        (dp, vp)
    }

    #[test]
    fn lexical_and_axiom_sequents() {
        let g = a_man_walks();
        assert_eq!(
            lex(&g, "walks").unwrap().conclusion.to_string(),
            "|- (eps, walks, eps) : case \\ v / d"
        );
        assert_eq!(lex(&g, "man").unwrap().conclusion.to_string(), "|- (eps, man, eps) : n");
        assert_eq!(lex(&g, "runs"), Err(RuleError::UnknownItem("runs".into())));
        let empty = lex_item(&McgItem::parse("eps", "c"));
        assert_eq!(empty.conclusion.label, Label::default());
        let mut supply = VarSupply::new();
        let x = axiom(Var(3), f("case * d"), &mut supply).unwrap();
        assert_eq!(x.conclusion.to_string(), "?x3 : case * d |- (eps, ?x3, eps) : case * d");
        assert_eq!(
            axiom(Var(3), f("d"), &mut supply),
            Err(RuleError::VariableReuse(Var(3)))
        );
    }

    #[test]
    fn strong_move_closes_the_example() {
        let g = a_man_walks();
        let mut supply = VarSupply::new();
        let (dp, vp) = halves(&g, &mut supply);
        let s = move_packet(&g.partition, dp, vp, Strength::Strong, &mut supply).unwrap();
        assert_eq!(s.conclusion.to_string(), "|- (a man, walks, eps) : v");
        assert_eq!(s.conclusion.label.concat_string(), "a man walks");
        assert_eq!(s.steps(), 4);
    }

    #[test]
    fn weak_move_leaves_the_phrase_in_place() {
        let g = a_man_walks();
        let mut supply = VarSupply::new();
        let (dp, vp) = halves(&g, &mut supply);
        let s = move_packet(&g.partition, dp, vp, Strength::Weak, &mut supply).unwrap();
        assert_eq!(s.conclusion.to_string(), "|- (eps, walks, a man) : v");
        assert_eq!(s.conclusion.label.concat_string(), "walks a man");
    }

    #[test]
    fn merge_errors() {
        let g = a_man_walks();
        let mut supply = VarSupply::new();
        let walks = lex(&g, "walks").unwrap();
        let man = lex(&g, "man").unwrap();
        assert_eq!(
            merge(walks.clone(), man.clone(), &mut supply),
            Err(RuleError::ArgumentMismatch {
                expected: f("d"),
                found: f("n")
            })
        );
        assert_eq!(
            merge(man.clone(), man, &mut supply),
            Err(RuleError::NotAnImplication(f("n")))
        );
        // a derived `/` major is not allowed
        let mut derived = lex(&g, "a").unwrap();
        derived.rule = McgRule::Axiom;
        assert_eq!(
            merge(derived, lex(&g, "man").unwrap(), &mut supply),
            Err(RuleError::NonLexicalMajor)
        );
    }

    #[test]
    fn clashing_minor_is_renamed() {
        let g = a_man_walks();
        let mut supply = VarSupply::new();
        let u = axiom(Var(0), f("d"), &mut supply).unwrap();
        let vp = merge(lex(&g, "walks").unwrap(), u, &mut supply).unwrap();
        let v = axiom_node(Var(0), f("case"));
        let vp = merge(vp, v, &mut supply).unwrap();
        assert_eq!(vp.conclusion.background.len(), 2);
        assert!(sequent_invariant(&vp.conclusion).is_ok());
        let u = vp
            .conclusion
            .background
            .iter()
            .find(|h| h.formula == f("d"))
            .unwrap()
            .var;
        let clash = merge_under(axiom_node(u, f("case")), vp.premises[1].clone());
        assert!(matches!(clash, Err(RuleError::VariableClash(_))));
    }

    #[test]
    fn move_side_conditions() {
        let g = a_man_walks();
        let mut supply = VarSupply::new();
        let (dp, vp) = halves(&g, &mut supply);
        // ?x0 : d, ?x1 : case
        let swapped = move_at(&g.partition, dp.clone(), vp.clone(), Var(0), Var(1), Strength::Strong);
        assert_eq!(swapped, Err(RuleError::NotAMoveAtom(f("d"))));
        assert_eq!(
            move_at(&g.partition, dp.clone(), vp.clone(), Var(1), Var(7), Strength::Strong),
            Err(RuleError::MissingHypothesis(Var(7)))
        );
        assert_eq!(
            move_at(
                &g.partition,
                lex(&g, "man").unwrap(),
                vp.clone(),
                Var(1),
                Var(0),
                Strength::Strong
            ),
            Err(RuleError::PacketMismatch {
                expected: f("case * d"),
                found: f("n")
            })
        );
        assert_eq!(
            move_packet(&g.partition, lex(&g, "man").unwrap(), vp, Strength::Strong, &mut supply),
            Err(RuleError::NotAPacket(f("n")))
        );
    }

    #[test]
    fn cyclic_move_links_two_hypotheses() {
        // the host `?x1 : case, ?x0 : d |- (?x1, walks, ?x0) : v` gets a single
        // hypothesis `case * d` standing for both
        let g = a_man_walks();
        let mut supply = VarSupply::new();
        let (_, vp) = halves(&g, &mut supply);
        let linked = cyclic(&g.partition, vp, Var(1), Var(0), Strength::Strong, &mut supply).unwrap();
        let x = linked.premises[0].conclusion.label.head[0].as_var().unwrap();
        assert_eq!(
            linked.conclusion.to_string(),
            format!("{x} : case * d |- ({x}, walks, eps) : v")
        );
        assert_eq!(linked.conclusion.background.len(), 1);
        let weak = cyclic(
            &g.partition,
            linked.premises[1].clone(),
            Var(1),
            Var(0),
            Strength::Weak,
            &mut supply,
        )
        .unwrap();
        assert_eq!(weak.conclusion.label.comp.len(), 1);
        assert!(weak.conclusion.label.spec.is_empty());
    }
}
