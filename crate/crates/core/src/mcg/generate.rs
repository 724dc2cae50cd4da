//! Bounded bottom-up proof search.
//!
//! Sequents are kept up to renaming (variables numbered by their order in
//! the label) and found level by level, where the level of a proof is its
//! number of merges and moves. Each stored sequent remembers how it was
//! first built; proofs are only materialised, with fresh variables, for
//! accepted sequents.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::feature::Strength;
use crate::label::Var;

use super::rules::{axiom_node, cyclic, eliminate, hypothesis, lex_item, merge_over, merge_under};
use super::{Formula, MCGrammar, McgRule, ProofNode, Sequent, VarSupply};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct McgAccepted {
    pub string: String,
    pub steps: usize,
    pub proof: ProofNode,
}

#[derive(Clone, Debug, Serialize)]
pub struct Generation {
    pub max_steps: usize,
    /// One entry per distinct accepted sequent, sorted by string then steps.
    pub accepted: Vec<McgAccepted>,
    /// Number of distinct sequents explored.
    pub sequents: usize,
}

impl Generation {
    pub fn strings(&self) -> BTreeSet<String> {
        self.accepted.iter().map(|a| a.string.clone()).collect()
    }

    /// A shortest proof of `s`.
    pub fn witness(&self, s: &str) -> Option<&McgAccepted> {
        self.accepted.iter().filter(|a| a.string == s).min_by_key(|a| a.steps)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Proved {
    Derived(Box<McgAccepted>),
    NotFound { max_steps: usize },
}

/// Searches for a proof of `sentence` within `max_steps`.
pub fn prove(g: &MCGrammar, sentence: &str, max_steps: usize) -> Proved {
    let target = sentence.split_whitespace().collect::<Vec<_>>().join(" ");
    match generate(g, max_steps).witness(&target) {
        Some(a) => Proved::Derived(Box::new(a.clone())),
        None => Proved::NotFound { max_steps },
    }
}

#[derive(Clone, Debug)]
enum Minor {
    Item(usize),
    Hyp(Formula),
}

#[derive(Clone, Debug)]
enum Origin {
    Lex(usize),
    Over {
        major: usize,
        minor: Minor,
    },
    Under {
        minor: Minor,
        major: usize,
    },
    // u, v in the host's canonical numbering
    Move {
        packet: usize,
        host: usize,
        u: Var,
        v: Var,
        strength: Strength,
    },
    Cyclic {
        host: usize,
        u: Var,
        v: Var,
        strength: Strength,
    },
}

struct Item {
    seq: Sequent,
    origin: Origin,
}

/// Steps still needed before `s` can take part in an accepted proof.
fn lower_bound(s: &Sequent) -> usize {
    let packet = usize::from(matches!(s.formula, Formula::Product(..)));
    s.formula.implication_count() + packet + s.background.len().div_ceil(2)
}

fn shallow(rule: McgRule, seq: Sequent) -> ProofNode {
    ProofNode::new(rule, vec![], seq)
}

/// Shifts every variable of `s` by `offset`.
fn shifted(s: &Sequent, offset: u32) -> Sequent {
    if offset == 0 {
        return s.clone();
    }
    let renaming = s.variables().into_iter().map(|v| (v, Var(v.0 + offset))).collect();
    s.rename(&renaming)
}

fn var_count(s: &Sequent) -> u32 {
    s.background.len() as u32
}

struct Search<'g> {
    g: &'g MCGrammar,
    max_steps: usize,
    items: Vec<Item>,
    index: HashMap<Sequent, usize>,
    levels: Vec<Vec<usize>>,
    hyp_atoms: BTreeSet<Formula>,
    cyclic_types: BTreeSet<Formula>,
}

impl<'g> Search<'g> {
    fn add(&mut self, seq: Sequent, origin: Origin, cost: usize) {
        let (seq, _) = seq.canonical();
        if cost + lower_bound(&seq) > self.max_steps || self.index.contains_key(&seq) {
            return;
        }
        let id = self.items.len();
        self.index.insert(seq.clone(), id);
        self.items.push(Item { seq, origin });
        self.levels[cost].push(id);
    }

    fn level(&self, cost: usize) -> &[usize] {
        &self.levels[cost]
    }

    fn run(&mut self) {
        for (i, item) in self.g.lexicon.iter().enumerate() {
            self.add(lex_item(item).conclusion, Origin::Lex(i), 0);
        }
        for c in 1..=self.max_steps {
            let mut found: Vec<(Sequent, Origin)> = Vec::new();
            self.merges_over(c, &mut found);
            self.merges_under(c, &mut found);
            self.moves(c, &mut found);
            for (seq, origin) in found {
                self.add(seq, origin, c);
            }
        }
    }

    fn rule_of(&self, id: usize) -> McgRule {
        match self.items[id].origin {
            Origin::Lex(_) => McgRule::Lex,
            _ => McgRule::MergeUnder,
        }
    }

    fn merges_over(&self, c: usize, found: &mut Vec<(Sequent, Origin)>) {
        for &major in self.level(0) {
            let ms = &self.items[major].seq;
            let Formula::Over(_, b) = &ms.formula else { continue };
            let major_node = shallow(McgRule::Lex, ms.clone());
            let offset = var_count(ms);
            for &minor in self.level(c - 1) {
                let s = &self.items[minor].seq;
                if s.formula != **b {
                    continue;
                }
                let node = shallow(self.rule_of(minor), shifted(s, offset));
                if let Ok(r) = merge_over(major_node.clone(), node) {
                    found.push((
                        r.conclusion,
                        Origin::Over {
                            major,
                            minor: Minor::Item(minor),
                        },
                    ));
                }
            }
            if c == 1 && self.hyp_atoms.contains(b) {
                if let Ok(r) = merge_over(major_node.clone(), axiom_node(Var(offset), (**b).clone())) {
                    found.push((
                        r.conclusion,
                        Origin::Over {
                            major,
                            minor: Minor::Hyp((**b).clone()),
                        },
                    ));
                }
            }
        }
    }

    fn merges_under(&self, c: usize, found: &mut Vec<(Sequent, Origin)>) {
        for cm in 0..c {
            for &major in self.level(cm) {
                let ms = &self.items[major].seq;
                let Formula::Under(b, _) = &ms.formula else { continue };
                let major_node = shallow(self.rule_of(major), ms.clone());
                let offset = var_count(ms);
                for &minor in self.level(c - 1 - cm) {
                    let s = &self.items[minor].seq;
                    if s.formula != **b {
                        continue;
                    }
                    let node = shallow(self.rule_of(minor), shifted(s, offset));
                    if let Ok(r) = merge_under(node, major_node.clone()) {
                        found.push((
                            r.conclusion,
                            Origin::Under {
                                minor: Minor::Item(minor),
                                major,
                            },
                        ));
                    }
                }
                if cm == c - 1 && self.hyp_atoms.contains(b) {
                    if let Ok(r) = merge_under(axiom_node(Var(offset), (**b).clone()), major_node.clone()) {
                        found.push((
                            r.conclusion,
                            Origin::Under {
                                minor: Minor::Hyp((**b).clone()),
                                major,
                            },
                        ));
                    }
                }
            }
        }
    }

    fn moves(&self, c: usize, found: &mut Vec<(Sequent, Origin)>) {
        let partition = &self.g.partition;
        for ch in 0..c {
            for &host in self.level(ch) {
                let hs = &self.items[host].seq;
                if hs.background.len() < 2 {
                    continue;
                }
                let pairs: Vec<(Var, Var, Formula)> = hs
                    .background
                    .iter()
                    .filter(|h| partition.is_p2(&h.formula))
                    .flat_map(|a| {
                        hs.background
                            .iter()
                            .filter(move |b| b.var != a.var && partition.is_constituent(&b.formula))
                            .map(move |b| (a.var, b.var, Formula::product(a.formula.clone(), b.formula.clone())))
                    })
                    .collect();
                if pairs.is_empty() {
                    continue;
                }
                let host_node = shallow(McgRule::MergeUnder, hs.clone());
                let offset = var_count(hs);
                for &packet in self.level(c - 1 - ch) {
                    let ps = &self.items[packet].seq;
                    if !matches!(ps.formula, Formula::Product(..)) {
                        continue;
                    }
                    let packet_node = shallow(McgRule::MergeUnder, shifted(ps, offset));
                    for (u, v, ty) in &pairs {
                        if *ty != ps.formula {
                            continue;
                        }
                        let strength = self.strength_of(hs, *u);
                        if let Ok(r) = eliminate(
                            partition,
                            packet_node.clone(),
                            host_node.clone(),
                            *u,
                            *v,
                            strength,
                            false,
                        ) {
                            let origin = Origin::Move {
                                packet,
                                host,
                                u: *u,
                                v: *v,
                                strength,
                            };
                            found.push((r.conclusion, origin));
                        }
                    }
                }
                if ch == c - 1 {
                    for (u, v, ty) in &pairs {
                        if !self.cyclic_types.contains(ty) {
                            continue;
                        }
                        let strength = self.strength_of(hs, *u);
                        let x = axiom_node(Var(offset), ty.clone());
                        if let Ok(r) = eliminate(partition, x, host_node.clone(), *u, *v, strength, true) {
                            found.push((
                                r.conclusion,
                                Origin::Cyclic {
                                    host,
                                    u: *u,
                                    v: *v,
                                    strength,
                                },
                            ));
                        }
                    }
                }
            }
        }
    }

    fn strength_of(&self, s: &Sequent, u: Var) -> Strength {
        let atom = s.background.get(u).and_then(Formula::as_atom).unwrap_or_default();
        self.g.strength(atom)
    }

    /// Rebuilds a full proof of item `id` with fresh variables.
    fn build(&self, id: usize, supply: &mut VarSupply) -> ProofNode {
        let minor = |m: &Minor, supply: &mut VarSupply| match m {
            Minor::Item(i) => self.build(*i, supply),
            Minor::Hyp(f) => hypothesis(f.clone(), supply),
        };
        let node = match &self.items[id].origin {
            Origin::Lex(i) => Ok(lex_item(&self.g.lexicon[*i])),
            Origin::Over { major, minor: m } => {
                let major = self.build(*major, supply);
                merge_over(major, minor(m, supply))
            }
            Origin::Under { minor: m, major } => {
                let m = minor(m, supply);
                merge_under(m, self.build(*major, supply))
            }
            Origin::Move {
                packet,
                host,
                u,
                v,
                strength,
            } => {
                let p = self.build(*packet, supply);
                let h = self.build(*host, supply);
                let (u, v) = actual(&h, *u, *v);
                eliminate(&self.g.partition, p, h, u, v, *strength, false)
            }
            Origin::Cyclic { host, u, v, strength } => {
                let h = self.build(*host, supply);
                let (u, v) = actual(&h, *u, *v);
                cyclic(&self.g.partition, h, u, v, *strength, supply)
            }
        };
        node.expect("replaying a stored combination")
    }
}

/// Maps canonical variables back to those of the rebuilt proof.
fn actual(h: &ProofNode, u: Var, v: Var) -> (Var, Var) {
    let (_, renaming) = h.conclusion.canonical();
    let back = |c: Var| {
        renaming
            .iter()
            .find(|(_, &to)| to == c)
            .map(|(&from, _)| from)
            .expect("canonical variable")
    };
    (back(u), back(v))
}

/// All strings with a closed proof of the accepting atom using at most
/// `max_steps` merges and moves.
pub fn generate(g: &MCGrammar, max_steps: usize) -> Generation {
    let hyp_atoms = g.hypothesis_atoms().into_iter().map(Formula::atom).collect();
    let mut search = Search {
        g,
        max_steps,
        items: Vec::new(),
        index: HashMap::new(),
        levels: vec![Vec::new(); max_steps + 1],
        hyp_atoms,
        cyclic_types: g.cyclic_types(),
    };
    search.run();
    let goal = Formula::atom(g.accepting.clone());
    let mut accepted = Vec::new();
    for (cost, ids) in search.levels.iter().enumerate() {
        for &id in ids {
            let s = &search.items[id].seq;
            if s.is_closed() && s.formula == goal {
                let proof = search.build(id, &mut VarSupply::new());
                debug_assert_eq!(proof.steps(), cost);
                accepted.push(McgAccepted {
                    string: s.label.concat_string(),
                    steps: cost,
                    proof,
                });
            }
        }
    }
    accepted.sort_by(|a, b| (&a.string, a.steps).cmp(&(&b.string, b.steps)));
    Generation {
        max_steps,
        accepted,
        sequents: search.items.len(),
    }
}
