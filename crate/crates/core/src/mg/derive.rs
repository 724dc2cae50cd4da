use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::{self, Write as _};
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::feature::{Feature, FeatureKind, Strength};
use crate::tree::MinimalistTree;

use super::rules::{merge, move_tree, MoveError};
use super::MGrammar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "rule")]
pub enum MgRule {
    /// Lexical item by index into the lexicon.
    Lexical {
        item: usize,
    },
    Merge,
    Move {
        strength: Strength,
    },
}

/// A derivation: the rule, its premises, and the tree it built.
#[derive(Clone, Debug, Serialize)]
pub struct Trace {
    #[serde(flatten)]
    pub rule: MgRule,
    #[serde(serialize_with = "display")]
    pub tree: MinimalistTree,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<Arc<Trace>>,
}

fn display<T: fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl Trace {
    /// Number of merge and move applications.
    pub fn steps(&self) -> usize {
        let own = usize::from(!matches!(self.rule, MgRule::Lexical { .. }));
        own + self.premises.iter().map(|p| p.steps()).sum::<usize>()
    }

    /// Rule applications in the order they were performed.
    pub fn rule_sequence(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        self.walk(&mut |t| match t.rule {
            MgRule::Lexical { .. } => {}
            MgRule::Merge => out.push("merge"),
            MgRule::Move { .. } => out.push("move"),
        });
        out
    }

    /// Post-order visit: premises before conclusions.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Trace)) {
        for p in &self.premises {
            p.walk(f);
        }
        f(self);
    }

    /// One numbered line per rule application.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut n = 0;
        self.walk(&mut |t| {
            let line = match &t.rule {
                MgRule::Lexical { .. } => return,
                MgRule::Merge => format!("merge( {} , {} ) => {}", t.premises[0].tree, t.premises[1].tree, t.tree),
                MgRule::Move { strength } => {
                    let s = if *strength == Strength::Strong {
                        "strong"
                    } else {
                        "weak"
                    };
                    format!("move[{s}]( {} ) => {}", t.premises[0].tree, t.tree)
                }
            };
            n += 1;
            let _ = writeln!(out, "{n}. {line}");
        });
        if n == 0 {
            let _ = writeln!(out, "lexical: {}", self.tree);
        }
        out
    }
}

/// An accepted derivation.
#[derive(Clone, Debug, Serialize)]
pub struct Accepted {
    pub string: String,
    #[serde(serialize_with = "display")]
    pub tree: MinimalistTree,
    pub steps: usize,
    pub trace: Arc<Trace>,
}

#[derive(Clone, Debug)]
pub struct ChartItem {
    pub tree: MinimalistTree,
    pub steps: usize,
    pub trace: Arc<Trace>,
}

/// Everything explored by a bounded search.
#[derive(Clone, Debug, Default)]
pub struct Chart {
    items: Vec<ChartItem>,
    /// Trees on which move was refused, with the reason.
    blocked: Vec<(MinimalistTree, MoveError)>,
    saturated: bool,
}

impl Chart {
    pub fn items(&self) -> &[ChartItem] {
        &self.items
    }

    pub fn blocked(&self) -> &[(MinimalistTree, MoveError)] {
        &self.blocked
    }

    /// True when no rule applies to the explored items beyond what was
    /// found, so a larger bound would find nothing new.
    pub fn is_saturated(&self) -> bool {
        self.saturated
    }
}

#[derive(Clone, Debug)]
pub struct Derivations {
    pub max_steps: usize,
    pub accepted: Vec<Accepted>,
    pub chart: Chart,
}

impl Derivations {
    pub fn strings(&self) -> BTreeSet<String> {
        self.accepted.iter().map(|a| a.string.clone()).collect()
    }

    /// The cheapest accepted derivation of `s`.
    pub fn witness(&self, s: &str) -> Option<&Accepted> {
        self.accepted.iter().filter(|a| a.string == s).min_by_key(|a| a.steps)
    }
}

fn is_accepting(t: &MinimalistTree, accepting: &str) -> bool {
    let head = t.head_path();
    t.leaves().iter().all(|(p, l)| {
        if *p == head {
            matches!(l.features.as_slice(), [f] if f.kind == FeatureKind::Basic && f.name == accepting)
        } else {
            l.features.is_empty()
        }
    })
}

/// Under the shortest move condition a tree in which two leaves expose the
/// same licensee can never check either of them.
fn smc_dead(t: &MinimalistTree) -> bool {
    let head = t.head_path();
    let mut seen = HashSet::new();
    t.leaves().iter().any(|(p, l)| {
        *p != head
            && matches!(l.features.first(), Some(f) if f.kind == FeatureKind::Licensee && !seen.insert(f.name.clone()))
    })
}

/// Each rule checks two features and the finished tree keeps one, so a tree
/// with `f` features needs at least `f / 2` further steps.
fn steps_to_finish(t: &MinimalistTree) -> usize {
    t.feature_count() / 2
}

type Key = (FeatureKind, String);

fn leading(t: &MinimalistTree) -> Option<&Feature> {
    t.head_leaf().features.first()
}

/// Breadth-first closure of the lexicon under merge and move, up to
/// `max_steps` rule applications per derivation.
///
/// Level `k` holds the trees first reached with `k` rule applications.
pub fn derive(g: &MGrammar, max_steps: usize) -> Derivations {
    let mut items: Vec<ChartItem> = Vec::new();
    let mut seen: HashSet<MinimalistTree> = HashSet::new();
    let mut levels: Vec<Vec<usize>> = vec![Vec::new()];
    // per level: selectors by name, categories by name
    let mut by_feature: Vec<HashMap<Key, Vec<usize>>> = vec![HashMap::new()];
    let mut blocked = Vec::new();
    let mut cut_by_bound = false;

    let mut insert = |items: &mut Vec<ChartItem>,
                      levels: &mut Vec<Vec<usize>>,
                      by_feature: &mut Vec<HashMap<Key, Vec<usize>>>,
                      tree: MinimalistTree,
                      trace: Arc<Trace>,
                      steps: usize| {
        if !seen.insert(tree.clone()) {
            return;
        }
        let id = items.len();
        if let Some(f) = leading(&tree) {
            by_feature[steps].entry((f.kind, f.name.clone())).or_default().push(id);
        }
        levels[steps].push(id);
        items.push(ChartItem { tree, steps, trace });
    };

    for (i, item) in g.lexicon.iter().enumerate() {
        let tree = MinimalistTree::leaf(item.phon.clone(), item.features.features().to_vec());
        let trace = Arc::new(Trace {
            rule: MgRule::Lexical { item: i },
            tree: tree.clone(),
            premises: Vec::new(),
        });
        insert(&mut items, &mut levels, &mut by_feature, tree, trace, 0);
    }

    let mut saturated = true;
    for level in 1..=max_steps + 1 {
        let probing = level > max_steps;
        let mut fresh: Vec<(MinimalistTree, Arc<Trace>)> = Vec::new();

        for &id in &levels[level - 1] {
            let item = &items[id];
            if !matches!(leading(&item.tree), Some(f) if f.kind == FeatureKind::Licensor) {
                continue;
            }
            match move_tree(&item.tree, g.options) {
                Ok(results) => {
                    let strength = leading(&item.tree).expect("licensor").strength;
                    for tree in results {
                        let trace = Arc::new(Trace {
                            rule: MgRule::Move { strength },
                            tree: tree.clone(),
                            premises: vec![item.trace.clone()],
                        });
                        fresh.push((tree, trace));
                    }
                }
                Err(e) => {
                    if !probing {
                        blocked.push((item.tree.clone(), e));
                    }
                }
            }
        }

        for sel_level in 0..level {
            let arg_level = level - 1 - sel_level;
            for (key, selectors) in &by_feature[sel_level] {
                if key.0 != FeatureKind::Selector {
                    continue;
                }
                let Some(args) = by_feature[arg_level].get(&(FeatureKind::Basic, key.1.clone())) else {
                    continue;
                };
                for &s in selectors {
                    for &a in args {
                        let (sel, arg) = (&items[s], &items[a]);
                        let tree = merge(&sel.tree, &arg.tree).expect("indexed by matching features");
                        let trace = Arc::new(Trace {
                            rule: MgRule::Merge,
                            tree: tree.clone(),
                            premises: vec![sel.trace.clone(), arg.trace.clone()],
                        });
                        fresh.push((tree, trace));
                    }
                }
            }
        }

        if g.options.smc {
            fresh.retain(|(t, _)| {
                if !smc_dead(t) {
                    return true;
                }
                if !probing {
                    if let Err(e @ MoveError::Smc { .. }) = move_tree(t, g.options) {
                        blocked.push((t.clone(), e));
                    }
                }
                false
            });
        }
        if probing {
            if !fresh.is_empty() {
                saturated = false;
            }
            break;
        }
        levels.push(Vec::new());
        by_feature.push(HashMap::new());
        for (tree, trace) in fresh {
            if level + steps_to_finish(&tree) > max_steps {
                cut_by_bound = true;
                continue;
            }
            insert(&mut items, &mut levels, &mut by_feature, tree, trace, level);
        }
    }
    if cut_by_bound {
        saturated = false;
    }

    let mut accepted: Vec<Accepted> = items
        .iter()
        .filter(|it| is_accepting(&it.tree, &g.accepting))
        .map(|it| Accepted {
            string: it.tree.yield_string(),
            tree: it.tree.clone(),
            steps: it.steps,
            trace: it.trace.clone(),
        })
        .collect();
    accepted.sort_by(|a, b| (&a.string, a.steps, &a.tree).cmp(&(&b.string, b.steps, &b.tree)));

    Derivations {
        max_steps,
        accepted,
        chart: Chart {
            items,
            blocked,
            saturated,
        },
    }
}

/// Outcome of [`recognize`].
#[derive(Clone, Debug)]
pub enum Recognition {
    Derived(Accepted),
    /// The search saturated: no derivation exists at any bound.
    NoDerivation {
        closest: Vec<ChartItem>,
    },
    /// Nothing found, but the bound cut the search short.
    BoundExhausted {
        closest: Vec<ChartItem>,
    },
}

impl Recognition {
    pub fn is_derived(&self) -> bool {
        matches!(self, Recognition::Derived(_))
    }
}

/// Looks for a derivation of `sentence` (space separated words).
pub fn recognize(g: &MGrammar, sentence: &str, max_steps: usize) -> Recognition {
    let words: Vec<&str> = sentence.split_whitespace().collect();
    let ds = derive(g, max_steps);
    if let Some(a) = ds
        .accepted
        .iter()
        .filter(|a| a.tree.yield_words() == words)
        .min_by_key(|a| a.steps)
    {
        return Recognition::Derived(a.clone());
    }
    let closest = closest_items(&ds.chart, &words, 3);
    if ds.chart.is_saturated() {
        Recognition::NoDerivation { closest }
    } else {
        Recognition::BoundExhausted { closest }
    }
}

/// Items whose yields best match `words`: longest common prefix, then most
/// shared words, then fewest unchecked features.
fn closest_items(chart: &Chart, words: &[&str], n: usize) -> Vec<ChartItem> {
    let score = |t: &MinimalistTree| {
        let ys = t.yield_words();
        let prefix = ys.iter().zip(words).take_while(|(a, b)| a == b).count();
        let shared = ys.iter().filter(|w| words.contains(w)).count();
        (prefix, shared, usize::MAX - t.feature_count())
    };
    let mut ranked: Vec<&ChartItem> = chart.items().iter().collect();
    ranked.sort_by(|a, b| score(&b.tree).cmp(&score(&a.tree)).then(a.steps.cmp(&b.steps)));
    ranked.into_iter().take(n).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mg::fixtures::a_man_walks;
    use crate::mg::{LexicalItem, MgOptions};

    #[test]
    fn example_lexicon_derives_a_man_walks() {
        let ds = derive(&a_man_walks(), 4);
        assert_eq!(ds.strings(), ["a man walks".to_string()].into());
        let a = &ds.accepted[0];
        assert_eq!(a.steps, 3);
        assert_eq!(a.trace.rule_sequence(), vec!["merge", "merge", "move"]);
        assert_eq!(a.tree.to_string(), ">( <( a , man ) , <( walks / v , eps ) )");
        assert!(ds.chart.is_saturated());
    }

    #[test]
    fn empty_lexicon_derives_nothing() {
        let ds = derive(&MGrammar::new(vec![], "c"), 5);
        assert!(ds.accepted.is_empty());
        assert!(ds.chart.is_saturated());
    }

    #[test]
    fn no_verb_no_sentence() {
        let g = MGrammar::new(
            vec![LexicalItem::parse("a", "=n d -case"), LexicalItem::parse("man", "n")],
            "v",
        );
        for bound in 1..8 {
            assert!(derive(&g, bound).accepted.is_empty());
        }
        assert!(derive(&g, 8).chart.is_saturated());
    }

    #[test]
    fn recognition_outcomes() {
        let g = a_man_walks();
        match recognize(&g, "a man walks", 6) {
            Recognition::Derived(a) => assert_eq!(a.steps, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            recognize(&g, "man a walks", 6),
            Recognition::NoDerivation { .. }
        ));
        assert!(matches!(
            recognize(&g, "a man walks", 2),
            Recognition::BoundExhausted { .. }
        ));
        let empty = MGrammar::new(vec![LexicalItem::parse("", "c")], "c");
        assert!(recognize(&empty, "", 1).is_derived());
    }

    #[test]
    fn trace_rendering() {
        let ds = derive(&a_man_walks(), 3);
        let text = ds.accepted[0].trace.render();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(
            lines[0],
            "1. merge( a / =n d -case , man / n ) => <( a / d -case , man )"
        );
        assert!(lines[2].starts_with("3. move[strong]( "));
        assert!(lines[2].ends_with("=> >( <( a , man ) , <( walks / v , eps ) )"));
    }

    #[test]
    fn smc_dead_trees_are_not_kept() {
        let g = MGrammar::new(
            vec![
                LexicalItem::parse("v", "=d =d +CASE v"),
                LexicalItem::parse("a", "d -case"),
                LexicalItem::parse("b", "d -case"),
            ],
            "v",
        );
        let with = derive(&g, 6);
        assert!(with.accepted.is_empty());
        let without = derive(
            &g.clone().with_options(MgOptions {
                smc: false,
                spic: false,
            }),
            6,
        );
        assert!(without.accepted.is_empty(), "one +CASE cannot check two -case");
    }
}
