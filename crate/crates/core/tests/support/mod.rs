//! Oracles and random generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::PathBuf;

use minimalist_core::feature::FeatureKind;
use minimalist_core::mcg::{
    check_proof, cyclic, hypothesis, lex_item, merge as mcg_merge, move_packet, McgRule, VarSupply,
};
use minimalist_core::mg::{merge, move_tree};
use minimalist_core::tree::{Projection, Side};
use minimalist_core::{Formula, MCGrammar, MGrammar, MinimalistTree, ProofNode, Sequent, Strength, Token, Var};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

/// The `.mg` files of the comparison corpus, sorted.
pub fn corpus_files() -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "mg"))
        .collect();
    out.sort();
    out
}

pub fn corpus() -> Vec<(String, MGrammar)> {
    corpus_files()
        .into_iter()
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            let g = fs::read_to_string(&p)
                .unwrap()
                .parse()
                .unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, g)
        })
        .collect()
}

pub fn load(name: &str) -> MGrammar {
    let text = fs::read_to_string(corpus_dir().join(name)).unwrap();
    text.parse().unwrap_or_else(|e| panic!("{name}: {e}"))
}

// Flattened view of a tree. Nodes are numbered in pre-order; every relation
// is a row of bits.
pub struct Flat {
    pub paths: Vec<Vec<Side>>,
    pub parent: Vec<Option<usize>>,
    // (left, right, left child projects)
    pub kids: Vec<Option<(usize, usize, bool)>>,
}

impl Flat {
    pub fn new(t: &MinimalistTree) -> Self {
        fn go(t: &MinimalistTree, path: &mut Vec<Side>, up: Option<usize>, f: &mut Flat) -> usize {
            let me = f.paths.len();
            f.paths.push(path.clone());
            f.parent.push(up);
            f.kids.push(None);
            if let MinimalistTree::Node {
                projection,
                left,
                right,
            } = t
            {
                path.push(Side::Left);
                let l = go(left, path, Some(me), f);
                path.pop();
                path.push(Side::Right);
                let r = go(right, path, Some(me), f);
                path.pop();
                f.kids[me] = Some((l, r, *projection == Projection::Left));
            }
            me
        }
        let mut f = Flat {
            paths: vec![],
            parent: vec![],
            kids: vec![],
        };
        go(t, &mut Vec::new(), None, &mut f);
        f
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    // reflexive: bit j of below[i] is set when i dominates j
    pub fn below(&self) -> Vec<u64> {
        let n = self.len();
        let mut out = vec![0u64; n];
        for i in (0..n).rev() {
            out[i] |= 1 << i;
            if let Some((l, r, _)) = self.kids[i] {
                out[i] |= out[l] | out[r];
            }
        }
        out
    }

    pub fn above(&self) -> Vec<u64> {
        let below = self.below();
        let n = self.len();
        (0..n)
            .map(|j| (0..n).filter(|&i| below[i] >> j & 1 == 1).fold(0, |m, i| m | 1 << i))
            .collect()
    }

    // (projector, projected) for every binary node
    pub fn immediate_projection(&self) -> Vec<(usize, usize)> {
        self.kids
            .iter()
            .flatten()
            .map(|&(l, r, left_projects)| if left_projects { (l, r) } else { (r, l) })
            .collect()
    }

    pub fn immediate_precedence(&self) -> Vec<(usize, usize)> {
        self.kids.iter().flatten().map(|&(l, r, _)| (l, r)).collect()
    }
}

fn close(rows: &mut [u64]) {
    loop {
        let mut changed = false;
        for i in 0..rows.len() {
            let mut acc = rows[i];
            let mut bits = rows[i];
            while bits != 0 {
                let j = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                acc |= rows[j];
            }
            if acc != rows[i] {
                rows[i] = acc;
                changed = true;
            }
        }
        if !changed {
            return;
        }
    }
}

/// Least relation closed under [0], [trans], [~], [A], [B].
pub fn projection_oracle(f: &Flat) -> Vec<u64> {
    let n = f.len();
    let below = f.below();
    let above = f.above();
    let mut rows: Vec<u64> = (0..n).map(|i| 1 << i).collect();
    for (c2, c3) in f.immediate_projection() {
        rows[c2] |= 1 << c3;
        let mut anc = above[c2];
        while anc != 0 {
            let c1 = anc.trailing_zeros() as usize;
            anc &= anc - 1;
            rows[c1] |= below[c3];
        }
        if let Some(p) = f.parent[c2] {
            rows[c2] |= 1 << p;
        }
    }
    close(&mut rows);
    rows
}

/// Least relation closed under [trans], [*], [dom].
pub fn precedence_oracle(f: &Flat) -> Vec<u64> {
    let mut rows = f.above();
    for (a, b) in f.immediate_precedence() {
        rows[a] |= 1 << b;
    }
    close(&mut rows);
    rows
}

pub fn unique_minimum(rows: &[u64]) -> Option<usize> {
    let all = if rows.len() == 64 {
        u64::MAX
    } else {
        (1u64 << rows.len()) - 1
    };
    let minima: Vec<usize> = (0..rows.len()).filter(|&i| rows[i] == all).collect();
    match minima.as_slice() {
        [m] => Some(*m),
        _ => None,
    }
}

/// Head by direction-following agrees with the unique projection minimum,
/// which must be a leaf.
pub fn head_matches_oracle(t: &MinimalistTree) -> bool {
    let f = Flat::new(t);
    unique_minimum(&projection_oracle(&f)).is_some_and(|m| f.kids[m].is_none() && f.paths[m] == t.head_path())
}

/// Every tree shape with `n` leaves and every choice of projection marks,
/// leaves left as placeholders.
pub fn skeletons(n: usize) -> Vec<MinimalistTree> {
    if n == 1 {
        return vec![MinimalistTree::leaf("?", vec![])];
    }
    let mut out = Vec::new();
    for k in 1..n {
        let lefts = skeletons(k);
        let rights = skeletons(n - k);
        for l in &lefts {
            for r in &rights {
                for p in [Projection::Left, Projection::Right] {
                    out.push(MinimalistTree::node(p, l.clone(), r.clone()));
                }
            }
        }
    }
    out
}

pub fn relabel(t: &mut MinimalistTree, mut code: usize, alphabet: &[&str]) {
    t.for_each_leaf_mut(&mut |leaf| {
        leaf.phon = alphabet[code % alphabet.len()].to_string();
        code /= alphabet.len();
    });
}

/// Checks every labelling over `alphabet` of every skeleton with up to
/// `max_leaves` leaves on all cores. Returns (trees checked, first failures).
pub fn exhaustive_head_check(max_leaves: usize, alphabet: &[&str]) -> (u64, Vec<String>) {
    let mut skels = Vec::new();
    for n in 1..=max_leaves {
        skels.extend(skeletons(n));
    }
    let workers = std::thread::available_parallelism().map_or(4, |n| n.get());
    let chunk = skels.len().div_ceil(workers);
    std::thread::scope(|s| {
        let handles: Vec<_> = skels
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    let mut checked = 0u64;
                    let mut bad = Vec::new();
                    for skel in part {
                        let labelings = alphabet.len().pow(skel.leaf_count() as u32);
                        for code in 0..labelings {
                            let mut t = skel.clone();
                            relabel(&mut t, code, alphabet);
                            if !head_matches_oracle(&t) && bad.len() < 5 {
                                bad.push(t.to_string());
                            }
                            checked += 1;
                        }
                    }
                    (checked, bad)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap())
            .fold((0, Vec::new()), |(c, mut b), (c2, b2)| {
                b.extend(b2);
                (c + c2, b)
            })
    })
}

/// Number of minimalist trees with up to `max_leaves` leaves over an
/// alphabet of `k` symbols: shapes times marks times labellings.
pub fn tree_count(max_leaves: usize, k: u64) -> u64 {
    let mut catalan = vec![1u64];
    for n in 1..max_leaves {
        let next = (0..n).map(|i| catalan[i] * catalan[n - 1 - i]).sum();
        catalan.push(next);
    }
    (1..=max_leaves)
        .map(|n| catalan[n - 1] * 2u64.pow(n as u32 - 1) * k.pow(n as u32))
        .sum()
}

pub fn random_tree(rng: &mut impl Rng, leaves: usize) -> MinimalistTree {
    if leaves == 1 {
        return MinimalistTree::leaf(*["a", "b", "c"].choose(rng).unwrap(), vec![]);
    }
    let k = rng.gen_range(1..leaves);
    let p = if rng.gen() { Projection::Left } else { Projection::Right };
    MinimalistTree::node(p, random_tree(rng, k), random_tree(rng, leaves - k))
}

/// Linear label, and label variables are exactly the background variables.
pub fn invariant(s: &Sequent) -> Result<(), String> {
    let mut in_label = BTreeMap::<Var, usize>::new();
    for c in [&s.label.spec, &s.label.head, &s.label.comp] {
        for t in c {
            if let Token::Var(v) = t {
                *in_label.entry(*v).or_default() += 1;
            }
        }
    }
    if let Some((v, n)) = in_label.iter().find(|(_, n)| **n > 1) {
        return Err(format!("{v} occurs {n} times in {s}"));
    }
    let mut bound = BTreeSet::new();
    for h in s.background.iter() {
        if !bound.insert(h.var) {
            return Err(format!("{} bound twice in {s}", h.var));
        }
    }
    let labelled: BTreeSet<Var> = in_label.into_keys().collect();
    if labelled != bound {
        return Err(format!("label and background disagree in {s}"));
    }
    Ok(())
}

pub fn every_node(p: &ProofNode, f: &mut impl FnMut(&ProofNode)) {
    f(p);
    for q in &p.premises {
        every_node(q, f);
    }
}

/// Invariant at every node of `p`.
pub fn proof_invariant(p: &ProofNode) -> Result<(), String> {
    let mut first = Ok(());
    every_node(p, &mut |n| {
        if first.is_ok() {
            first = invariant(&n.conclusion);
        }
    });
    first
}

#[derive(Default, Debug, Clone, Copy)]
pub struct WalkStats {
    pub applications: usize,
    pub moves: usize,
}

/// A random walk through merge and move from the lexicon of `g`. Every
/// application must check exactly two features.
pub fn random_mg_walk(g: &MGrammar, rng: &mut impl Rng, max_steps: usize) -> Result<WalkStats, String> {
    let mut stats = WalkStats::default();
    let mut pool: Vec<MinimalistTree> = g
        .lexicon
        .iter()
        .map(|i| MinimalistTree::leaf(i.phon.clone(), i.features.features().to_vec()))
        .collect();
    for _ in 0..max_steps {
        let mut moves = Vec::new();
        let mut merges = Vec::new();
        for (i, t) in pool.iter().enumerate() {
            match t.head_leaf().features.first().map(|f| f.kind) {
                Some(FeatureKind::Licensor) => moves.push(i),
                Some(FeatureKind::Selector) => {
                    for (j, u) in pool.iter().enumerate() {
                        if merge(t, u).is_ok() {
                            merges.push((i, j));
                        }
                    }
                }
                _ => {}
            }
        }
        let total = moves.len() + merges.len();
        if total == 0 {
            break;
        }
        let pick = rng.gen_range(0..total);
        let result = if pick < moves.len() {
            let t = &pool[moves[pick]];
            match move_tree(t, g.options) {
                Ok(rs) if !rs.is_empty() => {
                    let r = rs[rng.gen_range(0..rs.len())].clone();
                    if r.feature_count() + 2 != t.feature_count() {
                        return Err(format!("move {t} => {r}"));
                    }
                    if t.head_leaf().features[0].strength == Strength::Strong && r.leaf_count() != t.leaf_count() + 1 {
                        return Err(format!("strong move left no trace: {t} => {r}"));
                    }
                    if r.yield_words().len() != t.yield_words().len() {
                        return Err(format!("move changed the words: {t} => {r}"));
                    }
                    stats.moves += 1;
                    r
                }
                _ => continue,
            }
        } else {
            let (i, j) = merges[pick - moves.len()];
            let r = merge(&pool[i], &pool[j]).map_err(|e| e.to_string())?;
            if r.feature_count() + 2 != pool[i].feature_count() + pool[j].feature_count() {
                return Err(format!("merge {} {} => {r}", pool[i], pool[j]));
            }
            r
        };
        stats.applications += 1;
        pool.push(result);
    }
    Ok(stats)
}

/// Atoms that may label a hypothesis: factors of lexical products.
pub fn hypothesis_types(g: &MCGrammar) -> Vec<Formula> {
    fn products(f: &Formula, out: &mut BTreeSet<Formula>) {
        match f {
            Formula::Atom(_) => {}
            Formula::Product(a, b) => {
                out.insert(a.as_ref().clone());
                if b.is_atom() {
                    out.insert(b.as_ref().clone());
                }
                products(b, out);
            }
            Formula::Under(a, b) | Formula::Over(a, b) => {
                products(a, out);
                products(b, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    for i in &g.lexicon {
        products(&i.formula, &mut out);
    }
    out.into_iter().collect()
}

/// Random rule applications from the lexicon of `g`. Whatever the rules
/// accept must keep the sequent invariant at every node and replay through
/// the checker.
pub fn random_mcg_walk(g: &MCGrammar, rng: &mut impl Rng, max_steps: usize) -> Result<WalkStats, String> {
    let mut stats = WalkStats::default();
    let hyps = hypothesis_types(g);
    let mut supply = VarSupply::new();
    let mut pool: Vec<ProofNode> = g.lexicon.iter().map(lex_item).collect();
    let has = |host: &ProofNode, f: &Formula| host.conclusion.background.iter().any(|h| h.formula == *f);
    for _ in 0..max_steps {
        let result = match rng.gen_range(0..5) {
            0 if !hyps.is_empty() => Ok(hypothesis(hyps.choose(rng).unwrap().clone(), &mut supply)),
            1 => {
                let host = pool.choose(rng).unwrap().clone();
                let bg: Vec<_> = host.conclusion.background.iter().cloned().collect();
                let pairs: Vec<_> = bg
                    .iter()
                    .filter(|a| a.formula.as_atom().is_some_and(|x| g.partition.p2.contains(x)))
                    .flat_map(|a| bg.iter().filter(|b| b.var != a.var).map(move |b| (a, b)))
                    .collect();
                let Some((a, b)) = pairs.choose(rng) else { continue };
                let strength = g.strength(a.formula.as_atom().unwrap());
                cyclic(&g.partition, host, a.var, b.var, strength, &mut supply)
            }
            2 => {
                let pairs: Vec<(usize, usize)> = (0..pool.len())
                    .flat_map(|i| (0..pool.len()).map(move |j| (i, j)))
                    .filter(|&(i, j)| match &pool[i].conclusion.formula {
                        Formula::Product(a, b) => has(&pool[j], a) && has(&pool[j], b),
                        _ => false,
                    })
                    .collect();
                let Some(&(i, j)) = pairs.choose(rng) else { continue };
                let (packet, host) = (pool[i].clone(), pool[j].clone());
                let strength = match &packet.conclusion.formula {
                    Formula::Product(a, _) => a.as_atom().map_or(Strength::Strong, |x| g.strength(x)),
                    _ => unreachable!(),
                };
                move_packet(&g.partition, packet, host, strength, &mut supply)
            }
            3 => {
                let pairs: Vec<(usize, usize)> = (0..pool.len())
                    .flat_map(|i| (0..pool.len()).map(move |j| (i, j)))
                    .filter(|&(i, j)| match &pool[i].conclusion.formula {
                        Formula::Over(_, arg) | Formula::Under(arg, _) => **arg == pool[j].conclusion.formula,
                        _ => false,
                    })
                    .collect();
                let Some(&(i, j)) = pairs.choose(rng) else { continue };
                mcg_merge(pool[i].clone(), pool[j].clone(), &mut supply)
            }
            _ => {
                // arbitrary pairs, mostly rejected
                let major = pool.choose(rng).unwrap().clone();
                let minor = pool.choose(rng).unwrap().clone();
                mcg_merge(major, minor, &mut supply)
            }
        };
        let Ok(p) = result else { continue };
        proof_invariant(&p).map_err(|e| format!("{e}\n{}", p.render()))?;
        check_proof(&p, g).map_err(|e| format!("{e}\n{}", p.render()))?;
        if matches!(p.rule, McgRule::Move { .. } | McgRule::Cyclic { .. }) {
            stats.moves += 1;
        }
        stats.applications += 1;
        if pool.len() < 60 {
            pool.push(p);
        }
    }
    Ok(stats)
}
