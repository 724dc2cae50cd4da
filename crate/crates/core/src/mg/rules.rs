use thiserror::Error;

use crate::feature::{Feature, FeatureKind, Strength};
use crate::tree::{classify_position, maximal_projection_path, MinimalistTree, PositionClass, Side, TreeContext};

use super::MgOptions;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MergeError {
    #[error("merge needs a selector on the head, found {}", show(.found))]
    NoSelector { found: Option<Feature> },
    #[error("selector {selector} cannot merge with head feature {}", show(.found))]
    CategoryMismatch { selector: Feature, found: Option<Feature> },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("move needs a licensor on the head, found {}", show(.found))]
    NoLicensor { found: Option<Feature> },
    #[error("shortest move condition: {candidates} leaves expose -{licensee}")]
    Smc { licensee: String, candidates: usize },
}

fn show(f: &Option<Feature>) -> String {
    match f {
        Some(f) => format!("`{f}`"),
        None => "no feature".to_string(),
    }
}

fn drop_first(features: &[Feature]) -> Vec<Feature> {
    features[1..].to_vec()
}

/// Merges `selectee` into `selector`, checking `=x` against `x`.
///
/// A bare lexical selector takes the selectee as complement (`<`, selector on
/// the left); a derived selector takes it as specifier (`>`, selectee on
/// the left).
pub fn merge(selector: &MinimalistTree, selectee: &MinimalistTree) -> Result<MinimalistTree, MergeError> {
    let sel = selector.head_leaf().features.first();
    let sel = match sel {
        Some(f) if f.kind == FeatureKind::Selector => f,
        other => return Err(MergeError::NoSelector { found: other.cloned() }),
    };
    let cat = selectee.head_leaf().features.first();
    match cat {
        Some(f) if f.kind == FeatureKind::Basic && f.name == sel.name => {}
        other => {
            return Err(MergeError::CategoryMismatch {
                selector: sel.clone(),
                found: other.cloned(),
            })
        }
    }
    let mut t = selector.clone();
    let mut t2 = selectee.clone();
    let lexical = t.is_leaf();
    {
        let h = t.head_leaf_mut();
        h.features = drop_first(&h.features);
    }
    {
        let h = t2.head_leaf_mut();
        h.features = drop_first(&h.features);
    }
    Ok(if lexical {
        MinimalistTree::left(t, t2)
    } else {
        MinimalistTree::right(t2, t)
    })
}

/// Applies move with the strength written on the head's licensor.
pub fn move_tree(t: &MinimalistTree, options: MgOptions) -> Result<Vec<MinimalistTree>, MoveError> {
    let strength = match t.head_leaf().features.first() {
        Some(f) if f.kind == FeatureKind::Licensor => f.strength,
        other => return Err(MoveError::NoLicensor { found: other.cloned() }),
    };
    move_with_strength(t, strength, options)
}

/// All results of moving a `-g` constituent to the specifier of a head
/// carrying `+g`. An empty result means no constituent is available.
///
/// Strong move carries the maximal projection of the licensee leaf to the
/// new specifier and leaves a trace. Weak move sends a phonologically empty
/// copy (which keeps the features) and leaves the phonology in place with
/// its features spent.
pub fn move_with_strength(
    t: &MinimalistTree,
    strength: Strength,
    options: MgOptions,
) -> Result<Vec<MinimalistTree>, MoveError> {
    let head_path = t.head_path();
    let licensor = match t.head_leaf().features.first() {
        Some(f) if f.kind == FeatureKind::Licensor => f.clone(),
        other => return Err(MoveError::NoLicensor { found: other.cloned() }),
    };
    let candidates: Vec<Vec<Side>> = t
        .leaves()
        .into_iter()
        .filter(|(p, l)| {
            *p != head_path
                && l.features
                    .first()
                    .is_some_and(|f| f.kind == FeatureKind::Licensee && f.name == licensor.name)
        })
        .map(|(p, _)| p)
        .collect();
    if options.smc && candidates.len() > 1 {
        return Err(MoveError::Smc {
            licensee: licensor.name,
            candidates: candidates.len(),
        });
    }
    let mut out = Vec::new();
    for leaf_path in candidates {
        let moved_path = maximal_projection_path(&leaf_path, t);
        debug_assert!(!head_path.starts_with(&moved_path));
        if options.spic && inside_specifier(t, &moved_path) {
            continue;
        }
        out.push(move_one(t, &leaf_path, &moved_path, strength));
    }
    Ok(out)
}

/// True when some proper ancestor of `path` (below the root) is a specifier
/// within the subtree rooted at its parent.
fn inside_specifier(t: &MinimalistTree, path: &[Side]) -> bool {
    (1..path.len()).any(|end| {
        let parent = t.subtree_at(&path[..end - 1]).expect("path in tree");
        let ctx = TreeContext::at(parent, &path[end - 1..end]).expect("child");
        classify_position(&ctx, parent) == Ok(PositionClass::Specifier)
    })
}

fn move_one(t: &MinimalistTree, leaf_path: &[Side], moved_path: &[Side], strength: Strength) -> MinimalistTree {
    let mut rest = t.clone();
    {
        let h = rest.head_leaf_mut();
        h.features = drop_first(&h.features);
    }
    let mut moved = t.subtree_at(moved_path).expect("moved subtree").clone();
    {
        let inner = &leaf_path[moved_path.len()..];
        let MinimalistTree::Leaf(l) = moved.subtree_at_mut(inner).expect("licensee leaf") else {
            unreachable!("licensee position is a leaf");
        };
        l.features = drop_first(&l.features);
    }
    let site = rest.subtree_at_mut(moved_path).expect("moved subtree");
    match strength {
        Strength::Strong => {
            *site = MinimalistTree::trace();
        }
        Strength::Weak => {
            let mut left_behind = moved.clone();
            left_behind.for_each_leaf_mut(&mut |l| l.features.clear());
            *site = left_behind;
            moved.for_each_leaf_mut(&mut |l| l.phon.clear());
        }
    }
    MinimalistTree::right(moved, rest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mg::LexicalItem;

    fn lex(phon: &str, fs: &str) -> MinimalistTree {
        let item = LexicalItem::parse(phon, fs);
        MinimalistTree::leaf(item.phon, item.features.into_vec())
    }

    fn t(s: &str) -> MinimalistTree {
        MinimalistTree::parse(s).unwrap()
    }

    #[test]
    fn merge_determiner_and_noun() {
        let dp = merge(&lex("a", "=n d -case"), &lex("man", "n")).unwrap();
        assert_eq!(dp.to_string(), "<( a / d -case , man )");
        let vp = merge(&lex("walks", "=d +CASE v"), &dp).unwrap();
        assert_eq!(vp.to_string(), "<( walks / +CASE v , <( a / -case , man ) )");
    }

    #[test]
    fn derived_selector_takes_a_specifier() {
        // likes :: =d =d v: the second selector survives the first merge
        let vbar = merge(&lex("likes", "=d =d v"), &lex("mary", "d")).unwrap();
        let vp = merge(&vbar, &lex("john", "d")).unwrap();
        assert_eq!(vp.to_string(), ">( john , <( likes / v , mary ) )");
        assert_eq!(vp.yield_string(), "john likes mary");
    }

    #[test]
    fn merge_errors_name_both_features() {
        let err = merge(&lex("man", "n"), &lex("man", "n")).unwrap_err();
        assert_eq!(
            err,
            MergeError::NoSelector {
                found: Some(Feature::basic("n"))
            }
        );
        let err = merge(&lex("a", "=n d -case"), &lex("walks", "=d +CASE v")).unwrap_err();
        assert_eq!(
            err,
            MergeError::CategoryMismatch {
                selector: Feature::selector("n"),
                found: Some(Feature::selector("d")),
            }
        );
        assert!(err.to_string().contains("=n") && err.to_string().contains("=d"));
    }

    #[test]
    fn strong_move_of_the_subject() {
        let vp = t("<( walks / +CASE v , <( a / -case , man ) )");
        let out = move_tree(&vp, MgOptions::default()).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].to_string(), ">( <( a , man ) , <( walks / v , eps ) )");
        assert_eq!(out[0].yield_string(), "a man walks");
    }

    #[test]
    fn weak_move_leaves_phonology_in_place() {
        let vp = t("<( walks / +case v , <( a / -case , man ) )");
        let out = move_tree(&vp, MgOptions::default()).unwrap();
        assert_eq!(
            out[0].to_string(),
            ">( <( eps , eps ) , <( walks / v , <( a , man ) ) )"
        );
        assert_eq!(out[0].yield_string(), "walks a man");
    }

    #[test]
    fn weak_copy_carries_remaining_licensees() {
        let vp = t("<( sees / +case v , <( what / -case -wh , thing ) )");
        let out = move_tree(&vp, MgOptions::default()).unwrap();
        assert_eq!(
            out[0].to_string(),
            ">( <( eps / -wh , eps ) , <( sees / v , <( what , thing ) ) )"
        );
        assert_eq!(out[0].feature_count(), vp.feature_count() - 2);
    }

    #[test]
    fn smc_blocks_ambiguous_licensees() {
        let tree = t("<( v / +CASE v , >( a / -case , <( b / -case , c ) ) )");
        assert_eq!(
            move_tree(&tree, MgOptions::default()),
            Err(MoveError::Smc {
                licensee: "case".into(),
                candidates: 2
            })
        );
        let free = MgOptions {
            smc: false,
            spic: false,
        };
        assert_eq!(move_tree(&tree, free).unwrap().len(), 2);
    }

    #[test]
    fn buried_licensees_do_not_count_for_smc() {
        let tree = t("<( v / +CASE v , >( a / -case , <( b / -wh -case , c ) ) )");
        assert_eq!(move_tree(&tree, MgOptions::default()).unwrap().len(), 1);
    }

    #[test]
    fn no_candidate_is_a_stuck_derivation() {
        let tree = t("<( v / +CASE v , man )");
        assert_eq!(move_tree(&tree, MgOptions::default()), Ok(vec![]));
        assert_eq!(
            move_tree(&t("man / n"), MgOptions::default()),
            Err(MoveError::NoLicensor {
                found: Some(Feature::basic("n"))
            })
        );
    }

    #[test]
    fn spic_blocks_extraction_from_a_specifier() {
        // `who` sits inside the specifier `>( <( who , x ) , ... )` of the inner clause
        let tree = t("<( c / +WH c , >( <( who / -wh , x ) , <( v , y ) ) )");
        let free = MgOptions { smc: true, spic: false };
        assert_eq!(move_tree(&tree, free).unwrap().len(), 1);
        let island = MgOptions { smc: true, spic: true };
        // the maximal projection of `who` is the whole specifier, so it can still move
        assert_eq!(move_tree(&tree, island).unwrap().len(), 1);
        let deep = t("<( c / +WH c , >( >( <( who / -wh , x ) , z ) , <( v , y ) ) )");
        assert_eq!(move_tree(&deep, free).unwrap().len(), 1);
        assert_eq!(move_tree(&deep, island).unwrap().len(), 0);
    }
}
