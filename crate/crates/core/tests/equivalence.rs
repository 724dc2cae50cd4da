use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use minimalist_core::equivalence::{compare, translate_lexicon, PairedGrammar, TranslateError};
use minimalist_core::{MGrammar, Strength};

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn paired(path: &Path) -> PairedGrammar {
    fs::read_to_string(path)
        .unwrap()
        .parse()
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn corpus() -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "mg"))
        .collect();
    out.sort();
    out
}

#[test]
fn example_translation_is_formula_for_formula() {
    let g: MGrammar = fs::read_to_string(corpus_dir().join("a_man_walks.mg"))
        .unwrap()
        .parse()
        .unwrap();
    let t = translate_lexicon(&g).unwrap();
    let expected = [("walks", "case \\ v / d"), ("a", "(case * d) / n"), ("man", "n")];
    assert_eq!(t.lexicon.len(), 3);
    for (item, (phon, formula)) in t.lexicon.iter().zip(expected) {
        assert_eq!(item.phon, phon);
        assert_eq!(item.formula.to_string(), formula);
    }
    assert_eq!(t.accepting, "v");
    assert!(t.partition.p2.contains("case"));
    assert_eq!(t.strength("case"), Strength::Strong);
}

#[test]
fn override_blocks_pair_with_the_mg_side() {
    let pg = paired(&corpus_dir().join("override_weak.mg"));
    assert!(pg.is_translated());
    assert_eq!(pg.mcg.accepting, "v");
    let text =
        "walks :: =d +CASE v\na :: =n d -case\nman :: n\naccept: v\nmcg-override:\nwalks :: case \\ v / d\nend\n";
    assert!(text.parse::<PairedGrammar>().is_err());
}

#[test]
fn untranslatable_lexicons_are_reported() {
    let clash: MGrammar = "x :: =d v\ny :: d -v\naccept: v\n".parse().unwrap();
    assert!(matches!(
        translate_lexicon(&clash),
        Err(TranslateError::KindClash { .. })
    ));
    let mixed: MGrammar = "x :: =d +CASE v\nz :: =v +case c\ny :: d -case\naccept: c\n"
        .parse()
        .unwrap();
    assert!(matches!(
        translate_lexicon(&mixed),
        Err(TranslateError::MixedStrength { .. })
    ));
}

#[test]
fn corpus_is_included_at_bound_ten() {
    let files = corpus();
    assert!(files.len() >= 10);
    let start = Instant::now();
    let mut cyclic_seen = false;
    for path in &files {
        let pg = paired(path);
        let report = compare(&pg, 10);
        assert!(
            report.mg_only.is_empty(),
            "{}: mg-only strings\n{}",
            path.display(),
            report.render()
        );
        // the report is internally consistent
        let union: BTreeSet<String> = report.common.union(&report.mg_only).cloned().collect();
        assert_eq!(union, report.mg_strings);
        let union: BTreeSet<String> = report.common.union(&report.mcg_only).cloned().collect();
        assert_eq!(union, report.mcg_strings);
        if path.ends_with("what_john_sees.mg") {
            assert!(report.common.contains("what john sees"));
            cyclic_seen = true;
        }
    }
    assert!(cyclic_seen);
    assert!(start.elapsed().as_secs() < 60);
}

#[test]
fn weak_and_strong_agree_on_the_example() {
    for (name, s) in [
        ("a_man_walks.mg", "a man walks"),
        ("a_man_walks_weak.mg", "walks a man"),
    ] {
        let report = compare(&paired(&corpus_dir().join(name)), 8);
        assert!(report.agrees(), "{}", report.render());
        assert_eq!(report.common, BTreeSet::from([s.to_string()]));
    }
}

// A weak licensor checked before a strong one on the same chain. The MG
// engine pronounces the phrase where the weak move left it; the final MCG
// move puts it at the last landing site.
#[test]
fn weak_then_strong_chains_diverge() {
    let pg = paired(&corpus_dir().join("findings/weak_then_strong.mg"));
    let report = compare(&pg, 10);
    println!("{}", report.render());
    assert_eq!(report.mg_only, BTreeSet::from(["sleeps who".to_string()]));
    assert_eq!(report.mcg_only, BTreeSet::from(["who sleeps".to_string()]));
    let w = &report.witnesses["sleeps who"];
    assert!(w.mg.as_deref().is_some_and(|t| t.contains("move[weak]")));
    assert!(w.mcg.is_none());
    let w = &report.witnesses["who sleeps"];
    assert!(w.mcg.as_deref().is_some_and(|p| p.contains("mv-cyclic-weak")));
    assert_eq!(report.mcg_bound, 20);
}

#[test]
fn reports_serialize() {
    let report = compare(&paired(&corpus_dir().join("a_man_walks.mg")), 6);
    let v = serde_json::to_value(&report).unwrap();
    assert_eq!(v["common"], serde_json::json!(["a man walks"]));
    assert_eq!(v["mg_only"], serde_json::json!([]));
    assert_eq!(v["bound"], 6);
}
