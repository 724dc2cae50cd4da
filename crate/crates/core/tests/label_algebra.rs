use std::collections::{BTreeMap, BTreeSet};

use minimalist_core::label::words;
use minimalist_core::{Label, LabelSubstitution, Token, Var};
use proptest::prelude::*;

fn token() -> impl Strategy<Value = Token> {
    prop_oneof![
        prop::sample::select(vec!["a", "man", "walks", "the"]).prop_map(Token::word),
        (0u32..6).prop_map(|n| Token::Var(Var(n))),
    ]
}

fn tokens() -> impl Strategy<Value = Vec<Token>> {
    prop::collection::vec(token(), 0..4)
}

fn label() -> impl Strategy<Value = Label> {
    (tokens(), tokens(), tokens()).prop_map(|(s, h, c)| Label::new(s, h, c))
}

// A label in which each of the variables 0..6 occurs at most once.
fn linear_label() -> impl Strategy<Value = Label> {
    label().prop_map(|l| {
        let mut seen = BTreeSet::new();
        let mut keep = |ts: &[Token]| -> Vec<Token> {
            ts.iter()
                .filter(|t| t.as_var().is_none_or(|v| seen.insert(v)))
                .cloned()
                .collect()
        };
        let spec = keep(&l.spec);
        let head = keep(&l.head);
        let comp = keep(&l.comp);
        Label::new(spec, head, comp)
    })
}

fn ground_substitution() -> impl Strategy<Value = LabelSubstitution> {
    prop::collection::btree_map(
        (0u32..6).prop_map(Var),
        prop::collection::vec(
            prop::sample::select(vec!["a", "man", "walks"]).prop_map(Token::word),
            0..3,
        ),
        0..6,
    )
}

fn occurrences(l: &Label) -> BTreeMap<Var, usize> {
    let mut out = BTreeMap::new();
    for t in l.spec.iter().chain(&l.head).chain(&l.comp) {
        if let Token::Var(v) = t {
            *out.entry(*v).or_insert(0) += 1;
        }
    }
    out
}

#[test]
fn rendering() {
    let l = Label::new(words("a man"), words("walks"), vec![]);
    assert_eq!(l.to_string(), "(a man, walks, eps)");
    assert_eq!(l.concat_string(), "a man walks");
    let l = Label::new(vec![Token::Var(Var(1))], words("walks"), vec![Token::Var(Var(0))]);
    assert_eq!(l.to_string(), "(?x1, walks, ?x0)");
    assert_eq!(l.variable_order(), vec![Var(1), Var(0)]);
    assert!(words("").is_empty());
}

proptest! {
    #[test]
    fn concat_commutes_with_substitution(l in label(), sigma in ground_substitution()) {
        let whole = Label::new(vec![], l.concat(), vec![]).substitute(&sigma);
        prop_assert_eq!(l.substitute(&sigma).concat(), whole.concat());
    }

    #[test]
    fn substitution_removes_exactly_the_mapped_variables(l in label(), sigma in ground_substitution()) {
        let out = l.substitute(&sigma);
        let mapped: BTreeSet<Var> = sigma.keys().copied().collect();
        let expect: BTreeSet<Var> = l.variables().difference(&mapped).copied().collect();
        prop_assert_eq!(out.variables(), expect);
        prop_assert_eq!(l.substitute(&LabelSubstitution::new()), l.clone());
    }

    #[test]
    fn linearity_matches_occurrence_counts(l in label()) {
        let occ = occurrences(&l);
        prop_assert_eq!(l.occurrences(), occ.clone());
        prop_assert_eq!(l.is_linear(), occ.values().all(|&n| n == 1));
    }

    #[test]
    fn ground_substitution_keeps_linear_labels_linear(l in linear_label(), sigma in ground_substitution()) {
        prop_assert!(l.is_linear());
        prop_assert!(l.substitute(&sigma).is_linear());
    }

    #[test]
    fn renaming_is_invertible(l in label(), shift in 10u32..20) {
        let there: BTreeMap<Var, Var> = l.variables().into_iter().map(|v| (v, Var(v.0 + shift))).collect();
        let back: BTreeMap<Var, Var> = there.iter().map(|(a, b)| (*b, *a)).collect();
        let renamed = l.rename(&there);
        prop_assert_eq!(renamed.occurrences().len(), l.occurrences().len());
        prop_assert_eq!(renamed.rename(&back), l);
    }
}
