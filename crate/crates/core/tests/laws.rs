mod common;

use common::{cyclic, dihedral, product, small_groups, wreath};
use proptest::prelude::*;
use wreathvar::catalog::critical_r;
use wreathvar::laws::{
    centre_by_metabelian_law, check_law_with, discriminate, evaluate, recognize, second_derived_central,
    separate_by_law, LawOptions, Method, Shortcut,
};
use wreathvar::{build_group, check_law, parse_word, Budget, Error, Group, GroupElement, LawVerdict, Recipe, Word};

const EXHAUSTIVE: LawOptions = LawOptions {
    seed: 0,
    shortcuts: false,
};

fn w(s: &str) -> Word {
    parse_word(s).unwrap()
}

/// First failing assignment in canonical order, by plain enumeration.
fn brute_first_failure(g: &Group, word: &Word) -> Option<Vec<GroupElement>> {
    let n = g.order_u64().unwrap();
    let k = word.arity();
    let total = n.pow(k as u32);
    (0..total).find_map(|mut idx| {
        let mut ranks = vec![0; k];
        for r in ranks.iter_mut().rev() {
            *r = idx % n;
            idx /= n;
        }
        let a: Vec<GroupElement> = ranks.iter().map(|&r| g.element(&g.unrank(r)).unwrap()).collect();
        let v = evaluate(word, g, &a).unwrap();
        (!v.is_identity()).then_some(a)
    })
}

#[test]
fn evaluation_examples() {
    let ab = product(&[cyclic(4), cyclic(6)]);
    let comm = w("[x1,x2]");
    for a in ab.enumerate().unwrap().iter().step_by(5) {
        for b in ab.enumerate().unwrap().iter().step_by(7) {
            assert!(evaluate(&comm, &ab, &[a.clone(), b.clone()]).unwrap().is_identity());
        }
    }
    let h = Group::heisenberg(3).unwrap();
    let v = evaluate(&comm, &h, &h.generators()).unwrap();
    assert!(!v.is_identity());
    assert_eq!(&v.payload()[..2], &[0, 0]);
    let cube = w("x1^3");
    for a in h.enumerate().unwrap() {
        assert!(evaluate(&cube, &h, &[a]).unwrap().is_identity());
    }
    assert!(matches!(
        evaluate(&w("x1 x3"), &h, &h.generators()),
        Err(Error::UnboundVariable(3))
    ));
}

#[test]
fn check_law_examples() {
    let r = critical_r().unwrap();
    let v = check_law(&r, &centre_by_metabelian_law());
    let LawVerdict::Fails { witness, value } = v else {
        panic!("law holds in R");
    };
    assert!(!value.is_identity());
    assert_eq!(evaluate(&centre_by_metabelian_law(), &r, &witness).unwrap(), value);

    assert!(check_law(&cyclic(2), &w("x1^2")).holds());
    let c2wr = wreath(&cyclic(2), &cyclic(2));
    assert_eq!(
        check_law_with(&c2wr, &w("[x1,x2,x3]"), EXHAUSTIVE),
        LawVerdict::Holds {
            method: Method::Exhaustive
        }
    );
    assert_eq!(
        check_law(&c2wr, &w("[x1,x2,x3]")),
        LawVerdict::Holds {
            method: Method::Structural
        }
    );
}

#[test]
fn shapes_are_recognized() {
    assert_eq!(
        recognize(&centre_by_metabelian_law()),
        Some(Shortcut::SecondDerivedCentral)
    );
    assert_eq!(
        recognize(&w("[[x5,x1],[x2,x4],x3]")),
        Some(Shortcut::SecondDerivedCentral)
    );
    assert_eq!(recognize(&w("[x1,x2]")), Some(Shortcut::LowerCentral(2)));
    assert_eq!(recognize(&w("[[x1,x2],x3]")), Some(Shortcut::LowerCentral(3)));
    assert_eq!(recognize(&w("x2^-6")), Some(Shortcut::Exponent(6)));
    assert_eq!(recognize(&w("[x1,x1]")), None);
    assert_eq!(recognize(&w("[[x1,x2],[x3,x1],x5]")), None);
    assert_eq!(recognize(&w("x1 x2")), None);
}

#[test]
fn witnesses_are_canonically_least() {
    let words = [
        "[x1,x2]",
        "x1^2",
        "x1 x2 x1^-1 x2^-1 x1^2",
        "[x1,x2,x3]",
        "[x1^2, x2] x3^3",
        "(x1 x2)^2",
    ];
    let groups = [
        dihedral(3),
        dihedral(4),
        wreath(&cyclic(2), &cyclic(2)),
        common::q8(),
        cyclic(6),
    ];
    for g in &groups {
        for s in words {
            let word = w(s);
            let want = brute_first_failure(g, &word);
            match check_law_with(g, &word, EXHAUSTIVE) {
                LawVerdict::Fails { witness, .. } => assert_eq!(Some(witness), want, "{s} in {g}"),
                LawVerdict::Holds { .. } => assert_eq!(want, None, "{s} in {g}"),
                LawVerdict::Unknown { reason } => panic!("{s} in {g}: {reason}"),
            }
        }
    }
}

#[test]
fn shortcuts_agree_with_exhaustive_checks() {
    let words = [
        "[x1,x2]",
        "[x1,x2,x3]",
        "[x1,x2,x3,x4]",
        "x1^2",
        "x1^4",
        "x1^6",
        "x1^12",
    ];
    for g in small_groups() {
        for s in words {
            let word = w(s);
            let fast = check_law(&g, &word);
            let slow = check_law_with(&g, &word, EXHAUSTIVE);
            assert!(
                matches!(fast, LawVerdict::Holds { .. } | LawVerdict::Fails { .. }),
                "{s} in {g}"
            );
            assert_eq!(fast.holds(), slow.holds(), "{s} in {g}");
            // Structural failures still report the canonical witness.
            assert_eq!(fast.fails(), slow.fails());
            if let (LawVerdict::Fails { witness: a, .. }, LawVerdict::Fails { witness: b, .. }) = (&fast, &slow) {
                assert_eq!(a, b);
            }
        }
    }
}

#[test]
fn second_derived_centrality_examples() {
    assert!(second_derived_central(&product(&[cyclic(4), cyclic(2)])).unwrap());
    assert!(!second_derived_central(&common::s4()).unwrap());
    // SL(2,3): G'' is the nontrivial centre of Q8, which is central in G.
    assert!(second_derived_central(&common::sl23()).unwrap());
    assert!(check_law_with(&common::sl23(), &centre_by_metabelian_law(), EXHAUSTIVE).holds());
}

#[test]
fn unknown_when_budget_is_exhausted() {
    let small = Budget::new(200);
    let heis = build_group(Recipe::Heisenberg(3), &small).unwrap();
    let c2 = build_group(Recipe::Cyclic(2), &small).unwrap();
    let c3 = build_group(Recipe::Cyclic(3), &small).unwrap();
    let g = build_group(Recipe::DirectProduct(vec![heis, c2, c3]), &small).unwrap();
    // Holds (exponent 6) but has no registered shape and needs 162^2 assignments.
    let v = check_law(&g, &w("(x1 x2)^6"));
    assert!(matches!(v, LawVerdict::Unknown { .. }), "{v}");
    // A failing law is still caught by the random pre-pass.
    let v = check_law(&g, &w("(x1 x2)^3"));
    let LawVerdict::Fails { witness, value } = v else {
        panic!("{v}");
    };
    assert_eq!(evaluate(&w("(x1 x2)^3"), &g, &witness).unwrap(), value);
    assert!(matches!(
        separate_by_law(&g, &cyclic(4), &w("(x1 x2)^6")),
        Err(Error::Inconclusive(_))
    ));
}

#[test]
fn separation_examples() {
    let cert = separate_by_law(&cyclic(2), &cyclic(4), &w("x1^2")).unwrap().unwrap();
    assert_eq!(cert.witness.len(), 1);
    assert!(!cert.value.is_identity());
    // Wrong direction: the law fails in the first group.
    assert!(separate_by_law(&cyclic(4), &cyclic(2), &w("x1^2")).unwrap().is_none());
    // Both satisfy it.
    assert!(separate_by_law(&cyclic(2), &cyclic(2), &w("x1^2")).unwrap().is_none());
}

#[test]
fn discrimination_examples() {
    let words: Vec<Word> = ["x1", "x2", "x1 x2"].into_iter().map(w).collect();
    let v4 = product(&[cyclic(2), cyclic(2)]);
    let found = discriminate(&v4, &words).unwrap().unwrap();
    let payloads: Vec<Vec<u32>> = found.iter().map(|e| e.payload().to_vec()).collect();
    assert_eq!(payloads, vec![vec![0, 1], vec![1, 0]]);
    assert!(discriminate(&cyclic(2), &words).unwrap().is_none());
    assert_eq!(discriminate(&cyclic(5), &[]).unwrap(), Some(vec![]));
}

fn word_strategy(vars: usize) -> impl Strategy<Value = Word> {
    let leaf = (1..=vars).prop_map(Word::Var);
    leaf.prop_recursive(4, 24, 4, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Word::Product),
            inner.clone().prop_map(Word::inverse),
            (inner.clone(), -4i64..5).prop_map(|(w, k)| Word::power(w, k)),
            prop::collection::vec(inner, 2..4).prop_map(Word::Commutator),
        ]
    })
}

fn assignment(g: &Group, ranks: &[u64]) -> Vec<GroupElement> {
    let n = g.order_u64().unwrap();
    ranks.iter().map(|r| g.element(&g.unrank(r % n)).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn commutators_expand_to_products(word in word_strategy(3), ranks in prop::collection::vec(0u64..1000, 3)) {
        for g in [critical_r().unwrap(), common::s4(), Group::heisenberg(5).unwrap()] {
            let a = assignment(&g, &ranks);
            let direct = evaluate(&word, &g, &a).unwrap();
            let expanded = evaluate(&word.expand_commutators(), &g, &a).unwrap();
            prop_assert_eq!(direct, expanded);
        }
    }

    #[test]
    fn display_parse_round_trip(word in word_strategy(6)) {
        let text = word.to_string();
        prop_assert_eq!(parse_word(&text).unwrap(), word);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn renaming_preserves_verdicts(word in word_strategy(3), shift in 1usize..4) {
        for g in [dihedral(4), common::q8(), cyclic(6)] {
            let renamed = word.rename(&|i| (i + shift - 1) % 3 + 1 + 2 * shift);
            let a = check_law_with(&g, &word, EXHAUSTIVE);
            let b = check_law_with(&g, &renamed, EXHAUSTIVE);
            prop_assert_eq!(a.holds(), b.holds());
            prop_assert_eq!(a.fails(), b.fails());
        }
    }

    #[test]
    fn failures_reevaluate(word in word_strategy(3)) {
        let g = dihedral(5);
        if let LawVerdict::Fails { witness, value } = check_law_with(&g, &word, EXHAUSTIVE) {
            let again = evaluate(&word, &g, &witness).unwrap();
            prop_assert!(!again.is_identity());
            prop_assert_eq!(again, value);
        }
    }
}
