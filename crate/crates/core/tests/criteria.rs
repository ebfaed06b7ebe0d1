mod common;

use common::{cyclic, metacyclic, product};
use proptest::prelude::*;
use wreathvar::criteria::{
    decide_finite_pair, decide_pair, decide_sets, descriptor_of, parse_descriptor, parse_set, schreier_rank,
    shmelkin_necessary, AbelianDescriptor, InfiniteReason, Multiplicity, SetDescriptor,
};
use wreathvar::{Error, Group};

fn d(s: &str) -> AbelianDescriptor {
    parse_descriptor(s).unwrap()
}

/// Independent restatement of the criterion over the raw summand lists.
fn oracle(a: &[(u64, u32, Option<u64>)], b: &[(u64, u32, Option<u64>)]) -> bool {
    let exp = |xs: &[(u64, u32, Option<u64>)]| xs.iter().fold(1u64, |acc, &(p, k, _)| num_integer::lcm(acc, p.pow(k)));
    let (m, n) = (exp(a), exp(b));
    (2..=m.min(n))
        .filter(|p| m % p == 0 && n % p == 0 && (2..*p).all(|q| p % q != 0))
        .all(|p| {
            let mut k = 0;
            while n % p.pow(k + 1) == 0 {
                k += 1;
            }
            b.iter().any(|&(q, j, mult)| q == p && j == k && mult.is_none())
        })
}

fn to_descriptor(xs: &[(u64, u32, Option<u64>)]) -> AbelianDescriptor {
    AbelianDescriptor::finite(
        xs.iter()
            .map(|&(p, k, m)| (p, k, m.map_or(Multiplicity::Omega, Multiplicity::Finite))),
    )
    .unwrap()
}

fn summands() -> impl Strategy<Value = Vec<(u64, u32, Option<u64>)>> {
    prop::collection::vec(
        (
            prop::sample::select(vec![2u64, 3, 5, 7]),
            1u32..4,
            prop::option::weighted(0.6, 1u64..4),
        ),
        1..5,
    )
}

fn any_descriptor() -> impl Strategy<Value = AbelianDescriptor> {
    prop_oneof![
        4 => summands().prop_map(|s| to_descriptor(&s)),
        1 => Just(AbelianDescriptor::Infinite(InfiniteReason::FreeSummand)),
        1 => prop::sample::select(vec![2u64, 3, 5]).prop_map(|p| AbelianDescriptor::Infinite(InfiniteReason::Quasicyclic(p))),
        1 => Just(AbelianDescriptor::Infinite(InfiniteReason::Unbounded)),
    ]
}

#[test]
fn descriptors_of_concrete_groups() {
    assert_eq!(descriptor_of(&cyclic(12)).unwrap(), d("finite{2^2:1, 3^1:1}"));
    assert_eq!(
        descriptor_of(&product(&[cyclic(2), cyclic(2), cyclic(4)])).unwrap(),
        d("finite{2^1:2, 2^2:1}")
    );
    assert!(matches!(
        descriptor_of(&Group::heisenberg(3).unwrap()),
        Err(Error::NotAbelian)
    ));
    assert!(descriptor_of(&cyclic(1)).is_err());
}

#[test]
fn concrete_and_symbolic_routes_agree() {
    let shapes: [&[u32]; 6] = [&[6], &[2, 2], &[4, 6], &[3, 9], &[5], &[2, 3, 4]];
    for a in shapes {
        for b in shapes {
            let ga = product(&a.iter().map(|&n| cyclic(n)).collect::<Vec<_>>());
            let gb = product(&b.iter().map(|&n| cyclic(n)).collect::<Vec<_>>());
            let da = descriptor_of(&ga).unwrap();
            let db = descriptor_of(&gb).unwrap();
            let orders = |xs: &[u32]| xs.iter().map(|&n| n as u64).collect::<Vec<_>>();
            assert_eq!(da, AbelianDescriptor::from_cyclic_orders(&orders(a)).unwrap());
            let finite = decide_finite_pair(&da, &db).unwrap();
            assert_eq!(decide_pair(&da, &db).holds, finite, "{a:?} {b:?}");
            // The necessary condition coincides with the criterion for finite abelian pairs.
            assert_eq!(shmelkin_necessary(&ga, &gb).unwrap().holds, finite, "{a:?} {b:?}");
        }
    }
}

#[test]
fn finite_pair_rejects_infinite_groups() {
    assert!(matches!(
        decide_finite_pair(&d("finite{2^1:inf}"), &d("finite{3^1:1}")),
        Err(Error::DescriptorNotFinite)
    ));
    assert!(decide_finite_pair(&d("infinite(Z)"), &d("finite{3^1:1}")).is_err());
}

#[test]
fn shmelkin_examples() {
    let heis = Group::heisenberg(3).unwrap();
    let r = shmelkin_necessary(&heis, &cyclic(2)).unwrap();
    assert!(r.holds && r.reasons.is_empty());
    let r = shmelkin_necessary(&cyclic(2), &cyclic(4)).unwrap();
    assert!(!r.holds);
    assert_eq!(r.reasons.len(), 1);
    // C5 ⋊ C4 is not nilpotent.
    let r = shmelkin_necessary(&metacyclic(5, 4, 2), &cyclic(3)).unwrap();
    assert!(!r.holds);
    assert!(r.reasons[0].contains("not nilpotent"), "{:?}", r.reasons);
    // Non-abelian B.
    let r = shmelkin_necessary(&cyclic(5), &common::dihedral(3)).unwrap();
    assert!(!r.holds);
}

#[test]
fn schreier_examples() {
    assert_eq!(schreier_rank(2, 1).unwrap(), 3);
    assert_eq!(schreier_rank(2, 2).unwrap(), 5);
    assert_eq!(schreier_rank(3, 2).unwrap(), 19);
    assert!(schreier_rank(1, 3).is_err());
    assert!(schreier_rank(2, 0).is_err());
    assert!(schreier_rank(10, 40).is_err());
}

#[test]
fn set_examples() {
    let x = parse_set("{finite{2^1:1}; finite{3^1:1}}").unwrap();
    let y = parse_set("{finite{2^1:inf}; finite{3^1:2}; unbounded(3^1)}").unwrap();
    assert!(decide_sets(&x, &y).holds);
    let y = parse_set("{finite{2^1:inf}; finite{3^1:2}}").unwrap();
    let dec = decide_sets(&x, &y);
    assert!(!dec.holds);
    assert_eq!(dec.checks.iter().filter(|c| !c.satisfied).count(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn infinite_exponent_always_holds(a in any_descriptor(), reason in prop::sample::select(vec![
        InfiniteReason::FreeSummand, InfiniteReason::Quasicyclic(7), InfiniteReason::Unbounded,
    ])) {
        let inf = AbelianDescriptor::Infinite(reason);
        prop_assert!(decide_pair(&inf, &a).holds);
        prop_assert!(decide_pair(&a, &inf).holds);
    }

    #[test]
    fn decide_pair_matches_oracle(a in summands(), b in summands()) {
        let dec = decide_pair(&to_descriptor(&a), &to_descriptor(&b));
        prop_assert_eq!(dec.holds, oracle(&a, &b));
    }

    #[test]
    fn singletons_agree_with_pairs(a in any_descriptor(), b in any_descriptor()) {
        let sets = decide_sets(&SetDescriptor::singleton(a.clone()), &SetDescriptor::singleton(b.clone()));
        let pair = decide_pair(&a, &b);
        prop_assert_eq!(sets.holds, pair.holds);
        prop_assert_eq!(sets.checks.len(), pair.checks.len());
    }

    #[test]
    fn descriptor_text_round_trips(a in any_descriptor()) {
        prop_assert_eq!(parse_descriptor(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn set_text_round_trips(ms in prop::collection::vec(any_descriptor(), 1..4), fam in prop::collection::vec((prop::sample::select(vec![2u64, 3]), 1u32..3), 0..3)) {
        let s = SetDescriptor::new(ms, fam).unwrap();
        prop_assert_eq!(parse_set(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn schreier_rank_is_strictly_increasing(n in 2u64..50, c in 1u32..6) {
        let base = schreier_rank(n, c).unwrap();
        prop_assert!(schreier_rank(n + 1, c).unwrap() > base);
        prop_assert!(schreier_rank(n, c + 1).unwrap() > base);
        prop_assert_eq!(base, (n - 1) * n.pow(c) + 1);
    }
}
