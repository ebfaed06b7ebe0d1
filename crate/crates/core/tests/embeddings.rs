mod common;

use common::{cyclic, product, wreath};
use wreathvar::catalog::critical_r;
use wreathvar::embeddings::{kk_embedding, verify_embedding, Homomorphism, Transversal, SAMPLED_PAIRS};
use wreathvar::structure::{center, derived_subgroup, generate_subgroup, quotient, Subgroup};
use wreathvar::{Error, Group};

fn base_of(g: &Group) -> Subgroup {
    let gens: Vec<_> = g
        .base_generator_payloads()
        .unwrap()
        .iter()
        .map(|p| g.element(p).unwrap())
        .collect();
    generate_subgroup(g, &gens, false).unwrap()
}

/// Extensions with a normal subgroup each, all small enough for exhaustive checks.
fn cases() -> Vec<(Group, Subgroup)> {
    let r = critical_r().unwrap();
    let c4 = cyclic(4);
    let two = generate_subgroup(&c4, &[c4.element(&[2]).unwrap()], false).unwrap();
    let ab = product(&[cyclic(3), cyclic(2)]);
    let s4 = common::s4();
    let w = wreath(&cyclic(2), &cyclic(2));
    vec![
        (r.clone(), base_of(&r)),
        (r.clone(), center(&r).unwrap()),
        (r.clone(), derived_subgroup(&r).unwrap()),
        (c4, two),
        (ab.clone(), base_of(&ab)),
        (s4.clone(), base_of(&s4)),
        (w.clone(), center(&w).unwrap()),
        (common::q8(), derived_subgroup(&common::q8()).unwrap()),
    ]
}

#[test]
fn headline_examples() {
    let r = critical_r().unwrap();
    let phi = kk_embedding(&r, &base_of(&r), Transversal::Canonical).unwrap();
    let v = phi.verification().unwrap();
    assert!(v.is_hom && v.is_injective && v.exhaustive);
    assert_eq!(v.image_order, 108);
    assert_eq!(v.pairs_checked, 108 * 108);
    assert_eq!(phi.codomain().order_u64(), Some(27u64.pow(4) * 4));

    let c4 = cyclic(4);
    let two = generate_subgroup(&c4, &[c4.element(&[2]).unwrap()], false).unwrap();
    let psi = kk_embedding(&c4, &two, Transversal::Canonical).unwrap();
    assert_eq!(psi.codomain().order_u64(), Some(8));
    let v = psi.verification().unwrap();
    assert!(v.is_hom && v.is_injective);
}

#[test]
fn verification_flags_simple_maps() {
    let c6 = cyclic(6);
    let v = verify_embedding(&Homomorphism::identity(&c6).unwrap(), 0);
    assert!(v.is_hom && v.is_injective);
    let c2 = cyclic(2);
    let v = verify_embedding(&Homomorphism::trivial(&c2, &c2).unwrap(), 0);
    assert!(v.is_hom && !v.is_injective);
    // x -> x + 1 is a bijection but not a homomorphism.
    let shift = Homomorphism::from_fn(&c6, &c6, |x| vec![(x[0] + 1) % 6].into_boxed_slice()).unwrap();
    let v = verify_embedding(&shift, 0);
    assert!(!v.is_hom && v.is_injective);
}

#[test]
fn invalid_images_are_rejected() {
    let c3 = cyclic(3);
    assert!(Homomorphism::from_fn(&c3, &c3, |_| vec![7].into_boxed_slice()).is_err());
}

#[test]
fn non_normal_subgroups_are_rejected() {
    let s3 = common::dihedral(3);
    let refl = generate_subgroup(&s3, &[s3.element(&[0, 1]).unwrap()], false).unwrap();
    assert!(matches!(
        kk_embedding(&s3, &refl, Transversal::Canonical),
        Err(Error::NotNormal)
    ));
}

#[test]
fn embeddings_verify_with_order_formula() {
    for (e, n) in cases() {
        let phi = kk_embedding(&e, &n, Transversal::Canonical).unwrap();
        let v = phi.verification().unwrap();
        assert!(v.is_hom && v.is_injective, "{e}");
        assert_eq!(v.image_order, e.order_u64().unwrap());
        let q = e.order_u64().unwrap() / n.order();
        assert_eq!(phi.codomain().order_u64().unwrap(), n.order().pow(q as u32) * q, "{e}");
    }
}

#[test]
fn any_transversal_works() {
    for (e, n) in cases() {
        for seed in [1, 2, 99] {
            let phi = kk_embedding(&e, &n, Transversal::Seeded(seed)).unwrap();
            let v = phi.verification().unwrap();
            assert!(v.is_hom && v.is_injective, "{e} seed {seed}");
        }
    }
}

#[test]
fn top_projection_recovers_the_quotient_map() {
    for (e, n) in cases() {
        let phi = kk_embedding(&e, &n, Transversal::Canonical).unwrap();
        let (q, proj) = quotient(&e, &n).unwrap();
        let width = phi.codomain().width();
        for g in e.payloads().unwrap() {
            let top = phi.image_payload(&g)[width - 1] as u64;
            assert_eq!(top, q.rank(proj.image_payload(&g)), "{e}");
        }
    }
}

#[test]
fn large_domains_are_sampled() {
    let e = Group::power(&cyclic(2), 14).unwrap();
    let phi = kk_embedding(&e, &Subgroup::whole(&e), Transversal::Canonical).unwrap();
    let v = phi.verification().unwrap();
    assert!(!v.exhaustive);
    assert_eq!(v.pairs_checked, SAMPLED_PAIRS);
    assert!(v.is_hom && v.is_injective);
}
