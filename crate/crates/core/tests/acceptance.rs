//! Acceptance suite: every criterion runs, prints one PASS/FAIL line, and the
//! test fails if any criterion does.

mod common;

use std::time::{Duration, Instant};

use common::{cyclic, product, small_groups, wreath};
use wreathvar::catalog::{critical_r, heis3_wr_c2, heis3_wr_klein};
use wreathvar::criteria::{
    decide_finite_pair, decide_pair, decide_sets, parse_descriptor, schreier_rank, AbelianDescriptor, Multiplicity,
    SetDescriptor,
};
use wreathvar::embeddings::{kk_embedding, Transversal};
use wreathvar::laws::{
    centre_by_metabelian_law, check_law_with, discriminate, evaluate, second_derived_central, separate_by_law,
    LawOptions, Method,
};
use wreathvar::structure::{generate_subgroup, lower_central_series, order_statistics};
use wreathvar::varieties::{relatively_free, variety_membership, Membership};
use wreathvar::{check_law, parse_word, Group, LawVerdict, Nilpotency, Word};

/// Wall-clock limit for the structural computation at order 2,125,764.
const EXAMPLE_2_TIME_LIMIT: Duration = Duration::from_secs(120);
/// Largest exponent and total rank in the descriptor cross-check.
const CROSS_CHECK_MAX_EXPONENT: u64 = 16;
const CROSS_CHECK_MAX_RANK: u64 = 4;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn order_formula() -> Outcome {
    let c2 = cyclic(2);
    let c3 = cyclic(3);
    // |A|^|B| * |B|; C3 Wr C2 has 3^2 * 2 = 18 elements.
    let cases = [
        (wreath(&c2, &c2), 8u64),
        (wreath(&c3, &c2), 18),
        (heis3_wr_c2().map_err(e)?, 1458),
    ];
    for (g, want) in &cases {
        ensure(
            g.order_u64() == Some(*want),
            format!("|{g}| = {}, want {want}", g.order()),
        )?;
        let (a, b) = g.wreath_factors().ok_or("not a wreath product")?;
        let (na, nb) = (a.order_u64().unwrap(), b.order_u64().unwrap());
        ensure(na.pow(nb as u32) * nb == *want, "formula")?;
        let counted = g.payloads().map_err(e)?.count() as u64;
        ensure(counted == *want, format!("enumerated {counted} elements"))?;
    }
    Ok("8, 18, 1458 (formula and enumeration agree)".into())
}

fn heisenberg_presentation() -> Outcome {
    let a = Group::heisenberg(3).map_err(e)?;
    let gens = a.generators();
    for rel in ["[x1,x2,x1]", "[x1,x2,x2]", "x1^3", "x2^3"] {
        let w = parse_word(rel).map_err(e)?;
        let v = evaluate(&w, &a, &gens).map_err(e)?;
        ensure(v.is_identity(), format!("relation {rel} gives {v}"))?;
    }
    ensure(a.order_u64() == Some(27), "order")?;
    ensure(a.exponent().map_err(e)? == 3, "exponent")?;
    let lcs = lower_central_series(&a).map_err(e)?;
    ensure(lcs.verdict == Nilpotency::Class(2), format!("{}", lcs.verdict))?;
    Ok("relations hold, order 27, exponent 3, class 2".into())
}

fn example_1_part_a() -> Outcome {
    let g = heis3_wr_c2().map_err(e)?;
    ensure(second_derived_central(&g).map_err(e)?, "G'' not central in Heis3 Wr C2")?;
    let law = centre_by_metabelian_law();
    let v = check_law(&g, &law);
    ensure(
        v == LawVerdict::Holds {
            method: Method::Structural,
        },
        format!("verdict {v}"),
    )?;
    // Oracle equivalence: structural decision against exhaustive law checking.
    let exhaustive = LawOptions {
        shortcuts: false,
        ..LawOptions::default()
    };
    let corpus = small_groups();
    let mut mismatches = Vec::new();
    for h in &corpus {
        let structural = second_derived_central(h).map_err(e)?;
        let direct = check_law_with(h, &law, exhaustive);
        if let LawVerdict::Unknown { reason } = &direct {
            return Err(format!("{h}: {reason}"));
        }
        if structural != direct.holds() {
            mismatches.push(h.to_string());
        }
    }
    ensure(mismatches.is_empty(), format!("oracle mismatches: {mismatches:?}"))?;
    Ok(format!("holds structurally; 0 mismatches over {} groups", corpus.len()))
}

fn example_1_part_b() -> Outcome {
    let r = critical_r().map_err(e)?;
    let law = centre_by_metabelian_law();
    let LawVerdict::Fails { witness, value } = check_law(&r, &law) else {
        return Err("law does not fail in R".into());
    };
    let recomputed = evaluate(&law, &r, &witness).map_err(e)?;
    ensure(
        recomputed == value && !value.is_identity(),
        "witness does not re-evaluate",
    )?;
    let awr = heis3_wr_c2().map_err(e)?;
    let cert = separate_by_law(&awr, &r, &law)
        .map_err(e)?
        .ok_or("no separation certificate")?;
    let again = evaluate(&cert.word, &r, &cert.witness).map_err(e)?;
    ensure(!again.is_identity(), "certificate witness evaluates to 1")?;
    Ok(cert.to_string())
}

fn example_2_consistency() -> Outcome {
    let start = Instant::now();
    let g = heis3_wr_klein().map_err(e)?;
    let central = second_derived_central(&g).map_err(e)?;
    let elapsed = start.elapsed();
    ensure(!central, "G'' central in Heis3 Wr (C2 x C2)")?;
    ensure(
        elapsed <= EXAMPLE_2_TIME_LIMIT,
        format!("took {elapsed:?}, limit {EXAMPLE_2_TIME_LIMIT:?}"),
    )?;
    Ok(format!("G'' not central at order {} in {elapsed:.1?}", g.order()))
}

/// Every finite descriptor with exponent at most `max_exp` and total rank at
/// most `max_rank`, enumerated as multisets of prime powers.
fn finite_descriptors(max_exp: u64, max_rank: u64) -> Vec<AbelianDescriptor> {
    let powers: Vec<(u64, u32)> = (2..=max_exp)
        .filter_map(|q| {
            let p = (2..=q).find(|d| q % d == 0)?;
            let mut k = 0;
            let mut m = q;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            (m == 1).then_some((p, k))
        })
        .collect();
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<(u64, u32)>)> = vec![(0, Vec::new())];
    while let Some((start, chosen)) = stack.pop() {
        if !chosen.is_empty() {
            let d = AbelianDescriptor::finite(chosen.iter().map(|&(p, k)| (p, k, Multiplicity::Finite(1))));
            if let Ok(d) = d {
                if matches!(d.exponent(), wreathvar::criteria::Exponent::Finite(m) if m <= max_exp) {
                    out.push(d);
                }
            }
        }
        if chosen.len() as u64 == max_rank {
            continue;
        }
        for (i, &pk) in powers.iter().enumerate().skip(start) {
            let mut next = chosen.clone();
            next.push(pk);
            stack.push((i, next));
        }
    }
    out
}

fn criterion_procedures() -> Outcome {
    let d = |s: &str| parse_descriptor(s).map_err(e);
    ensure(
        decide_finite_pair(&d("finite{3^1:1}")?, &d("finite{2^1:1}")?).map_err(e)?,
        "(C3,C2)",
    )?;
    ensure(
        !decide_finite_pair(&d("finite{2^1:1}")?, &d("finite{2^1:1}")?).map_err(e)?,
        "(C2,C2)",
    )?;
    // p = 2, q = 3 in the two displayed examples.
    let a = d("finite{2^1:1}")?;
    ensure(
        decide_pair(&a, &d("finite{3^1:1, 2^1:2, 2^2:inf}")?).holds,
        "omega example",
    )?;
    ensure(
        !decide_pair(&a, &d("finite{3^1:1, 2^2:3, 2^1:inf}")?).holds,
        "multiplicity-3 example",
    )?;
    let x = SetDescriptor::singleton(a.clone());
    let y = SetDescriptor::new(vec![a.clone()], vec![(2, 1)]).map_err(e)?;
    ensure(decide_sets(&x, &y).holds, "B(s) family")?;
    let y = SetDescriptor::new(vec![a.clone(), d("finite{2^1:2}")?], vec![]).map_err(e)?;
    ensure(!decide_sets(&x, &y).holds, "bounded family")?;

    let all = finite_descriptors(CROSS_CHECK_MAX_EXPONENT, CROSS_CHECK_MAX_RANK);
    let mut disagreements = 0;
    for a in &all {
        for b in &all {
            if decide_pair(a, b).holds != decide_finite_pair(a, b).map_err(e)? {
                disagreements += 1;
            }
        }
    }
    ensure(disagreements == 0, format!("{disagreements} disagreements"))?;
    Ok(format!("0 disagreements over {} pairs", all.len() * all.len()))
}

fn relatively_free_groups() -> Outcome {
    let f = |g: &Group| relatively_free(g, 2).map_err(e);
    ensure(f(&cyclic(2))?.order() == 4, "F2(var C2)")?;
    ensure(f(&cyclic(3))?.order() == 9, "F2(var C3)")?;
    let heis = Group::heisenberg(3).map_err(e)?;
    let free = f(&heis)?;
    ensure(free.order() == 27, format!("F2(var Heis3) has order {}", free.order()))?;
    let stats = order_statistics(&free.as_group().map_err(e)?, 3).map_err(e)?;
    let want = order_statistics(&heis, 3).map_err(e)?;
    ensure(stats == want, format!("order statistics {stats:?} vs {want:?}"))?;
    Ok(format!("4, 9, 27; statistics {stats:?}"))
}

fn membership() -> Outcome {
    let m = |h: &Group, g: &Group| variety_membership(h, &h.generators(), g).map_err(e);
    let heis = Group::heisenberg(3).map_err(e)?;
    ensure(m(&cyclic(2), &cyclic(4))? == Membership::Member, "C2 in var C4")?;
    ensure(m(&cyclic(4), &cyclic(2))? == Membership::NonMember, "C4 in var C2")?;
    ensure(m(&heis, &cyclic(3))? == Membership::NonMember, "Heis3 in var C3")?;
    Ok("member, non-member, non-member".into())
}

fn kaloujnine_krasner() -> Outcome {
    let r = critical_r().map_err(e)?;
    let base: Vec<_> = r
        .base_generator_payloads()
        .ok_or("R has no base")?
        .iter()
        .map(|p| r.element(p))
        .collect::<Result<_, _>>()
        .map_err(e)?;
    let n = generate_subgroup(&r, &base, false).map_err(e)?;
    let phi = kk_embedding(&r, &n, Transversal::Canonical).map_err(e)?;
    let v = phi.verification().ok_or("unverified")?;
    ensure(v.is_hom && v.is_injective && v.image_order == 108, format!("{v:?}"))?;
    let target = 27u64.pow(4) * 4;
    ensure(phi.codomain().order_u64() == Some(target), "codomain order")?;

    let c4 = cyclic(4);
    let two = generate_subgroup(&c4, &[c4.element(&[2]).map_err(e)?], false).map_err(e)?;
    let psi = kk_embedding(&c4, &two, Transversal::Canonical).map_err(e)?;
    let v = psi.verification().ok_or("unverified")?;
    ensure(v.is_hom && v.is_injective, format!("{v:?}"))?;
    ensure(psi.codomain().order_u64() == Some(8), "C4 codomain")?;
    Ok(format!("R into group of order {target}; C4 into C2 Wr C2"))
}

fn schreier() -> Outcome {
    let t = schreier_rank(2, 2).map_err(e)?;
    ensure(t == 5, format!("got {t}"))?;
    Ok("t = 5".into())
}

fn nilpotency_obstruction() -> Outcome {
    let c2 = cyclic(2);
    let small = wreath(&c2, &c2);
    let big = wreath(&c2, &product(&[c2.clone(), c2.clone()]));
    let cs = lower_central_series(&small).map_err(e)?.verdict;
    let cb = lower_central_series(&big).map_err(e)?.verdict;
    let (Nilpotency::Class(a), Nilpotency::Class(b)) = (&cs, &cb) else {
        return Err(format!("{cs}, {cb}"));
    };
    ensure(*a == 2 && b > a, format!("classes {a}, {b}"))?;
    let law = Word::simple_commutator(3);
    let cert = separate_by_law(&small, &big, &law)
        .map_err(e)?
        .ok_or("no certificate")?;
    Ok(format!("classes {a} < {b}; {cert}"))
}

fn discrimination() -> Outcome {
    let words: Vec<Word> = ["x1", "x2", "x1 x2"]
        .iter()
        .map(|s| parse_word(s))
        .collect::<Result<_, _>>()
        .map_err(e)?;
    let v4 = product(&[cyclic(2), cyclic(2)]);
    let w = discriminate(&v4, &words).map_err(e)?.ok_or("no witness in C2 x C2")?;
    for word in &words {
        ensure(!evaluate(word, &v4, &w).map_err(e)?.is_identity(), "witness check")?;
    }
    ensure(
        discriminate(&cyclic(2), &words).map_err(e)?.is_none(),
        "C2 discriminates",
    )?;
    Ok(format!("witness {}, {}; none in C2", w[0], w[1]))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 12] = [
        ("wreath order formula", order_formula),
        ("Heisenberg presentation and invariants", heisenberg_presentation),
        ("law holds in Heis3 Wr C2, oracle equivalence", example_1_part_a),
        ("law fails in R, separation certificate", example_1_part_b),
        ("G'' not central in Heis3 Wr (C2 x C2)", example_2_consistency),
        ("abelian criterion procedures", criterion_procedures),
        ("relatively free groups", relatively_free_groups),
        ("variety membership", membership),
        ("Kaloujnine-Krasner embeddings", kaloujnine_krasner),
        ("Schreier rank", schreier),
        ("nilpotency obstruction", nilpotency_obstruction),
        ("finite discrimination", discrimination),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({ms} ms): {detail}", i + 1),
            Err(why) => {
                println!("FAIL {:>2} {name} ({ms} ms): {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
