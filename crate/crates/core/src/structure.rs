//! Subgroups, commutator calculus, series and primary decomposition.

use std::fmt;

use indexmap::IndexSet;
use serde::Serialize;

use crate::closure::Closure;
use crate::embeddings::Homomorphism;
use crate::error::{Error, Result};
use crate::group::{prime_factors, Group, GroupElement, Payload};

/// Above this many `(h, k)` pairs, commutator subgroups are seeded from
/// generator commutators only.
pub const ALL_PAIRS_LIMIT: u64 = 1_000_000;

#[derive(Clone)]
enum Members {
    Whole,
    Listed(Vec<Payload>),
}

/// A subgroup of a concrete group, with a generating set.
#[derive(Clone)]
pub struct Subgroup {
    parent: Group,
    members: Members,
    generators: Vec<Payload>,
}

impl Subgroup {
    /// The group as a subgroup of itself. Elements are not materialized.
    pub fn whole(group: &Group) -> Subgroup {
        Subgroup {
            parent: group.clone(),
            members: Members::Whole,
            generators: group.generator_payloads().to_vec(),
        }
    }

    pub fn trivial(group: &Group) -> Subgroup {
        Subgroup {
            parent: group.clone(),
            members: Members::Listed(vec![group.identity_payload()]),
            generators: Vec::new(),
        }
    }

    pub(crate) fn from_closure(parent: &Group, closure: Closure) -> Subgroup {
        let (elements, generators) = closure.into_sorted();
        Subgroup {
            parent: parent.clone(),
            members: Members::Listed(elements),
            generators,
        }
    }

    /// Subgroup on an already closed, sorted element list.
    pub(crate) fn from_sorted(parent: &Group, elements: Vec<Payload>) -> Result<Subgroup> {
        let cl = Closure::generate(
            parent,
            elements.iter().map(|e| &e[..]),
            parent.budget(),
            "subgroup generators",
        )?;
        debug_assert_eq!(cl.len(), elements.len());
        Ok(Subgroup {
            parent: parent.clone(),
            members: Members::Listed(elements),
            generators: cl.gens,
        })
    }

    pub fn parent(&self) -> &Group {
        &self.parent
    }

    pub fn order(&self) -> u64 {
        match &self.members {
            Members::Whole => self.parent.order_u64().expect("whole group order fits u64"),
            Members::Listed(e) => e.len() as u64,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// Sorted element payloads (materializes the whole group if necessary).
    pub fn payloads(&self) -> Result<Vec<Payload>> {
        match &self.members {
            Members::Whole => Ok(self.parent.payloads()?.collect()),
            Members::Listed(e) => Ok(e.clone()),
        }
    }

    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        Ok(self.payloads()?.into_iter().map(|p| self.parent.wrap(p)).collect())
    }

    pub fn generator_payloads(&self) -> &[Payload] {
        &self.generators
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        self.generators.iter().map(|p| self.parent.wrap(p.clone())).collect()
    }

    pub fn contains_payload(&self, a: &[u32]) -> bool {
        match &self.members {
            Members::Whole => true,
            Members::Listed(e) => e.binary_search_by(|x| (**x).cmp(a)).is_ok(),
        }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.group().same_as(&self.parent) && self.contains_payload(g.payload())
    }

    /// Normality via conjugation of generators by the parent's generators.
    pub fn is_normal(&self) -> bool {
        let g = &self.parent;
        self.generators.iter().all(|n| {
            g.generator_payloads()
                .iter()
                .all(|x| self.contains_payload(&g.conjugate(n, x)))
        })
    }

    /// Same element set (both subgroups of the same parent).
    pub fn same_elements(&self, other: &Subgroup) -> Result<bool> {
        if self.order() != other.order() {
            return Ok(false);
        }
        if let (Members::Listed(a), Members::Listed(b)) = (&self.members, &other.members) {
            return Ok(a == b);
        }
        Ok(self.payloads()? == other.payloads()?)
    }

    /// The subgroup as a standalone group with the parent's arithmetic.
    pub fn as_group(&self) -> Result<Group> {
        match &self.members {
            Members::Whole => Ok(self.parent.clone()),
            Members::Listed(e) => Ok(Group::carrier_group(&self.parent, e.clone(), self.generators.clone())),
        }
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {} of {})", self.order(), self.parent)
    }
}

fn check_owner(group: &Group, elems: &[GroupElement]) -> Result<()> {
    if elems.iter().all(|e| e.group().same_as(group)) {
        Ok(())
    } else {
        Err(Error::MixedOwner)
    }
}

/// Smallest subgroup (normal subgroup, if `normal`) containing `seeds`.
pub fn generate_subgroup(group: &Group, seeds: &[GroupElement], normal: bool) -> Result<Subgroup> {
    check_owner(group, seeds)?;
    let seeds = seeds.iter().map(|s| s.payload());
    let cl = if normal {
        Closure::normal_closure(
            group,
            seeds,
            group.generator_payloads(),
            group.budget(),
            "subgroup closure",
        )?
    } else {
        Closure::generate(group, seeds, group.budget(), "subgroup closure")?
    };
    Ok(Subgroup::from_closure(group, cl))
}

/// `[H, K]`, the subgroup generated by all `[h, k] = h⁻¹k⁻¹hk`.
pub fn commutator_subgroup(group: &Group, h: &Subgroup, k: &Subgroup) -> Result<Subgroup> {
    if !h.parent.same_as(group) || !k.parent.same_as(group) {
        return Err(Error::MixedOwner);
    }
    let mut seeds: IndexSet<Payload> = IndexSet::new();
    if h.order().saturating_mul(k.order()) <= ALL_PAIRS_LIMIT {
        let hs = h.payloads()?;
        let ks = k.payloads()?;
        for x in &hs {
            for y in &ks {
                seeds.insert(group.commutator(x, y));
            }
        }
    } else {
        for x in &h.generators {
            for y in &k.generators {
                seeds.insert(group.commutator(x, y));
            }
        }
    }
    let mut conjugators: Vec<Payload> = h.generators.clone();
    conjugators.extend(k.generators.iter().cloned());
    let cl = Closure::normal_closure(
        group,
        seeds.iter().map(|s| &s[..]),
        &conjugators,
        group.budget(),
        "commutator subgroup",
    )?;
    Ok(Subgroup::from_closure(group, cl))
}

/// Same as [`commutator_subgroup`] but always seeded from generator
/// commutators; used to cross-check the all-pairs route.
pub fn commutator_subgroup_from_generators(group: &Group, h: &Subgroup, k: &Subgroup) -> Result<Subgroup> {
    let seeds: Vec<Payload> = h
        .generators
        .iter()
        .flat_map(|x| k.generators.iter().map(move |y| group.commutator(x, y)))
        .collect();
    let mut conjugators: Vec<Payload> = h.generators.clone();
    conjugators.extend(k.generators.iter().cloned());
    let cl = Closure::normal_closure(
        group,
        seeds.iter().map(|s| &s[..]),
        &conjugators,
        group.budget(),
        "commutator subgroup",
    )?;
    Ok(Subgroup::from_closure(group, cl))
}

pub fn derived_subgroup(group: &Group) -> Result<Subgroup> {
    let whole = Subgroup::whole(group);
    commutator_subgroup(group, &whole, &whole)
}

/// `G ⊇ G' ⊇ G'' ⊇ …`, stopping at the first term equal to its successor.
pub fn derived_series(group: &Group) -> Result<Vec<Subgroup>> {
    let mut terms = vec![Subgroup::whole(group)];
    loop {
        let last = terms.last().expect("non-empty");
        let next = commutator_subgroup(group, last, last)?;
        if next.order() == last.order() {
            return Ok(terms);
        }
        terms.push(next);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Nilpotency {
    /// Nilpotent of the given class (0 for the trivial group).
    Class(usize),
    /// The lower central series stabilizes at a nontrivial term of this order.
    NotNilpotent { stable_order: u64 },
}

impl fmt::Display for Nilpotency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nilpotency::Class(c) => write!(f, "class {c}"),
            Nilpotency::NotNilpotent { stable_order } => {
                write!(f, "not nilpotent (series stabilizes at order {stable_order})")
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct LowerCentralSeries {
    pub terms: Vec<Subgroup>,
    pub verdict: Nilpotency,
}

/// `γ₁ = G`, `γᵢ₊₁ = [γᵢ, G]` until the trivial group or stabilization.
pub fn lower_central_series(group: &Group) -> Result<LowerCentralSeries> {
    let whole = Subgroup::whole(group);
    let mut terms = vec![whole.clone()];
    loop {
        let last = terms.last().expect("non-empty");
        if last.is_trivial() {
            let class = terms.len() - 1;
            return Ok(LowerCentralSeries {
                terms,
                verdict: Nilpotency::Class(class),
            });
        }
        let next = commutator_subgroup(group, last, &whole)?;
        if next.order() == last.order() {
            let stable_order = next.order();
            return Ok(LowerCentralSeries {
                terms,
                verdict: Nilpotency::NotNilpotent { stable_order },
            });
        }
        terms.push(next);
    }
}

/// Elements commuting with every generator.
pub fn center(group: &Group) -> Result<Subgroup> {
    let gens = group.generator_payloads();
    let elems: Vec<Payload> = group
        .payloads()?
        .filter(|z| gens.iter().all(|g| group.mul(z, g) == group.mul(g, z)))
        .collect();
    Subgroup::from_sorted(group, elems)
}

/// `G/N` with canonical-least coset representatives, plus the projection.
pub fn quotient(group: &Group, normal: &Subgroup) -> Result<(Group, Homomorphism)> {
    if !normal.parent.same_as(group) {
        return Err(Error::MixedOwner);
    }
    if !normal.is_normal() {
        return Err(Error::NotNormal);
    }
    let q = Group::quotient_group(group, normal.payloads()?)?;
    let proj = Homomorphism::from_fn(group, &q, |g| q.coset_rep(g).expect("quotient shape"))?;
    Ok((q, proj))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PrimarySummand {
    pub prime: u64,
    pub exponent: u32,
    pub multiplicity: u64,
}

/// Multiset of cyclic prime-power summands `C_{p^k}` of a finite abelian group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimaryDecomposition {
    pub summands: Vec<PrimarySummand>,
}

impl PrimaryDecomposition {
    /// `Π p^(k·multiplicity)`.
    pub fn order(&self) -> u64 {
        self.summands
            .iter()
            .map(|s| s.prime.pow(s.exponent).pow(s.multiplicity as u32))
            .product()
    }
}

impl fmt::Display for PrimaryDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .summands
            .iter()
            .map(|s| format!("C{}^{}", s.prime.pow(s.exponent), s.multiplicity))
            .collect();
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// `N_j = #{x : x^(p^j) = 1}` for `j = 0, 1, …` until it reaches the order of
/// the `p`-primary component.
pub fn order_statistics(group: &Group, prime: u64) -> Result<Vec<u64>> {
    let n = group.order_within_budget("order statistics")?;
    let mut p_part = 1;
    let mut m = n;
    while m % prime == 0 {
        m /= prime;
        p_part *= prime;
    }
    // For each element record j = log_p(order) when the order is a power of p.
    let mut hist: Vec<u64> = Vec::new();
    for x in group.payloads()? {
        let mut o = group.order_of(&x);
        let mut j = 0;
        while o.is_multiple_of(prime) {
            o /= prime;
            j += 1;
        }
        if o == 1 {
            if hist.len() <= j {
                hist.resize(j + 1, 0);
            }
            hist[j] += 1;
        }
    }
    let mut stats = Vec::new();
    let mut acc = 0;
    for h in hist {
        acc += h;
        stats.push(acc);
    }
    debug_assert_eq!(*stats.last().unwrap_or(&1), p_part);
    Ok(stats)
}

pub fn primary_decomposition(group: &Group) -> Result<PrimaryDecomposition> {
    if !group.is_abelian() {
        return Err(Error::NotAbelian);
    }
    let n = group.order_within_budget("primary decomposition")?;
    let mut summands = Vec::new();
    for p in prime_factors(n) {
        let stats = order_statistics(group, p)?;
        let log = |x: u64| -> i64 {
            let mut x = x;
            let mut e = 0;
            while x > 1 {
                x /= p;
                e += 1;
            }
            e
        };
        // d_j = log_p N_j − log_p N_{j−1}; multiplicity of C_{p^k} is d_k − d_{k+1}.
        let d: Vec<i64> = (0..=stats.len())
            .map(|j| {
                if j == 0 || j >= stats.len() {
                    0
                } else {
                    log(stats[j]) - log(stats[j - 1])
                }
            })
            .collect();
        for k in 1..stats.len() {
            let mult = d[k] - d[k + 1];
            if mult > 0 {
                summands.push(PrimarySummand {
                    prime: p,
                    exponent: k as u32,
                    multiplicity: mult as u64,
                });
            }
        }
    }
    Ok(PrimaryDecomposition { summands })
}
