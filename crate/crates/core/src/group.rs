//! Concrete finite groups with exact payload arithmetic.
//!
//! Every element is a fixed-width sequence of `u32` (its payload). The
//! identity of every group is the all-zero payload, and the canonical element
//! order is lexicographic order on payloads; [`Group::unrank`] walks that
//! order, so enumeration never needs to sort.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;

use crate::budget::Budget;
use crate::error::{Error, Result};

/// Canonical encoding of a group element.
pub type Payload = Box<[u32]>;

/// Top-group multiplication tables are precomputed up to this many entries.
const TABLE_LIMIT: u64 = 1 << 22;

/// Construction recipe accepted by [`build_group`].
#[derive(Clone, Debug)]
pub enum Recipe {
    Cyclic(u32),
    DirectProduct(Vec<Group>),
    /// `k`-th direct power of a group.
    Power(Group, usize),
    /// Standard wreath product `A Wr B` with base `A^B`.
    Wreath(Group, Group),
    /// Split extension of `base` by `top`; `action[j]` is the automorphism of
    /// `base` assigned to the `j`-th generator of `top`.
    Semidirect {
        base: Group,
        top: Group,
        action: Vec<AutomorphismTable>,
    },
    /// Triples over `Z/p` modelling the free group of rank 2 in the variety of
    /// class-2 nilpotent groups of exponent `p`.
    Heisenberg(u32),
}

/// Images of the generators of a group under a prospective automorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomorphismTable {
    pub images: Vec<GroupElement>,
}

impl AutomorphismTable {
    pub fn new(images: Vec<GroupElement>) -> Self {
        AutomorphismTable { images }
    }
}

#[derive(Clone)]
enum Shape {
    Cyclic(u32),
    Product {
        factors: Vec<Group>,
        offsets: Vec<usize>,
    },
    Power {
        factor: Group,
        count: usize,
    },
    Wreath {
        base: Group,
        top: Group,
        top_order: u64,
        /// `table[x * |B| + b]` is the rank of `x·b`.
        table: Option<Vec<u32>>,
    },
    Semidirect {
        base: Group,
        top: Group,
        action: Vec<AutomorphismTable>,
        top_order: u64,
        /// `perms[q][rank(a)]` is the rank of `α(q)(a)`.
        perms: Vec<Vec<u32>>,
        table: Option<Vec<u32>>,
    },
    Heisenberg(u32),
    Quotient {
        parent: Group,
        kernel: Vec<Payload>,
        reps: Vec<Payload>,
        /// Parent rank to index in `reps`.
        coset: Vec<u32>,
    },
    Carrier {
        parent: Group,
        elements: Vec<Payload>,
    },
}

#[derive(Clone)]
struct GroupInner {
    shape: Shape,
    order: BigUint,
    order_small: Option<u64>,
    width: usize,
    generators: Vec<Payload>,
    budget: Budget,
    label: Option<String>,
}

/// Handle to an immutable finite group. Cloning is cheap.
#[derive(Clone)]
pub struct Group(Arc<GroupInner>);

/// An element together with the group it belongs to.
#[derive(Clone)]
pub struct GroupElement {
    group: Group,
    payload: Payload,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn checked_prime(n: u64) -> bool {
    is_prime(n)
}

/// Builds a group from a recipe, refusing groups with more than
/// `budget.limit()` elements.
pub fn build_group(recipe: Recipe, budget: &Budget) -> Result<Group> {
    let group = construct(recipe, budget)?;
    budget.charge_big("group order", &group.0.order)?;
    Ok(group)
}

fn construct(recipe: Recipe, budget: &Budget) -> Result<Group> {
    match recipe {
        Recipe::Cyclic(n) => {
            if n == 0 {
                return Err(Error::InvalidParameter("cyclic order must be >= 1".into()));
            }
            let gens = vec![vec![1 % n].into_boxed_slice()];
            Ok(Group::assemble(Shape::Cyclic(n), BigUint::from(n), 1, gens, budget))
        }
        Recipe::Heisenberg(p) => {
            if p % 2 == 0 || !is_prime(p as u64) {
                return Err(Error::InvalidParameter(format!(
                    "Heisenberg parameter must be an odd prime, got {p}"
                )));
            }
            let gens = vec![vec![1, 0, 0].into_boxed_slice(), vec![0, 1, 0].into_boxed_slice()];
            let order = BigUint::from(p).pow(3);
            let g = Group::assemble(Shape::Heisenberg(p), order, 3, gens, budget);
            g.check_heisenberg_relations()?;
            Ok(g)
        }
        Recipe::DirectProduct(factors) => {
            if factors.is_empty() {
                return Err(Error::InvalidParameter(
                    "direct product needs at least one factor".into(),
                ));
            }
            let mut offsets = Vec::with_capacity(factors.len() + 1);
            let mut width = 0;
            let mut order = BigUint::from(1u32);
            for f in &factors {
                offsets.push(width);
                width += f.width();
                order *= f.order();
            }
            offsets.push(width);
            let mut gens = Vec::new();
            for (i, f) in factors.iter().enumerate() {
                for g in f.generator_payloads() {
                    let mut p = vec![0u32; width];
                    p[offsets[i]..offsets[i + 1]].copy_from_slice(g);
                    gens.push(p.into_boxed_slice());
                }
            }
            Ok(Group::assemble(
                Shape::Product { factors, offsets },
                order,
                width,
                gens,
                budget,
            ))
        }
        Recipe::Power(factor, count) => {
            if count == 0 {
                return Err(Error::InvalidParameter("power exponent must be >= 1".into()));
            }
            Ok(Group::power_unbounded(&factor, count, budget))
        }
        Recipe::Wreath(base, top) => {
            let top_order = top
                .order_u64()
                .filter(|&n| n <= budget.limit())
                .ok_or_else(|| Error::budget("wreath top group", top.order(), budget.limit()))?;
            budget.charge("wreath top group", top_order)?;
            if base.order_u64() != Some(1) && top_order >= 64 {
                return Err(Error::budget(
                    "wreath product order",
                    format!("{}^{top_order}", base.order()),
                    budget.limit(),
                ));
            }
            let order = base.order().pow(top_order as u32) * top_order;
            budget.charge_big("wreath product order", &order)?;
            let table = if top_order * top_order <= TABLE_LIMIT {
                let elems: Vec<Payload> = (0..top_order).map(|i| top.unrank(i)).collect();
                let mut t = Vec::with_capacity((top_order * top_order) as usize);
                for x in &elems {
                    for b in &elems {
                        t.push(top.rank(&top.mul(x, b)) as u32);
                    }
                }
                Some(t)
            } else {
                None
            };
            let aw = base.width();
            let nb = top_order as usize;
            let width = aw * nb + 1;
            let mut gens = Vec::new();
            for g in base.generator_payloads() {
                let mut p = vec![0u32; width];
                p[..aw].copy_from_slice(g);
                gens.push(p.into_boxed_slice());
            }
            for g in top.generator_payloads() {
                let mut p = vec![0u32; width];
                p[width - 1] = top.rank(g) as u32;
                gens.push(p.into_boxed_slice());
            }
            let shape = Shape::Wreath {
                base,
                top,
                top_order,
                table,
            };
            Ok(Group::assemble(shape, order, width, gens, budget))
        }
        Recipe::Semidirect { base, top, action } => construct_semidirect(base, top, action, budget),
    }
}

fn construct_semidirect(base: Group, top: Group, action: Vec<AutomorphismTable>, budget: &Budget) -> Result<Group> {
    if action.len() != top.generator_payloads().len() {
        return Err(Error::InvalidParameter(format!(
            "action lists {} automorphisms but the operator group has {} generators",
            action.len(),
            top.generator_payloads().len()
        )));
    }
    let na = base
        .order_u64()
        .ok_or_else(|| Error::budget("semidirect base", base.order(), budget.limit()))?;
    let nq = top
        .order_u64()
        .ok_or_else(|| Error::budget("semidirect top", top.order(), budget.limit()))?;
    budget.charge("semidirect base", na)?;
    budget.charge("semidirect top", nq)?;
    budget.charge_big("semidirect order", &(BigUint::from(na) * nq))?;
    let gen_perms = action
        .iter()
        .map(|t| extend_automorphism(&base, t))
        .collect::<Result<Vec<_>>>()?;

    // Propagate α(q·s) = α(q)∘α(s) over the Cayley graph of the top group,
    // checking every edge so that α is a homomorphism.
    let top_gen_ranks: Vec<u64> = top.generator_payloads().iter().map(|g| top.rank(g)).collect();
    let mut perms: Vec<Option<Vec<u32>>> = vec![None; nq as usize];
    perms[0] = Some((0..na as u32).collect());
    let mut queue = vec![0u64];
    let mut head = 0;
    while head < queue.len() {
        let q = queue[head];
        head += 1;
        let qp = top.unrank(q);
        for (j, &s) in top_gen_ranks.iter().enumerate() {
            let y = top.rank(&top.mul(&qp, &top.unrank(s)));
            let cur = perms[q as usize].as_ref().expect("visited");
            let composed: Vec<u32> = gen_perms[j].iter().map(|&x| cur[x as usize]).collect();
            match &perms[y as usize] {
                Some(existing) if *existing != composed => {
                    return Err(Error::ActionNotHomomorphism(format!(
                        "two words for top element #{y} induce different automorphisms"
                    )));
                }
                Some(_) => {}
                None => {
                    perms[y as usize] = Some(composed);
                    queue.push(y);
                }
            }
        }
    }
    let perms: Vec<Vec<u32>> = perms
        .into_iter()
        .map(|p| p.ok_or_else(|| Error::InvalidParameter("top generators do not generate".into())))
        .collect::<Result<_>>()?;
    let table = if nq * nq <= TABLE_LIMIT {
        let mut t = Vec::with_capacity((nq * nq) as usize);
        for x in 0..nq {
            let xp = top.unrank(x);
            for y in 0..nq {
                t.push(top.rank(&top.mul(&xp, &top.unrank(y))) as u32);
            }
        }
        Some(t)
    } else {
        None
    };
    let aw = base.width();
    let width = aw + 1;
    let mut gens = Vec::new();
    for g in base.generator_payloads() {
        let mut p = vec![0u32; width];
        p[..aw].copy_from_slice(g);
        gens.push(p.into_boxed_slice());
    }
    for &r in &top_gen_ranks {
        let mut p = vec![0u32; width];
        p[aw] = r as u32;
        gens.push(p.into_boxed_slice());
    }
    let order = BigUint::from(na) * nq;
    let shape = Shape::Semidirect {
        base,
        top,
        action,
        top_order: nq,
        perms,
        table,
    };
    Ok(Group::assemble(shape, order, width, gens, budget))
}

/// Extends generator images to a permutation of the group's element ranks,
/// checking that the extension is a well-defined bijective endomorphism.
fn extend_automorphism(group: &Group, table: &AutomorphismTable) -> Result<Vec<u32>> {
    let gens = group.generator_payloads();
    if table.images.len() != gens.len() {
        return Err(Error::NotAnAutomorphism(format!(
            "{} images supplied for {} generators",
            table.images.len(),
            gens.len()
        )));
    }
    for img in &table.images {
        if !img.group().same_as(group) {
            return Err(Error::MixedOwner);
        }
    }
    let n = group.order_u64().expect("checked by caller") as usize;
    let mut img: Vec<Option<Payload>> = vec![None; n];
    img[0] = Some(group.identity_payload());
    let mut queue = vec![0u64];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        let xp = group.unrank(x);
        let ix = img[x as usize].clone().expect("visited");
        for (s, t) in gens.iter().zip(&table.images) {
            let y = group.rank(&group.mul(&xp, s)) as usize;
            let iy = group.mul(&ix, t.payload());
            match &img[y] {
                Some(existing) if *existing != iy => {
                    return Err(Error::NotAnAutomorphism(
                        "generator images violate a relation of the group".into(),
                    ));
                }
                Some(_) => {}
                None => {
                    img[y] = Some(iy);
                    queue.push(y as u64);
                }
            }
        }
    }
    let mut seen = vec![false; n];
    let mut perm = Vec::with_capacity(n);
    for p in img {
        let p = p.ok_or_else(|| Error::InvalidParameter("generators do not generate".into()))?;
        let r = group.rank(&p) as usize;
        if seen[r] {
            return Err(Error::NotAnAutomorphism("induced map is not injective".into()));
        }
        seen[r] = true;
        perm.push(r as u32);
    }
    Ok(perm)
}

impl Group {
    fn assemble(shape: Shape, order: BigUint, width: usize, generators: Vec<Payload>, budget: &Budget) -> Group {
        let order_small = u64::try_from(&order).ok();
        Group(Arc::new(GroupInner {
            shape,
            order,
            order_small,
            width,
            generators,
            budget: budget.clone(),
            label: None,
        }))
    }

    pub fn cyclic(n: u32) -> Result<Group> {
        build_group(Recipe::Cyclic(n), &Budget::default())
    }

    pub fn heisenberg(p: u32) -> Result<Group> {
        build_group(Recipe::Heisenberg(p), &Budget::default())
    }

    pub fn direct_product(factors: Vec<Group>) -> Result<Group> {
        let budget = factors.first().map(|f| f.budget().clone()).unwrap_or_default();
        build_group(Recipe::DirectProduct(factors), &budget)
    }

    pub fn power(factor: &Group, count: usize) -> Result<Group> {
        build_group(Recipe::Power(factor.clone(), count), factor.budget())
    }

    pub fn wreath(base: &Group, top: &Group) -> Result<Group> {
        build_group(Recipe::Wreath(base.clone(), top.clone()), base.budget())
    }

    pub fn semidirect(base: &Group, top: &Group, action: Vec<AutomorphismTable>) -> Result<Group> {
        build_group(
            Recipe::Semidirect {
                base: base.clone(),
                top: top.clone(),
                action,
            },
            base.budget(),
        )
    }

    /// Direct power without the order cap; used for ambient groups that are
    /// never enumerated (relatively free groups live inside them).
    pub(crate) fn power_unbounded(factor: &Group, count: usize, budget: &Budget) -> Group {
        let fw = factor.width();
        let width = fw * count;
        let mut gens = Vec::new();
        for i in 0..count {
            for g in factor.generator_payloads() {
                let mut p = vec![0u32; width];
                p[i * fw..(i + 1) * fw].copy_from_slice(g);
                gens.push(p.into_boxed_slice());
            }
        }
        let order = factor.order().pow(count as u32);
        Group::assemble(
            Shape::Power {
                factor: factor.clone(),
                count,
            },
            order,
            width,
            gens,
            budget,
        )
    }

    pub(crate) fn product_unbounded(factors: Vec<Group>, budget: &Budget) -> Group {
        construct(Recipe::DirectProduct(factors), budget).expect("non-empty product")
    }

    /// Quotient by a normal subgroup given as its sorted element list.
    /// Normality is the caller's responsibility.
    pub(crate) fn quotient_group(parent: &Group, kernel: Vec<Payload>) -> Result<Group> {
        let budget = parent.budget().clone();
        let n = parent
            .order_u64()
            .ok_or_else(|| Error::budget("quotient parent", parent.order(), budget.limit()))?;
        budget.charge("quotient parent enumeration", n)?;
        let index = n / kernel.len() as u64;
        budget.charge("quotient order", index)?;
        // Scanning in canonical order meets each coset first at its least element.
        let mut coset = vec![u32::MAX; n as usize];
        let mut reps: Vec<Payload> = Vec::with_capacity(index as usize);
        for i in 0..n {
            if coset[i as usize] != u32::MAX {
                continue;
            }
            let g = parent.unrank(i);
            for k in &kernel {
                coset[parent.rank(&parent.mul(&g, k)) as usize] = reps.len() as u32;
            }
            reps.push(g);
        }
        let gens = parent
            .generator_payloads()
            .iter()
            .map(|g| reps[coset[parent.rank(g) as usize] as usize].clone())
            .collect();
        let width = parent.width();
        Ok(Group::assemble(
            Shape::Quotient {
                parent: parent.clone(),
                kernel,
                reps,
                coset,
            },
            BigUint::from(index),
            width,
            gens,
            &budget,
        ))
    }

    /// Least representative of the coset of a parent payload, for quotient groups.
    pub(crate) fn coset_rep(&self, g: &[u32]) -> Option<Payload> {
        match &self.0.shape {
            Shape::Quotient {
                parent, reps, coset, ..
            } => Some(reps[coset[parent.rank(g) as usize] as usize].clone()),
            _ => None,
        }
    }

    /// Standalone group on a subgroup's carrier (sorted elements) with the
    /// parent's arithmetic.
    pub(crate) fn carrier_group(parent: &Group, elements: Vec<Payload>, generators: Vec<Payload>) -> Group {
        let order = BigUint::from(elements.len());
        let width = parent.width();
        Group::assemble(
            Shape::Carrier {
                parent: parent.clone(),
                elements,
            },
            order,
            width,
            generators,
            parent.budget(),
        )
    }

    /// Returns a copy of this group that displays as `label`.
    pub fn labeled(&self, label: impl Into<String>) -> Group {
        let mut inner = (*self.0).clone();
        inner.label = Some(label.into());
        Group(Arc::new(inner))
    }

    pub fn order(&self) -> &BigUint {
        &self.0.order
    }

    /// Order as `u64` when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.0.order_small
    }

    /// Order, provided it is within the materialization budget.
    pub fn order_within_budget(&self, what: &str) -> Result<u64> {
        self.budget().charge_big(what, self.order())
    }

    pub fn width(&self) -> usize {
        self.0.width
    }

    pub fn budget(&self) -> &Budget {
        &self.0.budget
    }

    pub fn generator_payloads(&self) -> &[Payload] {
        &self.0.generators
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        self.0.generators.iter().map(|p| self.wrap(p.clone())).collect()
    }

    pub fn identity_payload(&self) -> Payload {
        vec![0u32; self.width()].into_boxed_slice()
    }

    pub fn identity(&self) -> GroupElement {
        self.wrap(self.identity_payload())
    }

    pub fn is_identity(a: &[u32]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    /// True when both handles denote the same group (same recipe and data).
    pub fn same_as(&self, other: &Group) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        match (&self.0.shape, &other.0.shape) {
            (Shape::Cyclic(a), Shape::Cyclic(b)) => a == b,
            (Shape::Heisenberg(a), Shape::Heisenberg(b)) => a == b,
            (Shape::Product { factors: a, .. }, Shape::Product { factors: b, .. }) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.same_as(y))
            }
            (Shape::Power { factor: a, count: m }, Shape::Power { factor: b, count: n }) => m == n && a.same_as(b),
            (Shape::Wreath { base: a, top: b, .. }, Shape::Wreath { base: c, top: d, .. }) => {
                a.same_as(c) && b.same_as(d)
            }
            (
                Shape::Semidirect {
                    base: a,
                    top: b,
                    action: x,
                    ..
                },
                Shape::Semidirect {
                    base: c,
                    top: d,
                    action: y,
                    ..
                },
            ) => a.same_as(c) && b.same_as(d) && x == y,
            (
                Shape::Quotient {
                    parent: a, kernel: x, ..
                },
                Shape::Quotient {
                    parent: b, kernel: y, ..
                },
            ) => x == y && a.same_as(b),
            (Shape::Carrier { parent: a, elements: x }, Shape::Carrier { parent: b, elements: y }) => {
                x == y && a.same_as(b)
            }
            _ => false,
        }
    }

    /// Factors `(A, B)` when this is a wreath product `A Wr B`.
    pub fn wreath_factors(&self) -> Option<(&Group, &Group)> {
        match &self.0.shape {
            Shape::Wreath { base, top, .. } => Some((base, top)),
            _ => None,
        }
    }

    /// Factors `(A, Q)` when this is a split extension of `A` by `Q`.
    pub fn semidirect_factors(&self) -> Option<(&Group, &Group)> {
        match &self.0.shape {
            Shape::Semidirect { base, top, .. } => Some((base, top)),
            _ => None,
        }
    }

    /// The factor list of a direct product or power.
    pub fn product_factors(&self) -> Option<Vec<Group>> {
        match &self.0.shape {
            Shape::Product { factors, .. } => Some(factors.clone()),
            Shape::Power { factor, count } => Some(vec![factor.clone(); *count]),
            _ => None,
        }
    }

    /// Generators of the "base" part of an extension-shaped group: the
    /// wreath base, the acted-upon group of a split extension, or the first
    /// factor of a direct product.
    pub fn base_generator_payloads(&self) -> Option<Vec<Payload>> {
        let (count, gens) = match &self.0.shape {
            Shape::Wreath { base, .. } | Shape::Semidirect { base, .. } => {
                (base.generator_payloads().len(), &self.0.generators)
            }
            Shape::Product { factors, .. } => (factors[0].generator_payloads().len(), &self.0.generators),
            Shape::Power { factor, .. } => (factor.generator_payloads().len(), &self.0.generators),
            _ => return None,
        };
        Some(gens[..count].to_vec())
    }

    pub fn is_semidirect(&self) -> bool {
        matches!(self.0.shape, Shape::Semidirect { .. })
    }

    pub(crate) fn wrap(&self, payload: Payload) -> GroupElement {
        debug_assert_eq!(payload.len(), self.width());
        GroupElement {
            group: self.clone(),
            payload,
        }
    }

    /// Wraps a payload after checking it encodes an element of this group.
    pub fn element(&self, payload: &[u32]) -> Result<GroupElement> {
        if payload.len() != self.width() || !self.is_valid(payload) {
            return Err(Error::InvalidParameter(format!(
                "payload {payload:?} does not encode an element of {self}"
            )));
        }
        Ok(self.wrap(payload.into()))
    }

    fn is_valid(&self, a: &[u32]) -> bool {
        match &self.0.shape {
            Shape::Cyclic(n) => a[0] < *n,
            Shape::Heisenberg(p) => a.iter().all(|x| x < p),
            Shape::Product { factors, offsets } => factors
                .iter()
                .enumerate()
                .all(|(i, f)| f.is_valid(&a[offsets[i]..offsets[i + 1]])),
            Shape::Power { factor, .. } => a.chunks(factor.width()).all(|c| factor.is_valid(c)),
            Shape::Wreath { base, top_order, .. } => {
                let (f, t) = a.split_at(a.len() - 1);
                (t[0] as u64) < *top_order && f.chunks(base.width()).all(|c| base.is_valid(c))
            }
            Shape::Semidirect { base, top_order, .. } => {
                let (f, t) = a.split_at(a.len() - 1);
                (t[0] as u64) < *top_order && base.is_valid(f)
            }
            Shape::Quotient { reps, .. } => reps.binary_search_by(|r| (**r).cmp(a)).is_ok(),
            Shape::Carrier { elements, .. } => elements.binary_search_by(|r| (**r).cmp(a)).is_ok(),
        }
    }

    /// Writes `a·b` into `out`.
    pub fn mul_into(&self, a: &[u32], b: &[u32], out: &mut [u32]) {
        match &self.0.shape {
            Shape::Cyclic(n) => out[0] = ((a[0] as u64 + b[0] as u64) % *n as u64) as u32,
            Shape::Heisenberg(p) => {
                let p = *p as u64;
                let (a0, a1, a2) = (a[0] as u64, a[1] as u64, a[2] as u64);
                let (b0, b1, b2) = (b[0] as u64, b[1] as u64, b[2] as u64);
                out[0] = ((a0 + b0) % p) as u32;
                out[1] = ((a1 + b1) % p) as u32;
                out[2] = ((a2 + b2 + a0 * b1) % p) as u32;
            }
            Shape::Product { factors, offsets } => {
                for (i, f) in factors.iter().enumerate() {
                    let r = offsets[i]..offsets[i + 1];
                    f.mul_into(&a[r.clone()], &b[r.clone()], &mut out[r]);
                }
            }
            Shape::Power { factor, .. } => {
                let w = factor.width();
                for ((x, y), o) in a.chunks(w).zip(b.chunks(w)).zip(out.chunks_mut(w)) {
                    factor.mul_into(x, y, o);
                }
            }
            Shape::Wreath {
                base,
                top,
                top_order,
                table,
            } => {
                // (f1, b1)(f2, b2) = (x ↦ f1(x)·f2(x·b1), b1·b2)
                let w = base.width();
                let nb = *top_order as usize;
                let b1 = a[nb * w] as usize;
                let b2 = b[nb * w] as usize;
                let shift = |x: usize| -> usize {
                    match table {
                        Some(t) => t[x * nb + b1] as usize,
                        None => top.rank(&top.mul(&top.unrank(x as u64), &top.unrank(b1 as u64))) as usize,
                    }
                };
                for x in 0..nb {
                    let xb = shift(x);
                    base.mul_into(
                        &a[x * w..(x + 1) * w],
                        &b[xb * w..(xb + 1) * w],
                        &mut out[x * w..(x + 1) * w],
                    );
                }
                out[nb * w] = match table {
                    Some(t) => t[b1 * nb + b2],
                    None => top.rank(&top.mul(&top.unrank(b1 as u64), &top.unrank(b2 as u64))) as u32,
                };
            }
            Shape::Semidirect {
                base,
                top,
                top_order,
                perms,
                table,
                ..
            } => {
                // (a1, q1)(a2, q2) = (a1·α(q1)(a2), q1·q2)
                let w = base.width();
                let q1 = a[w] as usize;
                let q2 = b[w] as usize;
                let moved = base.unrank(perms[q1][base.rank(&b[..w]) as usize] as u64);
                base.mul_into(&a[..w], &moved, &mut out[..w]);
                out[w] = match table {
                    Some(t) => t[q1 * *top_order as usize + q2],
                    None => top.rank(&top.mul(&top.unrank(q1 as u64), &top.unrank(q2 as u64))) as u32,
                };
            }
            Shape::Quotient {
                parent, reps, coset, ..
            } => {
                let prod = parent.mul(a, b);
                out.copy_from_slice(&reps[coset[parent.rank(&prod) as usize] as usize]);
            }
            Shape::Carrier { parent, .. } => parent.mul_into(a, b, out),
        }
    }

    /// Writes `a⁻¹` into `out`.
    pub fn inv_into(&self, a: &[u32], out: &mut [u32]) {
        match &self.0.shape {
            Shape::Cyclic(n) => out[0] = (*n - a[0]) % *n,
            Shape::Heisenberg(p) => {
                let p64 = *p as u64;
                let (a0, a1, a2) = (a[0] as u64, a[1] as u64, a[2] as u64);
                out[0] = ((p64 - a0) % p64) as u32;
                out[1] = ((p64 - a1) % p64) as u32;
                out[2] = ((a0 * a1 + p64 - a2) % p64) as u32;
            }
            Shape::Product { factors, offsets } => {
                for (i, f) in factors.iter().enumerate() {
                    let r = offsets[i]..offsets[i + 1];
                    f.inv_into(&a[r.clone()], &mut out[r]);
                }
            }
            Shape::Power { factor, .. } => {
                let w = factor.width();
                for (x, o) in a.chunks(w).zip(out.chunks_mut(w)) {
                    factor.inv_into(x, o);
                }
            }
            Shape::Wreath {
                base,
                top,
                top_order,
                table,
            } => {
                // (f, b)⁻¹ = (y ↦ f(y·b⁻¹)⁻¹, b⁻¹)
                let w = base.width();
                let nb = *top_order as usize;
                let bp = top.unrank(a[nb * w] as u64);
                let binv = top.rank(&top.inv(&bp)) as usize;
                for y in 0..nb {
                    let src = match table {
                        Some(t) => t[y * nb + binv] as usize,
                        None => top.rank(&top.mul(&top.unrank(y as u64), &top.unrank(binv as u64))) as usize,
                    };
                    base.inv_into(&a[src * w..(src + 1) * w], &mut out[y * w..(y + 1) * w]);
                }
                out[nb * w] = binv as u32;
            }
            Shape::Semidirect { base, top, perms, .. } => {
                // (a, q)⁻¹ = (α(q⁻¹)(a⁻¹), q⁻¹)
                let w = base.width();
                let qinv = top.rank(&top.inv(&top.unrank(a[w] as u64))) as usize;
                let ainv = base.inv(&a[..w]);
                let moved = base.unrank(perms[qinv][base.rank(&ainv) as usize] as u64);
                out[..w].copy_from_slice(&moved);
                out[w] = qinv as u32;
            }
            Shape::Quotient {
                parent, reps, coset, ..
            } => {
                let inv = parent.inv(a);
                out.copy_from_slice(&reps[coset[parent.rank(&inv) as usize] as usize]);
            }
            Shape::Carrier { parent, .. } => parent.inv_into(a, out),
        }
    }

    pub fn mul(&self, a: &[u32], b: &[u32]) -> Payload {
        let mut out = vec![0u32; self.width()].into_boxed_slice();
        self.mul_into(a, b, &mut out);
        out
    }

    pub fn inv(&self, a: &[u32]) -> Payload {
        let mut out = vec![0u32; self.width()].into_boxed_slice();
        self.inv_into(a, &mut out);
        out
    }

    /// `a^k` for any integer `k`.
    pub fn pow(&self, a: &[u32], k: i64) -> Payload {
        let base = if k < 0 { self.inv(a) } else { a.into() };
        let mut e = k.unsigned_abs();
        let mut acc = self.identity_payload();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }

    /// `[a, b] = a⁻¹b⁻¹ab`.
    pub fn commutator(&self, a: &[u32], b: &[u32]) -> Payload {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(&self.inv(&ba), &ab)
    }

    /// `g⁻¹·a·g`.
    pub fn conjugate(&self, a: &[u32], g: &[u32]) -> Payload {
        self.mul(&self.mul(&self.inv(g), a), g)
    }

    /// Least `k ≥ 1` with `a^k = 1`.
    pub fn order_of(&self, a: &[u32]) -> u64 {
        let mut k = 1;
        let mut x: Payload = a.into();
        while !Group::is_identity(&x) {
            x = self.mul(&x, a);
            k += 1;
        }
        k
    }

    /// Position of `a` in the canonical (lexicographic) order.
    /// Requires the group order to fit in `u64`.
    pub fn rank(&self, a: &[u32]) -> u64 {
        match &self.0.shape {
            Shape::Cyclic(_) => a[0] as u64,
            Shape::Heisenberg(p) => {
                let p = *p as u64;
                (a[0] as u64 * p + a[1] as u64) * p + a[2] as u64
            }
            Shape::Product { factors, offsets } => factors.iter().enumerate().fold(0, |acc, (i, f)| {
                acc * f.order_u64().expect("small order") + f.rank(&a[offsets[i]..offsets[i + 1]])
            }),
            Shape::Power { factor, .. } => {
                let n = factor.order_u64().expect("small order");
                a.chunks(factor.width()).fold(0, |acc, c| acc * n + factor.rank(c))
            }
            Shape::Wreath { base, top_order, .. } => {
                let n = base.order_u64().expect("small order");
                let (f, t) = a.split_at(a.len() - 1);
                let r = f.chunks(base.width()).fold(0, |acc, c| acc * n + base.rank(c));
                r * top_order + t[0] as u64
            }
            Shape::Semidirect { base, top_order, .. } => {
                let (f, t) = a.split_at(a.len() - 1);
                base.rank(f) * top_order + t[0] as u64
            }
            Shape::Quotient { reps, .. } => {
                reps.binary_search_by(|r| (**r).cmp(a)).expect("coset representative") as u64
            }
            Shape::Carrier { elements, .. } => {
                elements.binary_search_by(|r| (**r).cmp(a)).expect("carrier element") as u64
            }
        }
    }

    /// Inverse of [`Group::rank`].
    pub fn unrank(&self, index: u64) -> Payload {
        let mut out = vec![0u32; self.width()].into_boxed_slice();
        self.unrank_into(index, &mut out);
        out
    }

    fn unrank_into(&self, mut index: u64, out: &mut [u32]) {
        match &self.0.shape {
            Shape::Cyclic(_) => out[0] = index as u32,
            Shape::Heisenberg(p) => {
                let p = *p as u64;
                out[2] = (index % p) as u32;
                index /= p;
                out[1] = (index % p) as u32;
                out[0] = (index / p) as u32;
            }
            Shape::Product { factors, offsets } => {
                for (i, f) in factors.iter().enumerate().rev() {
                    let n = f.order_u64().expect("small order");
                    f.unrank_into(index % n, &mut out[offsets[i]..offsets[i + 1]]);
                    index /= n;
                }
            }
            Shape::Power { factor, .. } => {
                let n = factor.order_u64().expect("small order");
                for c in out.chunks_mut(factor.width()).rev() {
                    factor.unrank_into(index % n, c);
                    index /= n;
                }
            }
            Shape::Wreath { base, top_order, .. } => {
                let n = base.order_u64().expect("small order");
                let last = out.len() - 1;
                out[last] = (index % top_order) as u32;
                index /= top_order;
                for c in out[..last].chunks_mut(base.width()).rev() {
                    base.unrank_into(index % n, c);
                    index /= n;
                }
            }
            Shape::Semidirect { base, top_order, .. } => {
                let last = out.len() - 1;
                out[last] = (index % top_order) as u32;
                base.unrank_into(index / top_order, &mut out[..last]);
            }
            Shape::Quotient { reps, .. } => out.copy_from_slice(&reps[index as usize]),
            Shape::Carrier { elements, .. } => out.copy_from_slice(&elements[index as usize]),
        }
    }

    /// Lazily walks all payloads in canonical order (charged against the budget).
    pub fn payloads(&self) -> Result<impl Iterator<Item = Payload> + '_> {
        let n = self.order_within_budget("enumeration")?;
        Ok((0..n).map(move |i| self.unrank(i)))
    }

    /// Every element exactly once, in canonical order.
    pub fn enumerate(&self) -> Result<Vec<GroupElement>> {
        Ok(self.payloads()?.map(|p| self.wrap(p)).collect())
    }

    /// Least common multiple of all element orders.
    pub fn exponent(&self) -> Result<u64> {
        let mut e = 1u64;
        for p in self.payloads()? {
            e = e.lcm(&self.order_of(&p));
        }
        Ok(e)
    }

    /// True when every pair of generators commutes.
    pub fn is_abelian(&self) -> bool {
        let gens = self.generator_payloads();
        gens.iter()
            .enumerate()
            .all(|(i, a)| gens[i + 1..].iter().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    fn check_heisenberg_relations(&self) -> Result<()> {
        let Shape::Heisenberg(p) = self.0.shape else {
            unreachable!()
        };
        let x1 = &self.0.generators[0];
        let x2 = &self.0.generators[1];
        let c = self.commutator(x1, x2);
        let relations = [
            self.commutator(&c, x1),
            self.commutator(&c, x2),
            self.pow(x1, p as i64),
            self.pow(x2, p as i64),
        ];
        if relations.iter().all(|r| Group::is_identity(r)) {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "Heisenberg({p}) model violates its defining relations"
            )))
        }
    }

    /// Human-readable rendering of a payload.
    pub fn format_payload(&self, a: &[u32]) -> String {
        match &self.0.shape {
            Shape::Cyclic(_) => a[0].to_string(),
            Shape::Heisenberg(_) => format!("({},{},{})", a[0], a[1], a[2]),
            Shape::Product { factors, offsets } => {
                let parts: Vec<String> = factors
                    .iter()
                    .enumerate()
                    .map(|(i, f)| f.format_payload(&a[offsets[i]..offsets[i + 1]]))
                    .collect();
                format!("({})", parts.join(","))
            }
            Shape::Power { factor, .. } => {
                let parts: Vec<String> = a.chunks(factor.width()).map(|c| factor.format_payload(c)).collect();
                format!("({})", parts.join(","))
            }
            Shape::Wreath { base, top, .. } => {
                let (f, t) = a.split_at(a.len() - 1);
                let parts: Vec<String> = f.chunks(base.width()).map(|c| base.format_payload(c)).collect();
                format!(
                    "(({}),{})",
                    parts.join(","),
                    top.format_payload(&top.unrank(t[0] as u64))
                )
            }
            Shape::Semidirect { base, top, .. } => {
                let (f, t) = a.split_at(a.len() - 1);
                format!(
                    "({},{})",
                    base.format_payload(f),
                    top.format_payload(&top.unrank(t[0] as u64))
                )
            }
            Shape::Quotient { parent, .. } => format!("{}N", parent.format_payload(a)),
            Shape::Carrier { parent, .. } => parent.format_payload(a),
        }
    }
}

impl Group {
    /// Display form, parenthesized when it contains an operator.
    fn operand(&self) -> String {
        let s = self.to_string();
        if s.contains(' ') {
            format!("({s})")
        } else {
            s
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(label) = &self.0.label {
            return f.write_str(label);
        }
        match &self.0.shape {
            Shape::Cyclic(n) => write!(f, "C{n}"),
            Shape::Heisenberg(p) => write!(f, "Heis{p}"),
            Shape::Product { factors, .. } => {
                let parts: Vec<String> = factors.iter().map(Group::operand).collect();
                f.write_str(&parts.join(" x "))
            }
            Shape::Power { factor, count } => write!(f, "{}^{count}", factor.operand()),
            Shape::Wreath { base, top, .. } => write!(f, "{} wr {}", base.operand(), top.operand()),
            Shape::Semidirect { base, top, .. } => write!(f, "{} : {}", base.operand(), top.operand()),
            Shape::Quotient { parent, kernel, .. } => write!(f, "{} / [{}]", parent.operand(), kernel.len()),
            Shape::Carrier { parent, elements } => write!(f, "<{} of {parent}>", elements.len()),
        }
    }
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({self}, order {})", self.order())
    }
}

impl GroupElement {
    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn payload(&self) -> &[u32] {
        &self.payload
    }

    pub fn into_payload(self) -> Payload {
        self.payload
    }

    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        if !self.group.same_as(&other.group) {
            return Err(Error::MixedOwner);
        }
        Ok(self.group.wrap(self.group.mul(&self.payload, &other.payload)))
    }

    pub fn invert(&self) -> GroupElement {
        self.group.wrap(self.group.inv(&self.payload))
    }

    pub fn pow(&self, k: i64) -> GroupElement {
        self.group.wrap(self.group.pow(&self.payload, k))
    }

    pub fn order(&self) -> u64 {
        self.group.order_of(&self.payload)
    }

    pub fn is_identity(&self) -> bool {
        Group::is_identity(&self.payload)
    }
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.payload == other.payload && self.group.same_as(&other.group)
    }
}

impl Eq for GroupElement {}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.group.format_payload(&self.payload))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.group.format_payload(&self.payload))
    }
}
