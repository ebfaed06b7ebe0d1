//! Relatively free groups of `var(G)` realized inside cartesian powers of `G`,
//! and membership of small groups in `var(G)`.

use std::fmt;

use serde::Serialize;

use crate::closure::Closure;
use crate::error::{Error, Result};
use crate::group::{Group, GroupElement, Payload};
use crate::structure::Subgroup;

/// `F_d(var G)` as the subgroup of `G^(G^d)` generated by the coordinate
/// projections `π_i(t) = t_i`, coordinates being `d`-tuples in canonical order.
#[derive(Clone, Debug)]
pub struct RelativelyFreeGroup {
    pub ambient: Group,
    pub free_generators: Vec<GroupElement>,
    pub carrier: Subgroup,
    pub rank: usize,
}

impl RelativelyFreeGroup {
    pub fn order(&self) -> u64 {
        self.carrier.order()
    }

    pub fn as_group(&self) -> Result<Group> {
        self.carrier.as_group()
    }
}

fn coordinate_count(group: &Group, rank: usize) -> Result<u64> {
    let n = group.order_within_budget("relatively free base group")?;
    let coords = (n as u128).checked_pow(rank as u32).unwrap_or(u128::MAX);
    let coords = u64::try_from(coords).unwrap_or(u64::MAX);
    group.budget().charge("relatively free coordinates", coords)?;
    Ok(coords)
}

/// Free generators `π_1..π_d` as payloads of `G^(|G|^d)`.
fn projections(group: &Group, rank: usize, coords: u64) -> Vec<Payload> {
    let n = group.order_u64().expect("checked");
    let w = group.width();
    let elems: Vec<Payload> = (0..n).map(|i| group.unrank(i)).collect();
    (0..rank)
        .map(|i| {
            // In the d-tuple with index c, entry i has rank (c / n^(d-1-i)) mod n.
            let stride = n.pow((rank - 1 - i) as u32);
            let mut p = vec![0u32; w * coords as usize];
            for c in 0..coords {
                let entry = (c / stride) % n;
                p[c as usize * w..(c as usize + 1) * w].copy_from_slice(&elems[entry as usize]);
            }
            p.into_boxed_slice()
        })
        .collect()
}

pub fn relatively_free(group: &Group, rank: usize) -> Result<RelativelyFreeGroup> {
    if rank == 0 {
        return Err(Error::InvalidParameter("rank must be >= 1".into()));
    }
    let coords = coordinate_count(group, rank)?;
    let ambient = Group::power_unbounded(group, coords as usize, group.budget());
    let gens = projections(group, rank, coords);
    let cl = Closure::generate(
        &ambient,
        gens.iter().map(|g| &g[..]),
        group.budget(),
        "relatively free closure",
    )?;
    let carrier = Subgroup::from_closure(&ambient, cl);
    let free_generators = gens.into_iter().map(|g| ambient.wrap(g)).collect();
    Ok(RelativelyFreeGroup {
        ambient,
        free_generators,
        carrier,
        rank,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Member,
    NonMember,
    Inconclusive(String),
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Membership::Member => f.write_str("member"),
            Membership::NonMember => f.write_str("non-member"),
            Membership::Inconclusive(why) => write!(f, "inconclusive ({why})"),
        }
    }
}

/// Decides `H ∈ var(G)`: with `d = |gens|`, `π_i ↦ h_i` extends to a
/// homomorphism `F_d(var G) → H` iff the subgroup `K` of `F_d × H` generated
/// by the pairs `(π_i, h_i)` meets `1 × H` trivially, i.e. `|K| = |F_d|`.
pub fn variety_membership(h: &Group, h_generators: &[GroupElement], g: &Group) -> Result<Membership> {
    if h_generators.iter().any(|x| !x.group().same_as(h)) {
        return Err(Error::MixedOwner);
    }
    if h_generators.is_empty() {
        return Err(Error::InvalidParameter("at least one generator is required".into()));
    }
    let h_order = h.order_within_budget("membership candidate")?;
    let span = Closure::generate(
        h,
        h_generators.iter().map(|x| x.payload()),
        h.budget(),
        "membership candidate",
    )?;
    if span.len() as u64 != h_order {
        return Err(Error::GeneratorsDoNotGenerate {
            generated: span.len() as u64,
            order: h_order,
        });
    }
    let free = match relatively_free(g, h_generators.len()) {
        Ok(f) => f,
        Err(e) if e.is_budget() => return Ok(Membership::Inconclusive(e.to_string())),
        Err(e) => return Err(e),
    };
    let product = Group::product_unbounded(vec![free.ambient.clone(), h.clone()], g.budget());
    let pairs: Vec<Payload> = free
        .free_generators
        .iter()
        .zip(h_generators)
        .map(|(pi, hi)| {
            let mut p = pi.payload().to_vec();
            p.extend_from_slice(hi.payload());
            p.into_boxed_slice()
        })
        .collect();
    match Closure::generate(&product, pairs.iter().map(|p| &p[..]), g.budget(), "membership graph") {
        Ok(k) if k.len() as u64 == free.order() => Ok(Membership::Member),
        Ok(_) => Ok(Membership::NonMember),
        Err(e) if e.is_budget() => Ok(Membership::Inconclusive(e.to_string())),
        Err(e) => Err(e),
    }
}
