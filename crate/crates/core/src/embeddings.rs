//! Homomorphisms between concrete groups and the Kaloujnine–Krasner
//! embedding of an extension into a wreath product.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{build_group, Group, GroupElement, Payload, Recipe};
use crate::structure::{quotient, Subgroup};

/// Domains up to this size are verified on every pair of elements.
pub const EXHAUSTIVE_DOMAIN_LIMIT: u64 = 10_000;
/// Number of random pairs checked for larger domains.
pub const SAMPLED_PAIRS: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub is_hom: bool,
    pub is_injective: bool,
    /// Number of `(g, h)` pairs on which `φ(gh) = φ(g)φ(h)` was checked.
    pub pairs_checked: u64,
    /// False when the pairs were a seeded random sample.
    pub exhaustive: bool,
    /// Number of distinct images.
    pub image_order: u64,
}

/// A map materialized on every element of its domain.
#[derive(Clone)]
pub struct Homomorphism {
    domain: Group,
    codomain: Group,
    /// Images indexed by the canonical rank of the domain element.
    images: Vec<Payload>,
    verification: Option<Verification>,
}

impl Homomorphism {
    pub fn from_fn<F>(domain: &Group, codomain: &Group, f: F) -> Result<Homomorphism>
    where
        F: Fn(&[u32]) -> Payload,
    {
        let images: Vec<Payload> = domain.payloads()?.map(|g| f(&g)).collect();
        if let Some(bad) = images.iter().find(|p| codomain.element(p).is_err()) {
            return Err(Error::InvalidParameter(format!(
                "image {bad:?} is not an element of {codomain}"
            )));
        }
        Ok(Homomorphism {
            domain: domain.clone(),
            codomain: codomain.clone(),
            images,
            verification: None,
        })
    }

    pub fn identity(group: &Group) -> Result<Homomorphism> {
        Homomorphism::from_fn(group, group, |g| g.into())
    }

    /// The map sending everything to the identity of `codomain`.
    pub fn trivial(domain: &Group, codomain: &Group) -> Result<Homomorphism> {
        Homomorphism::from_fn(domain, codomain, |_| codomain.identity_payload())
    }

    pub fn domain(&self) -> &Group {
        &self.domain
    }

    pub fn codomain(&self) -> &Group {
        &self.codomain
    }

    pub fn verification(&self) -> Option<&Verification> {
        self.verification.as_ref()
    }

    pub fn image_payload(&self, g: &[u32]) -> &[u32] {
        &self.images[self.domain.rank(g) as usize]
    }

    pub fn apply(&self, g: &GroupElement) -> Result<GroupElement> {
        if !g.group().same_as(&self.domain) {
            return Err(Error::MixedOwner);
        }
        Ok(self.codomain.wrap(self.image_payload(g.payload()).into()))
    }

    pub fn image_order(&self) -> u64 {
        self.images.iter().collect::<HashSet<_>>().len() as u64
    }

    /// Checks the homomorphism property and kernel triviality, recording
    /// the outcome on `self`.
    pub fn verify(&mut self, seed: u64) -> &Verification {
        let report = verify_embedding(self, seed);
        self.verification = Some(report);
        self.verification.as_ref().expect("just set")
    }
}

/// Checks `φ(gh) = φ(g)φ(h)` over all pairs (or a seeded sample above
/// [`EXHAUSTIVE_DOMAIN_LIMIT`] elements) and that distinct elements have
/// distinct images.
pub fn verify_embedding(phi: &Homomorphism, seed: u64) -> Verification {
    let d = &phi.domain;
    let c = &phi.codomain;
    let n = phi.images.len() as u64;
    let holds = |i: u64, j: u64| -> bool {
        let gi = d.unrank(i);
        let gj = d.unrank(j);
        let prod = d.rank(&d.mul(&gi, &gj)) as usize;
        phi.images[prod] == c.mul(&phi.images[i as usize], &phi.images[j as usize])
    };
    let (is_hom, pairs_checked, exhaustive) = if n <= EXHAUSTIVE_DOMAIN_LIMIT {
        let ok = (0..n).all(|i| (0..n).all(|j| holds(i, j)));
        (ok, n * n, true)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ok = (0..SAMPLED_PAIRS).all(|_| holds(rng.gen_range(0..n), rng.gen_range(0..n)));
        (ok, SAMPLED_PAIRS, false)
    };
    // Distinct images; for a homomorphism this is kernel triviality.
    let image_order = phi.image_order();
    Verification {
        is_hom,
        is_injective: image_order == n,
        pairs_checked,
        exhaustive,
        image_order,
    }
}

/// How coset representatives are chosen for the embedding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transversal {
    /// Least element of each coset in canonical order.
    Canonical,
    /// A seeded random element of each coset.
    Seeded(u64),
}

/// Embeds the extension `E` of `N` by `E/N` into `N Wr (E/N)`.
///
/// With transversal `{t_q}`, `g ↦ (f_g, gN)` where
/// `f_g(q) = t_q · g · t_{q·gN}⁻¹`. The returned map is already verified.
pub fn kk_embedding(extension: &Group, normal: &Subgroup, transversal: Transversal) -> Result<Homomorphism> {
    let (q, proj) = quotient(extension, normal)?;
    let base = normal.as_group()?;
    let wreath = build_group(Recipe::Wreath(base, q.clone()), extension.budget())?;
    let nq = q.order_u64().expect("quotient order within budget");
    let cosets: Vec<Payload> = q.payloads()?.collect();
    let reps: Vec<Payload> = match transversal {
        Transversal::Canonical => cosets.clone(),
        Transversal::Seeded(seed) => {
            let kernel = normal.payloads()?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            cosets
                .iter()
                .map(|c| extension.mul(c, &kernel[rng.gen_range(0..kernel.len())]))
                .collect()
        }
    };
    let rep_invs: Vec<Payload> = reps.iter().map(|t| extension.inv(t)).collect();
    let ew = extension.width();
    let mut phi = Homomorphism::from_fn(extension, &wreath, |g| {
        let gq = proj.image_payload(g);
        let mut out = vec![0u32; ew * nq as usize + 1];
        for x in 0..nq as usize {
            let xg = q.rank(&q.mul(&cosets[x], gq)) as usize;
            let f = extension.mul(&extension.mul(&reps[x], g), &rep_invs[xg]);
            out[x * ew..(x + 1) * ew].copy_from_slice(&f);
        }
        out[ew * nq as usize] = q.rank(gq) as u32;
        out.into_boxed_slice()
    })?;
    phi.verify(0);
    Ok(phi)
}
