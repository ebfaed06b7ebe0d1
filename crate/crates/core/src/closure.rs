//! Subgroup closure by Dimino-style coset extension.

use indexmap::IndexSet;

use crate::budget::Budget;
use crate::error::Result;
use crate::group::{Group, Payload};

/// A subgroup under construction: its elements plus a generating set in
/// which no generator lies in the span of the earlier ones.
pub(crate) struct Closure {
    pub elems: IndexSet<Payload>,
    pub gens: Vec<Payload>,
}

impl Closure {
    pub fn trivial(group: &Group) -> Self {
        let mut elems = IndexSet::new();
        elems.insert(group.identity_payload());
        Closure {
            elems,
            gens: Vec::new(),
        }
    }

    pub fn contains(&self, a: &[u32]) -> bool {
        self.elems.contains(a)
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    /// Replaces the subgroup `H` by `<H, c>`, adding whole right cosets `H·r`
    /// until the union is closed under right multiplication by every generator.
    pub fn extend(&mut self, group: &Group, c: Payload, budget: &Budget, what: &str) -> Result<()> {
        if self.contains(&c) {
            return Ok(());
        }
        self.gens.push(c);
        let old = self.elems.len();
        let mut reps: Vec<Payload> = vec![group.identity_payload()];
        let mut i = 0;
        while i < reps.len() {
            for s in 0..self.gens.len() {
                let y = group.mul(&reps[i], &self.gens[s]);
                if self.elems.contains(&y) {
                    continue;
                }
                budget.charge(what, (self.elems.len() + old) as u64)?;
                for j in 0..old {
                    let e = group.mul(&self.elems[j], &y);
                    self.elems.insert(e);
                }
                reps.push(y);
            }
            i += 1;
        }
        Ok(())
    }

    pub fn generate<'a, I>(group: &Group, seeds: I, budget: &Budget, what: &str) -> Result<Self>
    where
        I: IntoIterator<Item = &'a [u32]>,
    {
        let mut cl = Closure::trivial(group);
        for s in seeds {
            cl.extend(group, s.into(), budget, what)?;
        }
        Ok(cl)
    }

    /// Smallest subgroup containing `seeds` and normalized by `conjugators`.
    pub fn normal_closure<'a, I>(
        group: &Group,
        seeds: I,
        conjugators: &[Payload],
        budget: &Budget,
        what: &str,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = &'a [u32]>,
    {
        let mut cl = Closure::generate(group, seeds, budget, what)?;
        let conj_inv: Vec<Payload> = conjugators.iter().map(|g| group.inv(g)).collect();
        let mut i = 0;
        while i < cl.gens.len() {
            for (g, gi) in conjugators.iter().zip(&conj_inv) {
                let c = group.mul(&group.mul(gi, &cl.gens[i]), g);
                if !cl.contains(&c) {
                    cl.extend(group, c, budget, what)?;
                }
            }
            i += 1;
        }
        Ok(cl)
    }

    pub fn into_sorted(self) -> (Vec<Payload>, Vec<Payload>) {
        let mut elems: Vec<Payload> = self.elems.into_iter().collect();
        elems.sort_unstable();
        (elems, self.gens)
    }
}
