use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::{Group, GroupElement, Payload};
use crate::laws::Word;

/// Value of `word` under `assignment` (`assignment[i]` is bound to `x{i+1}`).
pub fn evaluate(word: &Word, group: &Group, assignment: &[GroupElement]) -> Result<GroupElement> {
    if assignment.iter().any(|a| !a.group().same_as(group)) {
        return Err(Error::MixedOwner);
    }
    let raw: Vec<&[u32]> = assignment.iter().map(|a| a.payload()).collect();
    Ok(group.wrap(eval_raw(word, group, &raw)?))
}

pub(crate) fn eval_raw(word: &Word, group: &Group, assignment: &[&[u32]]) -> Result<Payload> {
    match word {
        Word::Var(i) => assignment
            .get(i - 1)
            .map(|&p| p.into())
            .ok_or(Error::UnboundVariable(*i)),
        Word::Product(ws) => {
            let mut acc = group.identity_payload();
            for w in ws {
                acc = group.mul(&acc, &eval_raw(w, group, assignment)?);
            }
            Ok(acc)
        }
        Word::Inverse(w) => Ok(group.inv(&eval_raw(w, group, assignment)?)),
        Word::Power(w, k) => Ok(group.pow(&eval_raw(w, group, assignment)?, *k)),
        Word::Commutator(ws) => {
            let mut acc = eval_raw(&ws[0], group, assignment)?;
            for w in &ws[1..] {
                acc = group.commutator(&acc, &eval_raw(w, group, assignment)?);
            }
            Ok(acc)
        }
    }
}

/// All values a word takes, each with the lexicographically least partial
/// assignment (aligned with `vars`) producing it.
pub(crate) struct ValueTable {
    pub vars: Vec<usize>,
    pub entries: HashMap<Payload, Vec<Payload>>,
}

impl ValueTable {
    fn insert(&mut self, value: Payload, assignment: Vec<Payload>) {
        match self.entries.get_mut(&value) {
            Some(existing) if assignment < *existing => *existing = assignment,
            Some(_) => {}
            None => {
                self.entries.insert(value, assignment);
            }
        }
    }

    fn map_values(self, f: impl Fn(&[u32]) -> Payload) -> ValueTable {
        let mut out = ValueTable {
            vars: self.vars,
            entries: HashMap::new(),
        };
        for (v, a) in self.entries {
            out.insert(f(&v), a);
        }
        out
    }
}

/// Computes the value table of `word` over every assignment of its
/// variables. Subwords on disjoint variable sets are combined value-by-value,
/// so the cost is a product of value-set sizes rather than `|G|^arity`;
/// subwords sharing variables fall back to enumerating their assignments.
pub(crate) fn value_table(word: &Word, group: &Group) -> Result<ValueTable> {
    let budget = group.budget();
    match word {
        Word::Var(i) => {
            let mut t = ValueTable {
                vars: vec![*i],
                entries: HashMap::new(),
            };
            for g in group.payloads()? {
                t.entries.insert(g.clone(), vec![g]);
            }
            Ok(t)
        }
        Word::Inverse(w) => Ok(value_table(w, group)?.map_values(|v| group.inv(v))),
        Word::Power(w, k) => Ok(value_table(w, group)?.map_values(|v| group.pow(v, *k))),
        Word::Product(ws) | Word::Commutator(ws) => {
            let is_comm = matches!(word, Word::Commutator(_));
            let op = |a: &[u32], b: &[u32]| {
                if is_comm {
                    group.commutator(a, b)
                } else {
                    group.mul(a, b)
                }
            };
            let mut acc = value_table(&ws[0], group)?;
            for (i, w) in ws.iter().enumerate().skip(1) {
                let next = value_table(w, group)?;
                let disjoint = acc.vars.iter().all(|v| !next.vars.contains(v));
                acc = if disjoint {
                    let cost = (acc.entries.len() as u64).saturating_mul(next.entries.len() as u64);
                    budget.charge("law evaluation", cost)?;
                    combine(&acc, &next, op)
                } else {
                    let prefix = if is_comm {
                        Word::Commutator(ws[..=i].to_vec())
                    } else {
                        Word::Product(ws[..=i].to_vec())
                    };
                    brute_table(&prefix, group)?
                };
            }
            Ok(acc)
        }
    }
}

fn combine(a: &ValueTable, b: &ValueTable, op: impl Fn(&[u32], &[u32]) -> Payload) -> ValueTable {
    let mut vars: Vec<usize> = a.vars.iter().chain(&b.vars).copied().collect();
    vars.sort_unstable();
    let mut out = ValueTable {
        vars,
        entries: HashMap::new(),
    };
    for (va, aa) in &a.entries {
        for (vb, ab) in &b.entries {
            let merged = merge_assignments(&a.vars, aa, &b.vars, ab);
            out.insert(op(va, vb), merged);
        }
    }
    out
}

fn merge_assignments(va: &[usize], aa: &[Payload], vb: &[usize], ab: &[Payload]) -> Vec<Payload> {
    let mut out = Vec::with_capacity(aa.len() + ab.len());
    let (mut i, mut j) = (0, 0);
    while i < va.len() || j < vb.len() {
        if j == vb.len() || (i < va.len() && va[i] < vb[j]) {
            out.push(aa[i].clone());
            i += 1;
        } else {
            out.push(ab[j].clone());
            j += 1;
        }
    }
    out
}

/// Enumerates every assignment of the word's variables in canonical order.
fn brute_table(word: &Word, group: &Group) -> Result<ValueTable> {
    let vars: Vec<usize> = word.variables().into_iter().collect();
    let n = group.order_within_budget("law evaluation")?;
    let total = (n as u128).checked_pow(vars.len() as u32).unwrap_or(u128::MAX);
    let total = u64::try_from(total).unwrap_or(u64::MAX);
    group.budget().charge("law evaluation", total)?;
    let arity = word.arity();
    let mut table = ValueTable {
        vars: vars.clone(),
        entries: HashMap::new(),
    };
    let identity = group.identity_payload();
    for assignment in Assignments::new(group, vars.len()) {
        let mut full: Vec<&[u32]> = vec![&identity; arity];
        for (v, a) in vars.iter().zip(&assignment) {
            full[v - 1] = a;
        }
        let value = eval_raw(word, group, &full)?;
        // Canonical order visits the least assignment for each value first.
        table.entries.entry(value).or_insert(assignment);
    }
    Ok(table)
}

/// All `k`-tuples of group elements in lexicographic canonical order.
pub(crate) struct Assignments<'a> {
    group: &'a Group,
    ranks: Vec<u64>,
    n: u64,
    done: bool,
}

impl<'a> Assignments<'a> {
    pub fn new(group: &'a Group, k: usize) -> Self {
        let n = group.order_u64().expect("bounded order");
        Assignments {
            group,
            ranks: vec![0; k],
            n,
            done: false,
        }
    }
}

impl Iterator for Assignments<'_> {
    type Item = Vec<Payload>;

    fn next(&mut self) -> Option<Vec<Payload>> {
        if self.done {
            return None;
        }
        let item = self.ranks.iter().map(|&r| self.group.unrank(r)).collect();
        let mut i = self.ranks.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.ranks[i] += 1;
            if self.ranks[i] < self.n {
                break;
            }
            self.ranks[i] = 0;
        }
        Some(item)
    }
}
