use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Group, GroupElement, Payload};
use crate::laws::eval::{eval_raw, value_table, Assignments};
use crate::laws::Word;
use crate::structure::{commutator_subgroup, Subgroup};

/// Random assignments tried when an exhaustive search does not fit the budget.
pub const RANDOM_PREPASS: u64 = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Every assignment was accounted for.
    Exhaustive,
    /// Decided by a registered structural equivalence.
    Structural,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LawVerdict {
    Holds {
        method: Method,
    },
    /// `witness[i]` is the value of `x{i+1}`; the word evaluates to `value ≠ 1`.
    Fails {
        witness: Vec<GroupElement>,
        value: GroupElement,
    },
    Unknown {
        reason: String,
    },
}

impl LawVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, LawVerdict::Holds { .. })
    }

    pub fn fails(&self) -> bool {
        matches!(self, LawVerdict::Fails { .. })
    }
}

impl fmt::Display for LawVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LawVerdict::Holds { method } => write!(f, "holds ({method:?})"),
            LawVerdict::Fails { witness, value } => {
                let parts: Vec<String> = witness
                    .iter()
                    .enumerate()
                    .map(|(i, w)| format!("x{}={w}", i + 1))
                    .collect();
                write!(f, "fails at {} (value {value})", parts.join(", "))
            }
            LawVerdict::Unknown { reason } => write!(f, "unknown: {reason}"),
        }
    }
}

/// Word shapes with a structural decision procedure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shortcut {
    /// `[[x_a,x_b],[x_c,x_d],x_e]` in distinct variables: holds iff `G'' ≤ Z(G)`.
    SecondDerivedCentral,
    /// `[x_1,…,x_k]` in distinct variables: holds iff `γ_k(G) = 1`.
    LowerCentral(usize),
    /// `x^m`: holds iff `exp(G) | m`.
    Exponent(u64),
}

/// Flattens a commutator whose first entry is itself a commutator:
/// `[[u,v],w] = [u,v,w]`.
fn flatten_commutator(parts: &[Word]) -> Vec<Word> {
    match parts.first() {
        Some(Word::Commutator(inner)) => {
            let mut out = flatten_commutator(inner);
            out.extend(parts[1..].iter().cloned());
            out
        }
        _ => parts.to_vec(),
    }
}

fn distinct_vars(ws: &[&Word]) -> Option<Vec<usize>> {
    let mut vars = Vec::new();
    for w in ws {
        match w {
            Word::Var(i) if !vars.contains(i) => vars.push(*i),
            _ => return None,
        }
    }
    Some(vars)
}

/// Recognizes registered law shapes.
pub fn recognize(word: &Word) -> Option<Shortcut> {
    match word {
        Word::Power(inner, m) if matches!(**inner, Word::Var(_)) => Some(Shortcut::Exponent(m.unsigned_abs())),
        Word::Commutator(parts) => {
            let flat = flatten_commutator(parts);
            if let Some(vars) = distinct_vars(&flat.iter().collect::<Vec<_>>()) {
                return Some(Shortcut::LowerCentral(vars.len()));
            }
            if let [a, b, Word::Commutator(cd), e] = flat.as_slice() {
                if let [c, d] = cd.as_slice() {
                    if distinct_vars(&[a, b, c, d, e]).is_some() {
                        return Some(Shortcut::SecondDerivedCentral);
                    }
                }
            }
            None
        }
        _ => None,
    }
}

/// True iff every element of `G''` commutes with every generator of `G`,
/// i.e. iff `[[x1,x2],[x3,x4],x5] ≡ 1` holds in `G`.
pub fn second_derived_central(group: &Group) -> Result<bool> {
    let whole = Subgroup::whole(group);
    let derived = commutator_subgroup(group, &whole, &whole)?;
    let second = commutator_subgroup(group, &derived, &derived)?;
    let gens = group.generator_payloads();
    Ok(second
        .payloads()?
        .iter()
        .all(|z| gens.iter().all(|g| group.mul(z, g) == group.mul(g, z))))
}

/// True iff `γ_k(G) = 1`.
fn lower_central_term_trivial(group: &Group, k: usize) -> Result<bool> {
    let whole = Subgroup::whole(group);
    let mut term = whole.clone();
    for _ in 1..k {
        if term.is_trivial() {
            return Ok(true);
        }
        let next = commutator_subgroup(group, &term, &whole)?;
        if next.order() == term.order() {
            return Ok(false);
        }
        term = next;
    }
    Ok(term.is_trivial())
}

fn decide_structurally(group: &Group, shortcut: Shortcut) -> Result<bool> {
    match shortcut {
        Shortcut::SecondDerivedCentral => second_derived_central(group),
        Shortcut::LowerCentral(k) => lower_central_term_trivial(group, k),
        Shortcut::Exponent(0) => Ok(true),
        Shortcut::Exponent(m) => Ok(m % group.exponent()? == 0),
    }
}

/// Options for [`check_law_with`].
#[derive(Clone, Copy, Debug)]
pub struct LawOptions {
    /// Seed for the random witness pre-pass.
    pub seed: u64,
    /// Consult registered structural shortcuts before searching.
    pub shortcuts: bool,
}

impl Default for LawOptions {
    fn default() -> Self {
        LawOptions {
            seed: 0,
            shortcuts: true,
        }
    }
}

pub fn check_law(group: &Group, word: &Word) -> LawVerdict {
    check_law_with(group, word, LawOptions::default())
}

/// Decides whether `word ≡ 1` holds in `group`.
///
/// Registered shapes are decided structurally first. Otherwise (or to find a
/// witness for a structural failure) all assignments are scanned within the
/// budget, reporting the canonically least failing assignment. If that does
/// not fit, a seeded random search may still find a witness; failing that the
/// verdict is `Unknown`.
pub fn check_law_with(group: &Group, word: &Word, opts: LawOptions) -> LawVerdict {
    let mut structural_failure = false;
    if opts.shortcuts {
        if let Some(sc) = recognize(word) {
            match decide_structurally(group, sc) {
                Ok(true) => {
                    return LawVerdict::Holds {
                        method: Method::Structural,
                    }
                }
                Ok(false) => structural_failure = true,
                Err(_) => {}
            }
        }
    }
    match exhaustive(group, word) {
        Ok(v) => v,
        Err(e) => {
            if let Some(v) = random_witness(group, word, opts.seed) {
                return v;
            }
            let reason = if structural_failure {
                format!("law fails structurally but no witness was found within budget ({e})")
            } else {
                e.to_string()
            };
            LawVerdict::Unknown { reason }
        }
    }
}

fn fails_at(group: &Group, assignment: Vec<Payload>, value: Payload) -> LawVerdict {
    LawVerdict::Fails {
        witness: assignment.into_iter().map(|p| group.wrap(p)).collect(),
        value: group.wrap(value),
    }
}

fn exhaustive(group: &Group, word: &Word) -> Result<LawVerdict> {
    let table = value_table(word, group)?;
    let worst = table
        .entries
        .iter()
        .filter(|(v, _)| !Group::is_identity(v))
        .min_by(|a, b| a.1.cmp(b.1));
    let Some((value, partial)) = worst else {
        return Ok(LawVerdict::Holds {
            method: Method::Exhaustive,
        });
    };
    let mut full = vec![group.identity_payload(); word.arity()];
    for (v, a) in table.vars.iter().zip(partial) {
        full[v - 1] = a.clone();
    }
    Ok(fails_at(group, full, value.clone()))
}

fn random_witness(group: &Group, word: &Word, seed: u64) -> Option<LawVerdict> {
    let n = group.order_u64()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arity = word.arity();
    for _ in 0..RANDOM_PREPASS {
        let assignment: Vec<Payload> = (0..arity).map(|_| group.unrank(rng.gen_range(0..n))).collect();
        let refs: Vec<&[u32]> = assignment.iter().map(|a| &a[..]).collect();
        let value = eval_raw(word, group, &refs).ok()?;
        if !Group::is_identity(&value) {
            return Some(fails_at(group, assignment, value));
        }
    }
    None
}

/// Evidence that `fails_in ∉ var(holds_in)`: a law of the first group that
/// fails in the second.
#[derive(Clone, Debug)]
pub struct SeparationCertificate {
    pub word: Word,
    pub holds_in: Group,
    pub method: Method,
    pub fails_in: Group,
    pub witness: Vec<GroupElement>,
    pub value: GroupElement,
}

impl fmt::Display for SeparationCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ≡ 1 holds in {} ({:?}) and fails in {}, so {} ∉ var({})",
            self.word, self.holds_in, self.method, self.fails_in, self.fails_in, self.holds_in
        )
    }
}

/// Returns a certificate when `word` holds in `holds_in` and fails in
/// `fails_in`, `None` when either side does not conform, and an
/// `Inconclusive` error when either verdict is unknown.
pub fn separate_by_law(holds_in: &Group, fails_in: &Group, word: &Word) -> Result<Option<SeparationCertificate>> {
    separate_by_law_with(holds_in, fails_in, word, LawOptions::default())
}

pub fn separate_by_law_with(
    holds_in: &Group,
    fails_in: &Group,
    word: &Word,
    opts: LawOptions,
) -> Result<Option<SeparationCertificate>> {
    let first = check_law_with(holds_in, word, opts);
    let method = match first {
        LawVerdict::Holds { method } => method,
        LawVerdict::Fails { .. } => return Ok(None),
        LawVerdict::Unknown { reason } => return Err(Error::Inconclusive(format!("{holds_in}: {reason}"))),
    };
    match check_law_with(fails_in, word, opts) {
        LawVerdict::Fails { witness, value } => Ok(Some(SeparationCertificate {
            word: word.clone(),
            holds_in: holds_in.clone(),
            method,
            fails_in: fails_in.clone(),
            witness,
            value,
        })),
        LawVerdict::Holds { .. } => Ok(None),
        LawVerdict::Unknown { reason } => Err(Error::Inconclusive(format!("{fails_in}: {reason}"))),
    }
}

/// Finds one assignment under which every word evaluates to a non-identity
/// element, scanning assignments in canonical order.
pub fn discriminate(group: &Group, words: &[Word]) -> Result<Option<Vec<GroupElement>>> {
    if words.is_empty() {
        return Ok(Some(Vec::new()));
    }
    let arity = words.iter().map(Word::arity).max().unwrap_or(0);
    let n = group.order_within_budget("discrimination")?;
    let total = (n as u128).checked_pow(arity as u32).unwrap_or(u128::MAX);
    group
        .budget()
        .charge("discrimination assignments", u64::try_from(total).unwrap_or(u64::MAX))?;
    for assignment in Assignments::new(group, arity) {
        let refs: Vec<&[u32]> = assignment.iter().map(|a| &a[..]).collect();
        let mut all_nontrivial = true;
        for w in words {
            if Group::is_identity(&eval_raw(w, group, &refs)?) {
                all_nontrivial = false;
                break;
            }
        }
        if all_nontrivial {
            return Ok(Some(assignment.into_iter().map(|p| group.wrap(p)).collect()));
        }
    }
    Ok(None)
}
