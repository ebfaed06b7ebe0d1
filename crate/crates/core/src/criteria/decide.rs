use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::criteria::descriptor::{AbelianDescriptor, Exponent, Multiplicity, SetDescriptor, Summand};
use crate::error::{Error, Result};
use crate::group::{prime_factors, Group};
use crate::structure::{lower_central_series, primary_decomposition, Nilpotency};

/// `exp D`, or `Infinite`.
pub fn descriptor_exponent(d: &AbelianDescriptor) -> Exponent {
    d.exponent()
}

/// Verdict of the per-prime condition for one common prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeCheck {
    pub prime: u64,
    /// `p`-adic valuation of the exponent of the second argument.
    pub top_exponent: u32,
    pub satisfied: bool,
    pub evidence: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionCase {
    /// One side has infinite exponent, which settles the question.
    InfiniteExponent { side: char },
    /// Both exponents finite; `checks` covers every common prime.
    FiniteExponents { m: u64, n: u64 },
}

/// A decision together with the trace that justifies it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub holds: bool,
    pub case: DecisionCase,
    pub checks: Vec<PrimeCheck>,
}

impl Decision {
    pub fn trace(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self.case {
            DecisionCase::InfiniteExponent { side } => {
                out.push(format!("{side} has infinite exponent, so equality holds"));
            }
            DecisionCase::FiniteExponents { m, n } => {
                out.push(format!("exponents m = {m}, n = {n}"));
                if self.checks.is_empty() {
                    out.push("no common primes".into());
                }
                for c in &self.checks {
                    out.push(format!(
                        "p = {}: k' = {}, {} ({})",
                        c.prime,
                        c.top_exponent,
                        if c.satisfied { "ok" } else { "fails" },
                        c.evidence
                    ));
                }
            }
        }
        out.push(format!("verdict: {}", self.holds));
        out
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.trace().join("\n"))
    }
}

fn valuation(mut n: u64, p: u64) -> u32 {
    let mut k = 0;
    while n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    k
}

fn common_primes(m: u64, n: u64) -> Vec<u64> {
    prime_factors(m.gcd(&n))
}

/// Decides `var(A Wr B) = var(A)var(B)` for abelian `A`, `B`: true iff one
/// exponent is infinite, or for every common prime `p` of `m = exp A` and
/// `n = exp B`, `B` has infinitely many summands `C_{p^k'}` with `p^k' ‖ n`.
pub fn decide_pair(a: &AbelianDescriptor, b: &AbelianDescriptor) -> Decision {
    let (m, n) = match (a.exponent(), b.exponent()) {
        (Exponent::Infinite, _) => {
            return Decision {
                holds: true,
                case: DecisionCase::InfiniteExponent { side: 'A' },
                checks: Vec::new(),
            }
        }
        (_, Exponent::Infinite) => {
            return Decision {
                holds: true,
                case: DecisionCase::InfiniteExponent { side: 'B' },
                checks: Vec::new(),
            }
        }
        (Exponent::Finite(m), Exponent::Finite(n)) => (m, n),
    };
    let checks: Vec<PrimeCheck> = common_primes(m, n)
        .into_iter()
        .map(|p| {
            let k = valuation(n, p);
            let mult = b.multiplicity(p, k);
            PrimeCheck {
                prime: p,
                top_exponent: k,
                satisfied: mult == Some(Multiplicity::Omega),
                evidence: match mult {
                    Some(mu) => format!("B has {mu} summands C_{}", p.pow(k)),
                    None => format!("B has no summand C_{}", p.pow(k)),
                },
            }
        })
        .collect();
    Decision {
        holds: checks.iter().all(|c| c.satisfied),
        case: DecisionCase::FiniteExponents { m, n },
        checks,
    }
}

/// For finite abelian `A`, `B`: `var(A Wr B) = var(A)var(B)` iff
/// `gcd(exp A, exp B) = 1`.
pub fn decide_finite_pair(a: &AbelianDescriptor, b: &AbelianDescriptor) -> Result<bool> {
    let finite = |d: &AbelianDescriptor| match d.exponent() {
        Exponent::Finite(e) if d.is_finite_group() => Ok(e),
        _ => Err(Error::DescriptorNotFinite),
    };
    Ok(finite(a)?.gcd(&finite(b)?) == 1)
}

/// Set version of [`decide_pair`]: for every common prime the condition is
/// met by a member with `ω` summands `C_{p^k'}` or by a declared unbounded
/// family `(p, k')`.
pub fn decide_sets(x: &SetDescriptor, y: &SetDescriptor) -> Decision {
    let (m, n) = match (x.exponent(), y.exponent()) {
        (Exponent::Infinite, _) => {
            return Decision {
                holds: true,
                case: DecisionCase::InfiniteExponent { side: 'X' },
                checks: Vec::new(),
            }
        }
        (_, Exponent::Infinite) => {
            return Decision {
                holds: true,
                case: DecisionCase::InfiniteExponent { side: 'Y' },
                checks: Vec::new(),
            }
        }
        (Exponent::Finite(m), Exponent::Finite(n)) => (m, n),
    };
    let checks: Vec<PrimeCheck> = common_primes(m, n)
        .into_iter()
        .map(|p| {
            let k = valuation(n, p);
            let q = p.pow(k);
            let omega_member = y
                .members
                .iter()
                .position(|d| d.multiplicity(p, k) == Some(Multiplicity::Omega));
            let family = y.unbounded_families.contains(&(p, k));
            let (satisfied, evidence) = match (omega_member, family) {
                (Some(i), _) => (true, format!("member #{} has ω summands C_{q}", i + 1)),
                (None, true) => (true, format!("unbounded family of C_{q} summands")),
                (None, false) => {
                    let most = y
                        .members
                        .iter()
                        .filter_map(|d| d.multiplicity(p, k))
                        .max()
                        .unwrap_or(Multiplicity::Finite(0));
                    (false, format!("at most {most} summands C_{q} in any member"))
                }
            };
            PrimeCheck {
                prime: p,
                top_exponent: k,
                satisfied,
                evidence,
            }
        })
        .collect();
    Decision {
        holds: checks.iter().all(|c| c.satisfied),
        case: DecisionCase::FiniteExponents { m, n },
        checks,
    }
}

/// Exponent, nilpotency and commutativity of a concrete finite group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteGroupProfile {
    pub exponent: u64,
    pub nilpotency: Nilpotency,
    pub abelian: bool,
}

pub fn profile(group: &Group) -> Result<FiniteGroupProfile> {
    Ok(FiniteGroupProfile {
        exponent: group.exponent()?,
        nilpotency: lower_central_series(group)?.verdict,
        abelian: group.is_abelian(),
    })
}

/// Outcome of the necessary condition for `var(A Wr B) = var(A)var(B)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShmelkinReport {
    pub holds: bool,
    pub a: FiniteGroupProfile,
    pub b: FiniteGroupProfile,
    /// One entry per failing conjunct; empty when `holds`.
    pub reasons: Vec<String>,
}

/// `B` abelian, `A` nilpotent and `gcd(exp A, exp B) = 1`. A false result
/// certifies `var(A Wr B) ≠ var(A)var(B)`; a true one is only necessary.
pub fn shmelkin_necessary(a: &Group, b: &Group) -> Result<ShmelkinReport> {
    let pa = profile(a)?;
    let pb = profile(b)?;
    let mut reasons = Vec::new();
    if !pb.abelian {
        reasons.push(format!("B = {b} is not abelian"));
    }
    if let Nilpotency::NotNilpotent { .. } = pa.nilpotency {
        reasons.push(format!("A = {a} is not nilpotent ({})", pa.nilpotency));
    }
    let g = pa.exponent.gcd(&pb.exponent);
    if g != 1 {
        reasons.push(format!(
            "exponents {} and {} are not coprime (gcd {g})",
            pa.exponent, pb.exponent
        ));
    }
    Ok(ShmelkinReport {
        holds: reasons.is_empty(),
        a: pa,
        b: pb,
        reasons,
    })
}

/// Schreier's formula `(n−1)·n^c + 1`: the rank of a subgroup of index `n^c`
/// in a free group of rank `n`.
pub fn schreier_rank(n: u64, c: u32) -> Result<u64> {
    if n < 2 || c < 1 {
        return Err(Error::InvalidParameter(format!(
            "schreier rank needs n >= 2 and c >= 1 (got n = {n}, c = {c})"
        )));
    }
    n.checked_pow(c)
        .and_then(|p| (n - 1).checked_mul(p))
        .and_then(|t| t.checked_add(1))
        .ok_or_else(|| Error::InvalidParameter(format!("schreier rank for n = {n}, c = {c} overflows u64")))
}

/// Descriptor of a finite abelian group via its primary decomposition.
pub fn descriptor_of(group: &Group) -> Result<AbelianDescriptor> {
    let dec = primary_decomposition(group)?;
    if dec.summands.is_empty() {
        return Err(Error::InvalidParameter("the trivial group has no descriptor".into()));
    }
    AbelianDescriptor::finite(
        dec.summands
            .iter()
            .map(|s| (s.prime, s.exponent, Multiplicity::Finite(s.multiplicity))),
    )
}

/// Summands of a descriptor for a given prime, lowest exponent first.
pub fn primary_component(d: &AbelianDescriptor, prime: u64) -> Vec<Summand> {
    d.summands().iter().filter(|s| s.prime == prime).copied().collect()
}
