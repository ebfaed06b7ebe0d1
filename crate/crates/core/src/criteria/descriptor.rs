use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::checked_prime;

/// Number of direct summands; every infinite cardinal collapses to `Omega`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Multiplicity {
    Finite(u64),
    Omega,
}

impl Multiplicity {
    fn add(self, other: Multiplicity) -> Multiplicity {
        match (self, other) {
            (Multiplicity::Finite(a), Multiplicity::Finite(b)) => {
                a.checked_add(b).map_or(Multiplicity::Omega, Multiplicity::Finite)
            }
            _ => Multiplicity::Omega,
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(n) => write!(f, "{n}"),
            Multiplicity::Omega => f.write_str("inf"),
        }
    }
}

/// Why an abelian group has infinite exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InfiniteReason {
    /// Contains a copy of `Z`.
    FreeSummand,
    /// Contains the quasicyclic group `Z(p^∞)`.
    Quasicyclic(u64),
    /// Torsion with unbounded element orders.
    Unbounded,
}

/// `multiplicity` copies of `C_{prime^exponent}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Summand {
    pub prime: u64,
    pub exponent: u32,
    pub multiplicity: Multiplicity,
}

impl Summand {
    pub fn prime_power(&self) -> u64 {
        self.prime.pow(self.exponent)
    }
}

/// Symbolic description of a possibly infinite abelian group, detailed
/// enough for the wreath-product variety criteria.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AbelianDescriptor {
    /// Finite exponent: a direct sum of cyclic prime-power groups, summands
    /// sorted by `(prime, exponent)` and merged.
    Finite {
        summands: Vec<Summand>,
    },
    Infinite(InfiniteReason),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exponent {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(n) => write!(f, "{n}"),
            Exponent::Infinite => f.write_str("infinite"),
        }
    }
}

impl AbelianDescriptor {
    /// Builds a finite-exponent descriptor, merging entries with equal
    /// `(prime, exponent)`.
    pub fn finite(entries: impl IntoIterator<Item = (u64, u32, Multiplicity)>) -> Result<AbelianDescriptor> {
        let mut summands: Vec<Summand> = Vec::new();
        for (prime, exponent, multiplicity) in entries {
            if !checked_prime(prime) {
                return Err(Error::InvalidParameter(format!("{prime} is not prime")));
            }
            if exponent == 0 {
                return Err(Error::InvalidParameter("prime-power exponent must be >= 1".into()));
            }
            if multiplicity == Multiplicity::Finite(0) {
                return Err(Error::InvalidParameter("multiplicity must be >= 1".into()));
            }
            prime
                .checked_pow(exponent)
                .ok_or_else(|| Error::InvalidParameter(format!("{prime}^{exponent} is too large")))?;
            match summands.iter_mut().find(|s| s.prime == prime && s.exponent == exponent) {
                Some(s) => s.multiplicity = s.multiplicity.add(multiplicity),
                None => summands.push(Summand {
                    prime,
                    exponent,
                    multiplicity,
                }),
            }
        }
        if summands.is_empty() {
            return Err(Error::InvalidParameter(
                "a finite descriptor needs at least one summand".into(),
            ));
        }
        summands.sort_by_key(|s| (s.prime, s.exponent));
        let d = AbelianDescriptor::Finite { summands };
        // Reject descriptors whose exponent does not fit in u64.
        d.checked_exponent()?;
        Ok(d)
    }

    /// Finite direct sum of cyclic groups of the given orders (each > 1).
    pub fn from_cyclic_orders(orders: &[u64]) -> Result<AbelianDescriptor> {
        let mut entries = Vec::new();
        for &n in orders {
            if n < 2 {
                return Err(Error::InvalidParameter(format!("cyclic order {n} must be >= 2")));
            }
            let mut m = n;
            let mut p = 2;
            while m > 1 {
                if p * p > m {
                    p = m;
                }
                let mut k = 0;
                while m % p == 0 {
                    m /= p;
                    k += 1;
                }
                if k > 0 {
                    entries.push((p, k, Multiplicity::Finite(1)));
                }
                p += 1;
            }
        }
        AbelianDescriptor::finite(entries)
    }

    fn checked_exponent(&self) -> Result<Exponent> {
        match self {
            AbelianDescriptor::Infinite(_) => Ok(Exponent::Infinite),
            AbelianDescriptor::Finite { summands } => {
                let mut m: u64 = 1;
                for s in summands {
                    let q = s.prime_power();
                    m = (m / m.gcd(&q))
                        .checked_mul(q)
                        .ok_or_else(|| Error::InvalidParameter("exponent overflows u64".into()))?;
                }
                Ok(Exponent::Finite(m))
            }
        }
    }

    /// `lcm` of the `p^k` over all summands, or infinite.
    pub fn exponent(&self) -> Exponent {
        self.checked_exponent().expect("validated at construction")
    }

    pub fn summands(&self) -> &[Summand] {
        match self {
            AbelianDescriptor::Finite { summands } => summands,
            AbelianDescriptor::Infinite(_) => &[],
        }
    }

    /// Multiplicity of `C_{p^k}`, if present.
    pub fn multiplicity(&self, prime: u64, exponent: u32) -> Option<Multiplicity> {
        self.summands()
            .iter()
            .find(|s| s.prime == prime && s.exponent == exponent)
            .map(|s| s.multiplicity)
    }

    /// Finite exponent and finitely many summands.
    pub fn is_finite_group(&self) -> bool {
        matches!(self, AbelianDescriptor::Finite { summands }
            if summands.iter().all(|s| s.multiplicity != Multiplicity::Omega))
    }
}

impl fmt::Display for AbelianDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbelianDescriptor::Finite { summands } => {
                let parts: Vec<String> = summands
                    .iter()
                    .map(|s| format!("{}^{}:{}", s.prime, s.exponent, s.multiplicity))
                    .collect();
                write!(f, "finite{{{}}}", parts.join(", "))
            }
            AbelianDescriptor::Infinite(InfiniteReason::FreeSummand) => f.write_str("infinite(Z)"),
            AbelianDescriptor::Infinite(InfiniteReason::Quasicyclic(p)) => write!(f, "infinite(quasicyclic {p})"),
            AbelianDescriptor::Infinite(InfiniteReason::Unbounded) => f.write_str("infinite(unbounded)"),
        }
    }
}

/// A set of abelian groups: explicit members plus families `(p, k)` asserting
/// that for every `s` some member has at least `s` summands `C_{p^k}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetDescriptor {
    pub members: Vec<AbelianDescriptor>,
    pub unbounded_families: Vec<(u64, u32)>,
}

impl SetDescriptor {
    pub fn new(members: Vec<AbelianDescriptor>, unbounded_families: Vec<(u64, u32)>) -> Result<SetDescriptor> {
        if members.is_empty() {
            return Err(Error::InvalidParameter("a set needs at least one member".into()));
        }
        for &(p, k) in &unbounded_families {
            if !checked_prime(p) || k == 0 {
                return Err(Error::InvalidParameter(format!(
                    "unbounded family {p}^{k} is not a prime power"
                )));
            }
        }
        let s = SetDescriptor {
            members,
            unbounded_families,
        };
        s.checked_exponent()?;
        Ok(s)
    }

    pub fn singleton(member: AbelianDescriptor) -> SetDescriptor {
        SetDescriptor {
            members: vec![member],
            unbounded_families: Vec::new(),
        }
    }

    fn checked_exponent(&self) -> Result<Exponent> {
        let mut m: u64 = 1;
        let family_powers = self.unbounded_families.iter().map(|&(p, k)| {
            p.checked_pow(k)
                .ok_or_else(|| Error::InvalidParameter("family too large".into()))
        });
        let member_exps = self.members.iter().map(|d| Ok(d.exponent()));
        for e in member_exps.chain(family_powers.map(|r| r.map(Exponent::Finite))) {
            match e? {
                Exponent::Infinite => return Ok(Exponent::Infinite),
                Exponent::Finite(q) => {
                    m = (m / m.gcd(&q))
                        .checked_mul(q)
                        .ok_or_else(|| Error::InvalidParameter("exponent overflows u64".into()))?;
                }
            }
        }
        Ok(Exponent::Finite(m))
    }

    /// Exponent of the set (lcm over members and families).
    pub fn exponent(&self) -> Exponent {
        self.checked_exponent().expect("validated at construction")
    }
}

impl fmt::Display for SetDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.members.iter().map(|d| d.to_string()).collect();
        parts.extend(
            self.unbounded_families
                .iter()
                .map(|(p, k)| format!("unbounded({p}^{k})")),
        );
        write!(f, "{{{}}}", parts.join("; "))
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(Error::syntax(self.pos, format!("expected '{token}'")))
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest.bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return Err(Error::syntax(self.pos, "expected a number"));
        }
        let start = self.pos;
        self.pos += len;
        rest[..len]
            .parse()
            .map_err(|_| Error::syntax(start, "number out of range"))
    }

    fn prime(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        let p = self.number()?;
        if !checked_prime(p) {
            return Err(Error::syntax(start, format!("{p} is not prime")));
        }
        Ok(p)
    }

    fn prime_power(&mut self) -> Result<(u64, u32)> {
        let p = self.prime()?;
        self.expect("^")?;
        let start = self.pos;
        let k = self.number()?;
        let k = u32::try_from(k)
            .ok()
            .filter(|&k| k >= 1)
            .ok_or_else(|| Error::syntax(start, "exponent must be a positive integer"))?;
        Ok((p, k))
    }

    fn descriptor(&mut self) -> Result<AbelianDescriptor> {
        let start = self.pos;
        if self.eat("finite") {
            self.expect("{")?;
            let mut entries = Vec::new();
            loop {
                let (p, k) = self.prime_power()?;
                self.expect(":")?;
                let mult = if self.eat("inf") {
                    Multiplicity::Omega
                } else {
                    let at = self.pos;
                    let n = self.number()?;
                    if n == 0 {
                        return Err(Error::syntax(at, "multiplicity must be >= 1"));
                    }
                    Multiplicity::Finite(n)
                };
                entries.push((p, k, mult));
                if !self.eat(",") {
                    break;
                }
            }
            self.expect("}")?;
            AbelianDescriptor::finite(entries).map_err(|e| Error::syntax(start, e.to_string()))
        } else if self.eat("infinite") {
            self.expect("(")?;
            let reason = if self.eat("Z") {
                InfiniteReason::FreeSummand
            } else if self.eat("quasicyclic") {
                InfiniteReason::Quasicyclic(self.prime()?)
            } else if self.eat("unbounded") {
                InfiniteReason::Unbounded
            } else {
                return Err(Error::syntax(
                    self.pos,
                    "expected 'Z', 'quasicyclic <p>' or 'unbounded'",
                ));
            };
            self.expect(")")?;
            Ok(AbelianDescriptor::Infinite(reason))
        } else {
            Err(Error::syntax(self.pos, "expected 'finite' or 'infinite'"))
        }
    }

    fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos < self.src.len() {
            Err(Error::syntax(self.pos, "unexpected trailing input"))
        } else {
            Ok(())
        }
    }
}

/// Parses `finite{p^k:count|inf, …}` or `infinite(Z | quasicyclic p | unbounded)`.
pub fn parse_descriptor(text: &str) -> Result<AbelianDescriptor> {
    let mut lx = Lexer::new(text);
    let d = lx.descriptor()?;
    lx.finish()?;
    Ok(d)
}

/// Parses `{ descriptor (; descriptor)* (; unbounded(p^k))* }`.
pub fn parse_set(text: &str) -> Result<SetDescriptor> {
    let mut lx = Lexer::new(text);
    lx.expect("{")?;
    let mut members = vec![lx.descriptor()?];
    let mut families = Vec::new();
    while lx.eat(";") {
        if lx.eat("unbounded") {
            lx.expect("(")?;
            families.push(lx.prime_power()?);
            lx.expect(")")?;
        } else if families.is_empty() {
            members.push(lx.descriptor()?);
        } else {
            return Err(Error::syntax(lx.pos, "members must precede unbounded families"));
        }
    }
    lx.expect("}")?;
    lx.finish()?;
    SetDescriptor::new(members, families)
}

impl FromStr for AbelianDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_descriptor(s)
    }
}

impl FromStr for SetDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_set(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_normalizes() {
        let d = parse_descriptor("finite{3^1:1}").unwrap();
        assert_eq!(d.exponent(), Exponent::Finite(3));
        let d = parse_descriptor("finite{2^1:1, 3^2:inf}").unwrap();
        assert_eq!(d.exponent(), Exponent::Finite(18));
        assert_eq!(d.multiplicity(3, 2), Some(Multiplicity::Omega));
        let d = parse_descriptor("finite{2^2:1, 3^1:1, 2^2:2}").unwrap();
        assert_eq!(d.multiplicity(2, 2), Some(Multiplicity::Finite(3)));
        assert_eq!(parse_descriptor("infinite(Z)").unwrap().exponent(), Exponent::Infinite);
        assert_eq!(
            parse_descriptor("infinite(quasicyclic 2)").unwrap(),
            AbelianDescriptor::Infinite(InfiniteReason::Quasicyclic(2))
        );
    }

    #[test]
    fn rejects_malformed_descriptors() {
        assert!(matches!(
            parse_descriptor("finite{9^1:1}"),
            Err(Error::Syntax { pos: 7, .. })
        ));
        assert!(parse_descriptor("finite{2^1:1, 3^1:inf, 9^…}").is_err());
        assert!(parse_descriptor("finite{}").is_err());
        assert!(parse_descriptor("finite{2^0:1}").is_err());
        assert!(parse_descriptor("finite{2^1:0}").is_err());
        assert!(parse_descriptor("infinite(Q)").is_err());
        assert!(parse_descriptor("finite{2^1:1} x").is_err());
    }

    #[test]
    fn exponents() {
        let d = parse_descriptor("finite{2^2:3, 3^1:1}").unwrap();
        assert_eq!(d.exponent(), Exponent::Finite(12));
        assert_eq!(
            parse_descriptor("finite{5^1:inf}").unwrap().exponent(),
            Exponent::Finite(5)
        );
        assert_eq!(
            parse_descriptor("infinite(quasicyclic 2)").unwrap().exponent(),
            Exponent::Infinite
        );
    }

    #[test]
    fn parses_sets() {
        let s = parse_set("{finite{2^1:1}; finite{2^1:2}; unbounded(2^1)}").unwrap();
        assert_eq!(s.members.len(), 2);
        assert_eq!(s.unbounded_families, vec![(2, 1)]);
        assert_eq!(parse_set(&s.to_string()).unwrap(), s);
        assert!(parse_set("{unbounded(2^1)}").is_err());
        assert!(parse_set("{finite{2^1:1}; unbounded(2^1); finite{3^1:1}}").is_err());
    }

    #[test]
    fn cyclic_orders() {
        let d = AbelianDescriptor::from_cyclic_orders(&[12]).unwrap();
        assert_eq!(parse_descriptor("finite{2^2:1, 3^1:1}").unwrap(), d);
    }
}
