use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A group word in the variables `x1, x2, …`.
///
/// Commutators are left-normed: `[u, v, w] = [[u, v], w]` and
/// `[u, v] = u⁻¹v⁻¹uv`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Word {
    Var(usize),
    Product(Vec<Word>),
    Inverse(Box<Word>),
    Power(Box<Word>, i64),
    Commutator(Vec<Word>),
}

impl Word {
    pub fn var(i: usize) -> Word {
        Word::Var(i)
    }

    /// Product of the factors; a single factor is returned unchanged.
    pub fn product(mut factors: Vec<Word>) -> Word {
        if factors.len() == 1 {
            factors.pop().expect("one factor")
        } else {
            Word::Product(factors)
        }
    }

    pub fn inverse(w: Word) -> Word {
        Word::Inverse(Box::new(w))
    }

    /// `w^k`; exponent `-1` is stored as an inverse.
    pub fn power(w: Word, k: i64) -> Word {
        if k == -1 {
            Word::inverse(w)
        } else {
            Word::Power(Box::new(w), k)
        }
    }

    pub fn commutator(parts: Vec<Word>) -> Word {
        assert!(parts.len() >= 2, "commutator needs at least two entries");
        Word::Commutator(parts)
    }

    /// Left-normed simple commutator `[x_1, …, x_k]` in distinct variables.
    pub fn simple_commutator(weight: usize) -> Word {
        Word::commutator((1..=weight).map(Word::Var).collect())
    }

    /// Highest variable index occurring in the word.
    pub fn arity(&self) -> usize {
        self.variables().into_iter().max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<usize>) {
        match self {
            Word::Var(i) => {
                out.insert(*i);
            }
            Word::Product(ws) | Word::Commutator(ws) => ws.iter().for_each(|w| w.collect_vars(out)),
            Word::Inverse(w) | Word::Power(w, _) => w.collect_vars(out),
        }
    }

    /// Substitutes variable indices through `f`.
    pub fn rename(&self, f: &dyn Fn(usize) -> usize) -> Word {
        match self {
            Word::Var(i) => Word::Var(f(*i)),
            Word::Product(ws) => Word::Product(ws.iter().map(|w| w.rename(f)).collect()),
            Word::Commutator(ws) => Word::Commutator(ws.iter().map(|w| w.rename(f)).collect()),
            Word::Inverse(w) => Word::Inverse(Box::new(w.rename(f))),
            Word::Power(w, k) => Word::Power(Box::new(w.rename(f)), *k),
        }
    }

    /// Rewrites commutators into products of inverses, e.g. `[u,v] → u⁻¹v⁻¹uv`.
    pub fn expand_commutators(&self) -> Word {
        match self {
            Word::Var(_) => self.clone(),
            Word::Product(ws) => Word::Product(ws.iter().map(Word::expand_commutators).collect()),
            Word::Inverse(w) => Word::inverse(w.expand_commutators()),
            Word::Power(w, k) => Word::Power(Box::new(w.expand_commutators()), *k),
            Word::Commutator(ws) => {
                let mut acc = ws[0].expand_commutators();
                for w in &ws[1..] {
                    let v = w.expand_commutators();
                    acc = Word::Product(vec![Word::inverse(acc.clone()), Word::inverse(v.clone()), acc, v]);
                }
                acc
            }
        }
    }

    fn fmt_atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Word::Var(_) | Word::Commutator(_) => write!(f, "{self}"),
            _ => write!(f, "({self})"),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Word::Var(i) => write!(f, "x{i}"),
            Word::Product(ws) => {
                for (i, w) in ws.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    if matches!(w, Word::Product(_)) {
                        write!(f, "({w})")?;
                    } else {
                        write!(f, "{w}")?;
                    }
                }
                Ok(())
            }
            Word::Inverse(w) => {
                w.fmt_atom(f)?;
                f.write_str("^-1")
            }
            Word::Power(w, k) => {
                w.fmt_atom(f)?;
                write!(f, "^{k}")
            }
            Word::Commutator(ws) => {
                f.write_str("[")?;
                for (i, w) in ws.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{w}")?;
                }
                f.write_str("]")
            }
        }
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        parse_word(s)
    }
}

/// Parses `word := factor+`, `factor := atom ('^' int)?`,
/// `atom := 'x' digits | '[' word (',' word)+ ']' | '(' word ')'`.
pub fn parse_word(text: &str) -> Result<Word> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let w = p.word()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(Error::syntax(p.pos, format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(w)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::syntax(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn word(&mut self) -> Result<Word> {
        let mut factors = Vec::new();
        while matches!(self.peek(), Some(b'x' | b'[' | b'(')) {
            factors.push(self.factor()?);
        }
        if factors.is_empty() {
            return Err(Error::syntax(self.pos, "expected a variable, '[' or '('"));
        }
        Ok(Word::product(factors))
    }

    fn factor(&mut self) -> Result<Word> {
        let atom = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.int()?;
            Ok(Word::power(atom, k))
        } else {
            Ok(atom)
        }
    }

    fn digits(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::syntax(start, "expected digits"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii")
            .parse()
            .map_err(|_| Error::syntax(start, "number out of range"))
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let neg = self.src.get(self.pos) == Some(&b'-');
        if neg {
            self.pos += 1;
        }
        let start = self.pos;
        let v = i64::try_from(self.digits()?).map_err(|_| Error::syntax(start, "exponent out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn atom(&mut self) -> Result<Word> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let start = self.pos;
                let i = self.digits()?;
                if i == 0 {
                    return Err(Error::syntax(start, "variables are numbered from x1"));
                }
                Ok(Word::Var(i as usize))
            }
            Some(b'[') => {
                self.pos += 1;
                let mut parts = vec![self.word()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    parts.push(self.word()?);
                }
                if parts.len() < 2 {
                    return Err(Error::syntax(self.pos, "commutator needs at least two entries"));
                }
                self.expect(b']')?;
                Ok(Word::Commutator(parts))
            }
            Some(b'(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(b')')?;
                Ok(w)
            }
            _ => Err(Error::syntax(self.pos, "expected a variable, '[' or '('")),
        }
    }
}
