//! Group expressions: `C<n>`, `Heis<p>`, `R`, `A x B`, `A^k`, `A wr B`.
//!
//! Binding is `^` over `wr` over `x`; `wr` is left-associative and a chain
//! of `x` is one n-ary product.

use std::fmt;

use wreathvar::catalog::critical_r_in;
use wreathvar::{build_group, Budget, Group, Recipe};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupExpr {
    Cyclic(u32),
    Heis(u32),
    /// The built-in order-108 extension of `Heis3` by `C2 x C2`.
    R,
    Product(Vec<GroupExpr>),
    Power(Box<GroupExpr>, u32),
    Wreath(Box<GroupExpr>, Box<GroupExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown builtin `{name}` at position {pos}")]
    UnknownBuiltin { pos: usize, name: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u32),
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '^' => {
                out.push((pos, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((pos, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((pos, Tok::RParen));
                i += 1;
            }
            '×' => {
                out.push((pos, Tok::Ident("x".into())));
                i += 1;
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
                let digits: String = chars[i..j].iter().map(|&(_, c)| c).collect();
                let n = digits.parse().map_err(|_| ExprError::Syntax {
                    pos,
                    msg: format!("integer {digits} is too large"),
                })?;
                out.push((pos, Tok::Int(n)));
                i = j;
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i;
                while j < chars.len() && chars[j].1.is_ascii_alphanumeric() {
                    j += 1;
                }
                out.push((pos, Tok::Ident(chars[i..j].iter().map(|&(_, c)| c).collect())));
                i = j;
            }
            other => {
                return Err(ExprError::Syntax {
                    pos,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |&(p, _)| p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn is_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == name)
    }

    fn product(&mut self) -> Result<GroupExpr, ExprError> {
        let mut items = vec![self.wreath()?];
        while self.is_ident("x") {
            self.at += 1;
            items.push(self.wreath()?);
        }
        Ok(if items.len() == 1 {
            items.pop().expect("one item")
        } else {
            GroupExpr::Product(items)
        })
    }

    fn wreath(&mut self) -> Result<GroupExpr, ExprError> {
        let mut left = self.power()?;
        while self.is_ident("wr") {
            self.at += 1;
            let right = self.power()?;
            left = GroupExpr::Wreath(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn power(&mut self) -> Result<GroupExpr, ExprError> {
        let mut base = self.atom()?;
        while self.peek() == Some(&Tok::Caret) {
            self.at += 1;
            match self.peek() {
                Some(&Tok::Int(k)) if k >= 1 => {
                    self.at += 1;
                    base = GroupExpr::Power(Box::new(base), k);
                }
                _ => return self.err("expected a positive exponent after '^'"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<GroupExpr, ExprError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.product()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.at += 1;
                Ok(inner)
            }
            Some(Tok::Ident(name)) if name == "x" || name == "wr" => {
                self.err(format!("expected a group before '{name}'"))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                builtin(&name, pos)
            }
            Some(_) => self.err("expected a group"),
            None => self.err("unexpected end of expression"),
        }
    }
}

fn builtin(name: &str, pos: usize) -> Result<GroupExpr, ExprError> {
    let unknown = || ExprError::UnknownBuiltin {
        pos,
        name: name.to_string(),
    };
    if name == "R" {
        return Ok(GroupExpr::R);
    }
    let (head, digits) = name.split_at(name.find(|c: char| c.is_ascii_digit()).ok_or_else(unknown)?);
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(unknown());
    }
    let n: u32 = digits.parse().map_err(|_| ExprError::Syntax {
        pos,
        msg: format!("parameter of {name} is too large"),
    })?;
    match head {
        "C" => Ok(GroupExpr::Cyclic(n)),
        "Heis" => Ok(GroupExpr::Heis(n)),
        _ => Err(unknown()),
    }
}

pub fn parse_group_expr(text: &str) -> Result<GroupExpr, ExprError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
    };
    let e = p.product()?;
    if p.at != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

impl std::str::FromStr for GroupExpr {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_group_expr(s)
    }
}

// Precedence levels for printing.
const PRODUCT: u8 = 1;
const WREATH: u8 = 2;
const POWER: u8 = 3;

impl GroupExpr {
    fn level(&self) -> u8 {
        match self {
            GroupExpr::Product(_) => PRODUCT,
            GroupExpr::Wreath(..) => WREATH,
            GroupExpr::Power(..) => POWER,
            _ => POWER + 1,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.level() < min {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            GroupExpr::Cyclic(n) => write!(f, "C{n}"),
            GroupExpr::Heis(p) => write!(f, "Heis{p}"),
            GroupExpr::R => f.write_str("R"),
            GroupExpr::Product(items) => {
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" x ")?;
                    }
                    item.write_at(f, WREATH)?;
                }
                Ok(())
            }
            GroupExpr::Wreath(a, b) => {
                a.write_at(f, WREATH)?;
                f.write_str(" wr ")?;
                b.write_at(f, POWER)
            }
            GroupExpr::Power(a, k) => {
                a.write_at(f, POWER)?;
                write!(f, "^{k}")
            }
        }
    }

    /// `|G|` from the recipe arithmetic, or `None` on overflow.
    pub fn order(&self) -> Option<u128> {
        match self {
            GroupExpr::Cyclic(n) => Some(*n as u128),
            GroupExpr::Heis(p) => (*p as u128).checked_pow(3),
            GroupExpr::R => Some(108),
            GroupExpr::Product(items) => items.iter().try_fold(1u128, |acc, e| acc.checked_mul(e.order()?)),
            GroupExpr::Power(a, k) => a.order()?.checked_pow(*k),
            GroupExpr::Wreath(a, b) => {
                let nb = b.order()?;
                a.order()?.checked_pow(u32::try_from(nb).ok()?)?.checked_mul(nb)
            }
        }
    }

    /// Builds the group, charging every construction against `budget`.
    pub fn build(&self, budget: &Budget) -> wreathvar::Result<Group> {
        let g = self.build_inner(budget)?;
        Ok(match self {
            GroupExpr::Cyclic(_) | GroupExpr::Heis(_) | GroupExpr::R => g,
            _ => g.labeled(self.to_string()),
        })
    }

    fn build_inner(&self, budget: &Budget) -> wreathvar::Result<Group> {
        match self {
            GroupExpr::Cyclic(n) => build_group(Recipe::Cyclic(*n), budget),
            GroupExpr::Heis(p) => build_group(Recipe::Heisenberg(*p), budget),
            GroupExpr::R => critical_r_in(budget),
            GroupExpr::Product(items) => {
                let factors = items.iter().map(|e| e.build_inner(budget)).collect::<Result<_, _>>()?;
                build_group(Recipe::DirectProduct(factors), budget)
            }
            GroupExpr::Power(a, k) => build_group(Recipe::Power(a.build_inner(budget)?, *k as usize), budget),
            GroupExpr::Wreath(a, b) => {
                build_group(Recipe::Wreath(a.build_inner(budget)?, b.build_inner(budget)?), budget)
            }
        }
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}
