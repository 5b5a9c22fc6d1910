//! Text syntax for polynomials, rational functions and top-forms.
//!
//! Printing is canonical (graded-lex, descending). Parsing accepts any expression built
//! from integers, chart variables, `+ - * / ^` and parentheses, and normalizes it, so
//! `parse(print(x)) == x` holds exactly.

use num_bigint::BigInt;

use super::form::TopForm;
use super::poly::{vars, MPoly, Vars};
use super::ratfunc::RatFunc;
use super::Rat;
use crate::error::{Error, Result};

pub fn parse_ratfunc(s: &str, vars: &Vars) -> Result<RatFunc> {
    let mut p = Parser { toks: tokenize(s)?, pos: 0, vars };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("unexpected trailing input in {s:?}")));
    }
    Ok(v)
}

pub fn parse_poly(s: &str, vars: &Vars) -> Result<MPoly> {
    parse_ratfunc(s, vars)?
        .as_polynomial()
        .ok_or_else(|| Error::Parse(format!("{s:?} is not a polynomial")))
}

/// Parses `[x, y] expr`.
pub fn parse_topform(s: &str) -> Result<TopForm> {
    let s = s.trim();
    let rest = s.strip_prefix('[').ok_or_else(|| Error::Parse("top-form must start with '['".into()))?;
    let close = rest.find(']').ok_or_else(|| Error::Parse("missing ']' after chart".into()))?;
    let names: Vec<&str> =
        rest[..close].split(',').map(str::trim).filter(|n| !n.is_empty()).collect();
    for n in &names {
        if !is_ident(n) {
            return Err(Error::Parse(format!("bad variable name {n:?}")));
        }
    }
    let chart = vars(&names);
    let coef = parse_ratfunc(&rest[close + 1..], &chart)?;
    TopForm::new(coef).map_err(|e| Error::Parse(e.to_string()))
}

/// Parses an exact rational written as an integer, `p/q`, or a decimal.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q == BigInt::from(0) {
            return Err(bad());
        }
        return Ok(Rat::new(p, q));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: BigInt = format!("{ip}{fp}").parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), fp.len());
        return Ok(Rat::new(digits, scale));
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rat::from_integer(p))
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_alphabetic() || c == '_')
        && cs.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = cs[start..i].iter().collect();
            out.push(Tok::Num(text.parse().expect("digits")));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_' || cs[i] == '\'') {
                i += 1;
            }
            out.push(Tok::Ident(cs[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c == '\u{2212}' {
            out.push(Tok::Op('-'));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a Vars,
}

impl Parser<'_> {
    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek_op() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!("expected {c:?}")))
        }
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let f = self.unary()?;
            acc = if c == '*' {
                acc.mul(&f)
            } else {
                acc.div(&f).map_err(|e| Error::Parse(e.to_string()))?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFunc> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if self.peek_op() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let neg = if self.peek_op() == Some('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let e: i32 = match self.toks.get(self.pos) {
            Some(Tok::Num(n)) => {
                n.try_into().map_err(|_| Error::Parse("exponent too large".into()))?
            }
            _ => return Err(Error::Parse("exponent must be an integer".into())),
        };
        self.pos += 1;
        base.pow(if neg { -e } else { e }).map_err(|e| Error::Parse(e.to_string()))
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(RatFunc::constant(self.vars.clone(), Rat::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let i = self
                    .vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| Error::Parse(format!("unknown variable {name:?}")))?;
                Ok(RatFunc::var(self.vars.clone(), i))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}
