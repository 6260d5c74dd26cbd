//! Boolean combinations of invariant sentences |[A] / [B]| op m.

use std::cmp::Ordering;
use std::fmt;

use crate::decide::invariant::invariant;
use crate::decide::oracle::Invariant;
use crate::error::{Error, Result};
use crate::logic::{parse_formula_at, PPFormula};
use crate::series::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    fn holds(self, o: Ordering) -> bool {
        match self {
            CmpOp::Eq => o == Ordering::Equal,
            CmpOp::Ne => o != Ordering::Equal,
            CmpOp::Lt => o == Ordering::Less,
            CmpOp::Le => o != Ordering::Greater,
            CmpOp::Gt => o == Ordering::Greater,
            CmpOp::Ge => o != Ordering::Less,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sentence {
    /// |A/(A∧B)| op bound; bound None is ∞.
    Cmp { a: PPFormula, b: PPFormula, op: CmpOp, bound: Option<u64> },
    Not(Box<Sentence>),
    And(Box<Sentence>, Box<Sentence>),
    Or(Box<Sentence>, Box<Sentence>),
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sentence::Cmp { a, b, op, bound } => {
                let m = bound.map_or("inf".to_string(), |m| m.to_string());
                write!(f, "|[{a}] / [{b}]| {} {m}", op.symbol())
            }
            Sentence::Not(s) => write!(f, "not ({s})"),
            Sentence::And(l, r) => write!(f, "({l}) and ({r})"),
            Sentence::Or(l, r) => write!(f, "({l}) or ({r})"),
        }
    }
}

fn compare(inv: &Invariant, d: u32, bound: Option<u64>) -> Ordering {
    match (inv.count(d), bound) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Greater,
        (Some(_), None) => Ordering::Less,
        (Some(c), Some(m)) => c.cmp(&m),
    }
}

pub fn evaluate_sentence(s: &Sentence) -> Result<bool> {
    Ok(match s {
        Sentence::Cmp { a, b, op, bound } => {
            let inv = invariant(a, b)?;
            op.holds(compare(&inv, a.field().d(), *bound))
        }
        Sentence::Not(x) => !evaluate_sentence(x)?,
        Sentence::And(l, r) => evaluate_sentence(l)? && evaluate_sentence(r)?,
        Sentence::Or(l, r) => evaluate_sentence(l)? || evaluate_sentence(r)?,
    })
}

pub fn parse_sentence(field: Field, text: &str) -> Result<Sentence> {
    let mut p = SParser { field, src: text, pos: 0 };
    let s = p.or()?;
    p.ws();
    if p.pos != text.len() {
        return Err(Error::parse(p.pos, "trailing input"));
    }
    Ok(s)
}

struct SParser<'a> {
    field: Field,
    src: &'a str,
    pos: usize,
}

impl SParser<'_> {
    fn ws(&mut self) {
        while self.rest().starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn keyword(&mut self, k: &str) -> bool {
        self.ws();
        let r = self.rest();
        if r.starts_with(k) && !r[k.len()..].starts_with(|c: char| c.is_alphanumeric()) {
            self.pos += k.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        self.ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected '{s}'")))
        }
    }

    fn or(&mut self) -> Result<Sentence> {
        let mut l = self.and()?;
        while self.keyword("or") {
            l = Sentence::Or(Box::new(l), Box::new(self.and()?));
        }
        Ok(l)
    }

    fn and(&mut self) -> Result<Sentence> {
        let mut l = self.unary()?;
        while self.keyword("and") {
            l = Sentence::And(Box::new(l), Box::new(self.unary()?));
        }
        Ok(l)
    }

    fn unary(&mut self) -> Result<Sentence> {
        if self.keyword("not") {
            return Ok(Sentence::Not(Box::new(self.unary()?)));
        }
        self.ws();
        if self.rest().starts_with('(') {
            self.pos += 1;
            let s = self.or()?;
            self.expect(")")?;
            return Ok(s);
        }
        self.cmp()
    }

    fn formula(&mut self) -> Result<PPFormula> {
        self.expect("[")?;
        let start = self.pos;
        let len = self.rest().find(']').ok_or_else(|| Error::parse(start, "unclosed '['"))?;
        let phi = parse_formula_at(self.field, &self.src[start..start + len], start)?;
        self.pos = start + len + 1;
        Ok(phi)
    }

    fn cmp(&mut self) -> Result<Sentence> {
        self.expect("|")?;
        let a = self.formula()?;
        self.expect("/")?;
        let b = self.formula()?;
        self.expect("|")?;
        self.ws();
        let op = [("<=", CmpOp::Le), (">=", CmpOp::Ge), ("!=", CmpOp::Ne), ("=", CmpOp::Eq), ("<", CmpOp::Lt), (">", CmpOp::Gt)]
            .into_iter()
            .find(|(s, _)| self.rest().starts_with(s))
            .ok_or_else(|| Error::parse(self.pos, "expected comparison"))?;
        self.pos += op.0.len();
        self.ws();
        let bound = if self.keyword("inf") {
            None
        } else {
            let digits: String = self.rest().chars().take_while(char::is_ascii_digit).collect();
            if digits.is_empty() {
                return Err(Error::parse(self.pos, "expected integer or inf"));
            }
            self.pos += digits.len();
            Some(digits.parse().map_err(|_| Error::parse(self.pos, "integer too large"))?)
        };
        Ok(Sentence::Cmp { a, b, op: op.1, bound })
    }
}
