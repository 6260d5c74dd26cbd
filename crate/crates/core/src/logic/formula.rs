//! Positive primitive formulas ∃ȳ ⋀ (term ∈ ball) and their parser.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::RMatrix;
use crate::logic::term::{Coord, LambdaTerm};
use crate::ore::{parse_rpoly_at, TwistedPoly};
use crate::series::{Field, LaurentSeries};
use crate::tropical::{Fin, Inf, Trop};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    /// lhs = rhs
    Eq(LambdaTerm, LambdaTerm),
    /// sum ∈ P_radius (radius ∞ is {0})
    In(LambdaTerm, Trop),
}

impl Atom {
    /// The term required to lie in the ball, and the ball radius.
    pub fn as_ball(&self) -> (LambdaTerm, Trop) {
        match self {
            Atom::Eq(l, r) => (l.sub(r), Inf),
            Atom::In(s, rad) => (s.clone(), *rad),
        }
    }
}

/// ∃ bound : ⋀ atoms. Variable index i < free.len() is free, the rest bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PPFormula {
    field: Field,
    pub free: Vec<String>,
    pub bound: Vec<String>,
    pub atoms: Vec<Atom>,
}

/// Matrix form: atom j says u_j(x̄) + Σ_k y_k.a_kj ∈ P_{radii[j]}, with λ-terms on
/// bound variables already eliminated.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub field: Field,
    pub n_free: usize,
    pub u: Vec<LambdaTerm>,
    pub a: RMatrix,
    pub radii: Vec<Trop>,
}

impl Normalized {
    pub fn n_bound(&self) -> usize {
        self.a.rows()
    }
}

/// Conjunction of λ-term equations over free variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QFLambdaFormula {
    pub names: Vec<String>,
    pub eqs: Vec<LambdaTerm>,
}

impl QFLambdaFormula {
    pub fn eval(&self, xs: &[LaurentSeries]) -> bool {
        self.eqs.iter().all(|e| e.eval(xs).is_zero())
    }
}

impl fmt::Display for QFLambdaFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.eqs.is_empty() {
            return write!(f, "true");
        }
        let parts: Vec<String> = self.eqs.iter().map(|e| format!("{} = 0", e.display_with(&self.names))).collect();
        write!(f, "{}", parts.join(" /\\ "))
    }
}

impl PPFormula {
    pub fn new(field: Field, free: Vec<String>, bound: Vec<String>, atoms: Vec<Atom>) -> Self {
        PPFormula { field, free, bound, atoms }
    }

    pub fn parse(field: Field, text: &str) -> Result<Self> {
        parse_formula_at(field, text, 0)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn names(&self) -> Vec<String> {
        self.free.iter().chain(&self.bound).cloned().collect()
    }

    /// Reorder and extend free variables to exactly `names` (extra names are unconstrained).
    pub fn with_free(&self, names: &[String]) -> Result<Self> {
        for n in &self.free {
            if !names.contains(n) {
                return Err(Error::Unsupported(format!("free variable {n} not among {names:?}")));
            }
        }
        let nf = names.len();
        let old_nf = self.free.len();
        let remap = |v: usize| {
            if v < old_nf {
                names.iter().position(|n| *n == self.free[v]).unwrap()
            } else {
                v - old_nf + nf
            }
        };
        let atoms = self
            .atoms
            .iter()
            .map(|a| match a {
                Atom::Eq(l, r) => Atom::Eq(l.map_vars(remap), r.map_vars(remap)),
                Atom::In(s, g) => Atom::In(s.map_vars(remap), *g),
            })
            .collect();
        Ok(PPFormula { field: self.field, free: names.to_vec(), bound: self.bound.clone(), atoms })
    }

    /// The formula defining all of K.
    pub fn whole(field: Field, name: &str) -> Self {
        PPFormula { field, free: vec![name.to_string()], bound: vec![], atoms: vec![] }
    }

    fn map_atoms(&self, remap: impl Fn(usize) -> usize) -> Vec<Atom> {
        self.atoms
            .iter()
            .map(|a| match a {
                Atom::Eq(l, r) => Atom::Eq(l.map_vars(&remap), r.map_vars(&remap)),
                Atom::In(s, g) => Atom::In(s.map_vars(&remap), *g),
            })
            .collect()
    }

    /// A + B for one-variable formulas: ∃a, b (x = a + b ∧ A(a) ∧ B(b)).
    pub fn sum(&self, o: &Self) -> Result<Self> {
        if self.free.len() != 1 || o.free.len() != 1 {
            return Err(Error::Unsupported("sums need one free variable on each side".into()));
        }
        let f = self.field;
        let x = self.free[0].clone();
        let mut taken: Vec<String> = vec![x.clone()];
        let mut fresh = |base: &str| {
            let mut n = base.to_string();
            while taken.contains(&n) || self.bound.contains(&n) || o.bound.contains(&n) {
                n.push('\'');
            }
            taken.push(n.clone());
            n
        };
        let (sa, sb) = (fresh("a"), fresh("b"));
        let mut bound = vec![sa, sb];
        for n in self.bound.iter().chain(&o.bound) {
            bound.push(fresh(n));
        }
        let na = self.bound.len();
        let one = TwistedPoly::one(f);
        let mut atoms = vec![Atom::Eq(
            LambdaTerm::var(0, one.clone()),
            LambdaTerm::var(1, one.clone()).add(&LambdaTerm::var(2, one)),
        )];
        atoms.extend(self.map_atoms(|v| if v == 0 { 1 } else { v + 2 }));
        atoms.extend(o.map_atoms(|v| if v == 0 { 2 } else { v + 2 + na }));
        Ok(PPFormula { field: f, free: vec![x], bound, atoms })
    }

    /// A ∧ B on the union of free variables, bound variables renamed apart.
    pub fn conjoin(&self, o: &Self) -> Result<Self> {
        let mut names = self.free.clone();
        for n in &o.free {
            if !names.contains(n) {
                names.push(n.clone());
            }
        }
        let a = self.with_free(&names)?;
        let b = o.with_free(&names)?;
        let nf = names.len();
        let shift = a.bound.len();
        let mut bound = a.bound.clone();
        for n in &b.bound {
            let mut fresh = n.clone();
            while bound.contains(&fresh) || names.contains(&fresh) {
                fresh.push('\'');
            }
            bound.push(fresh);
        }
        let remap = |v: usize| if v < nf { v } else { v + shift };
        let mut atoms = a.atoms.clone();
        atoms.extend(b.atoms.iter().map(|at| match at {
            Atom::Eq(l, r) => Atom::Eq(l.map_vars(remap), r.map_vars(remap)),
            Atom::In(s, g) => Atom::In(s.map_vars(remap), *g),
        }));
        Ok(PPFormula { field: self.field, free: names, bound, atoms })
    }

    /// Add the atom x_i ∈ P_γ for every free variable.
    pub fn and_ball(&self, gamma: Trop) -> Self {
        let mut out = self.clone();
        for i in 0..self.free.len() {
            out.atoms.push(Atom::In(LambdaTerm::var(i, TwistedPoly::one(self.field)), gamma));
        }
        out
    }

    /// Finite ball radii occurring in atoms.
    pub fn finite_radii(&self) -> Vec<i64> {
        self.atoms.iter().filter_map(|a| a.as_ball().1.fin()).collect()
    }

    /// All R-elements occurring in the formula.
    pub fn scalars(&self) -> Vec<TwistedPoly> {
        self.atoms
            .iter()
            .flat_map(|a| {
                let (t, _) = a.as_ball();
                t.parts().map(|(_, r)| r.clone()).collect::<Vec<_>>()
            })
            .collect()
    }

    pub fn normalize(&self) -> Result<Normalized> {
        let f = self.field;
        let nf = self.free.len();
        let nb = self.bound.len();
        let terms: Vec<(LambdaTerm, Trop)> = self.atoms.iter().map(|a| a.as_ball()).collect();
        // level of λ on each bound variable
        let mut levels = vec![0u32; nb];
        for (t, _) in &terms {
            for (c, _) in t.parts() {
                if c.var >= nf {
                    levels[c.var - nf] = levels[c.var - nf].max(c.level);
                }
            }
        }
        let d = f.d() as i64;
        let mut offsets = Vec::with_capacity(nb);
        let mut total = 0usize;
        for &s in &levels {
            offsets.push(total);
            total += d.pow(s) as usize;
        }
        let mut u = Vec::new();
        let mut a = RMatrix::zeros(f, total, terms.len());
        for (j, (t, _)) in terms.iter().enumerate() {
            let mut uj = LambdaTerm::zero(f);
            for (c, r) in t.parts() {
                if c.var < nf {
                    uj = uj.add(&LambdaTerm::coord(*c, r.clone()));
                    continue;
                }
                let b = c.var - nf;
                let single = LambdaTerm::coord(Coord { var: 0, ..*c }, r.clone()).raise_to(levels[b])?;
                for (cc, rr) in single.parts() {
                    let row = offsets[b] + if levels[b] == 0 { 0 } else { cc.index as usize };
                    let cur = a.get(row, j).add(rr);
                    a.set(row, j, cur);
                }
            }
            u.push(uj);
        }
        Ok(Normalized { field: f, n_free: nf, u, a, radii: terms.iter().map(|t| t.1).collect() })
    }
}

fn fmt_radius(r: Trop) -> String {
    match r {
        Inf => "0".into(),
        Fin(g) => format!("P({g})"),
    }
}

impl fmt::Display for PPFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.names();
        if !self.bound.is_empty() {
            write!(f, "E {} : ", self.bound.join(", "))?;
        }
        let atoms: Vec<String> = self
            .atoms
            .iter()
            .map(|a| match a {
                Atom::Eq(l, r) => format!("{} = {}", l.display_with(&names), r.display_with(&names)),
                Atom::In(s, g) => format!("{} in {}", s.display_with(&names), fmt_radius(*g)),
            })
            .collect();
        if atoms.is_empty() {
            return write!(f, "0 = 0");
        }
        write!(f, "{}", atoms.join(" /\\ "))
    }
}

pub fn parse_formula_at(field: Field, text: &str, offset: usize) -> Result<PPFormula> {
    let mut p = FParser { field, src: text.as_bytes(), pos: 0, offset };
    let mut bound = Vec::new();
    p.skip_ws();
    if p.starts_keyword("E") {
        p.pos += 1;
        loop {
            bound.push(p.ident()?);
            p.eat(b',');
            if p.eat(b':') {
                break;
            }
            if p.peek().is_none() {
                return Err(p.err("expected ':' after bound variables"));
            }
        }
    }
    let mut raw_atoms = vec![p.atom()?];
    loop {
        p.skip_ws();
        if p.src[p.pos..].starts_with(b"/\\") {
            p.pos += 2;
            raw_atoms.push(p.atom()?);
        } else {
            break;
        }
    }
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    let mut free: Vec<String> = Vec::new();
    for at in &raw_atoms {
        for side in [&at.0, &at.1] {
            for t in side.iter().flatten() {
                if !bound.contains(&t.name) && !free.contains(&t.name) {
                    free.push(t.name.clone());
                }
            }
        }
    }
    let index = |n: &str| {
        free.iter().position(|x| x == n).unwrap_or_else(|| free.len() + bound.iter().position(|x| x == n).unwrap())
    };
    let build = |raw: &Option<Vec<RawTerm>>| {
        let mut t = LambdaTerm::zero(field);
        for r in raw.iter().flatten() {
            let c = Coord { var: index(&r.name), level: r.level, index: r.index };
            let term = LambdaTerm::coord(c, r.r.clone());
            t = if r.neg { t.sub(&term) } else { t.add(&term) };
        }
        t
    };
    let atoms = raw_atoms
        .iter()
        .map(|(l, r, ball)| match ball {
            Some(g) => Atom::In(build(l), *g),
            None => Atom::Eq(build(l), build(r)),
        })
        .collect();
    Ok(PPFormula { field, free, bound, atoms })
}

struct RawTerm {
    name: String,
    level: u32,
    index: i64,
    r: TwistedPoly,
    neg: bool,
}

type RawAtom = (Option<Vec<RawTerm>>, Option<Vec<RawTerm>>, Option<Trop>);

struct FParser<'a> {
    field: Field,
    src: &'a [u8],
    pos: usize,
    offset: usize,
}

impl FParser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::parse(self.pos + self.offset, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn starts_keyword(&self, kw: &str) -> bool {
        let rest = &self.src[self.pos..];
        rest.starts_with(kw.as_bytes())
            && rest.get(kw.len()).is_none_or(|c| !(c.is_ascii_alphanumeric() || *c == b'_'))
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_' || self.src[self.pos] == b'\'') {
            if self.pos == start && !(self.src[self.pos].is_ascii_alphabetic() || self.src[self.pos] == b'_') {
                break;
            }
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected identifier"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::parse(start + self.offset, "expected integer"))
    }

    fn atom(&mut self) -> Result<RawAtom> {
        let lhs = self.sum()?;
        self.skip_ws();
        if self.eat(b'=') {
            let rhs = self.sum()?;
            return Ok((lhs, rhs, None));
        }
        if self.starts_keyword("in") {
            self.pos += 2;
            let ball = self.ball()?;
            return Ok((lhs, None, Some(ball)));
        }
        Err(self.err("expected '=' or 'in'"))
    }

    fn ball(&mut self) -> Result<Trop> {
        self.skip_ws();
        if self.starts_keyword("O") {
            self.pos += 1;
            return Ok(Fin(0));
        }
        if self.starts_keyword("0") || self.src[self.pos..].starts_with(b"0") {
            self.pos += 1;
            return Ok(Inf);
        }
        if self.src[self.pos..].starts_with(b"P") {
            self.pos += 1;
            self.expect(b'(')?;
            let g = self.int()?;
            self.expect(b')')?;
            return Ok(Fin(g));
        }
        Err(self.err("expected ball O, P(n) or 0"))
    }

    /// None encodes the literal 0.
    fn sum(&mut self) -> Result<Option<Vec<RawTerm>>> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&b'0') {
            self.pos += 1;
            return Ok(None);
        }
        let mut out = Vec::new();
        let mut neg = self.eat(b'-');
        loop {
            let mut t = self.term()?;
            t.neg = neg;
            out.push(t);
            if self.eat(b'+') {
                neg = false;
            } else if self.eat(b'-') {
                neg = true;
            } else {
                return Ok(Some(out));
            }
        }
    }

    fn lambda_or_var(&mut self) -> Result<(String, u32, i64)> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let digits = rest.iter().skip(1).take_while(|c| c.is_ascii_digit()).count();
        let after = rest.get(1 + digits..).map(|r| r.iter().find(|c| !c.is_ascii_whitespace()));
        if rest.first() == Some(&b'L') && digits > 0 && after == Some(Some(&b'(')) {
            let at = self.pos;
            self.pos += 1;
            let n: i64 = std::str::from_utf8(&self.src[self.pos..self.pos + digits]).unwrap().parse().unwrap();
            self.pos += digits;
            let d = self.field.d() as i64;
            if n >= d {
                return Err(Error::parse(at + self.offset, format!("λ index {n} must be below {d}")));
            }
            self.expect(b'(')?;
            let (name, s, m) = self.lambda_or_var()?;
            self.expect(b')')?;
            return Ok((name, s + 1, m + n * d.pow(s)));
        }
        Ok((self.ident()?, 0, 0))
    }

    fn term(&mut self) -> Result<RawTerm> {
        let (name, level, index) = self.lambda_or_var()?;
        let r = if self.eat(b'.') {
            self.skip_ws();
            if self.src.get(self.pos) != Some(&b'(') {
                return Err(self.err("expected '(' after '.'"));
            }
            let start = self.pos + 1;
            let mut depth = 0;
            let mut end = None;
            for (i, &c) in self.src[self.pos..].iter().enumerate() {
                match c {
                    b'(' => depth += 1,
                    b')' => {
                        depth -= 1;
                        if depth == 0 {
                            end = Some(self.pos + i);
                            break;
                        }
                    }
                    _ => {}
                }
            }
            let end = end.ok_or_else(|| self.err("unbalanced parenthesis"))?;
            let text = std::str::from_utf8(&self.src[start..end]).unwrap();
            let r = parse_rpoly_at(self.field, text, start + self.offset)?;
            self.pos = end + 1;
            r
        } else {
            TwistedPoly::one(self.field)
        };
        Ok(RawTerm { name, level, index, r, neg: false })
    }
}
