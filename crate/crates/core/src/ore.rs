//! The ring R of twisted polynomials q = Σ tⁱaᵢ with a·t = t·a^φ, φ(a) = a^d.
//!
//! R acts on the right of 𝔽_d((X)) by x.q = Σ x^(dⁱ)aᵢ.

use std::fmt;

use crate::error::{Error, Result};
use crate::series::{Field, LaurentSeries, DEFAULT_PRECISION};
use crate::tropical::{Fin, Inf, Trop};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwistedPoly {
    field: Field,
    coeffs: Vec<LaurentSeries>,
}

impl TwistedPoly {
    pub fn from_coeffs(field: Field, mut coeffs: Vec<LaurentSeries>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        TwistedPoly { field, coeffs }
    }

    pub fn zero(field: Field) -> Self {
        TwistedPoly { field, coeffs: Vec::new() }
    }

    pub fn one(field: Field) -> Self {
        Self::constant(LaurentSeries::one(field))
    }

    pub fn constant(a: LaurentSeries) -> Self {
        Self::monomial(0, a)
    }

    /// tⁱ·a.
    pub fn monomial(i: usize, a: LaurentSeries) -> Self {
        let f = a.field();
        let mut coeffs = vec![LaurentSeries::zero(f); i];
        coeffs.push(a);
        Self::from_coeffs(f, coeffs)
    }

    pub fn t_pow(field: Field, i: usize) -> Self {
        Self::monomial(i, LaurentSeries::one(field))
    }

    /// The constant X^n.
    pub fn x_pow(field: Field, n: i64) -> Self {
        Self::constant(LaurentSeries::x_pow(field, n))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[LaurentSeries] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> LaurentSeries {
        self.coeffs.get(i).cloned().unwrap_or_else(|| LaurentSeries::zero(self.field))
    }

    /// Degree in t; −1 for zero.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_separable(&self) -> bool {
        self.coeffs.first().is_some_and(|a| !a.is_zero())
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_exact())
    }

    pub fn lead(&self) -> Option<&LaurentSeries> {
        self.coeffs.last()
    }

    /// Largest e with q ∈ t^e R; None for zero.
    pub fn t_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// q' with q = t^e q'.
    pub fn strip_t(&self, e: usize) -> Self {
        debug_assert!(self.coeffs.iter().take(e).all(|c| c.is_zero()));
        Self::from_coeffs(self.field, self.coeffs.iter().skip(e).cloned().collect())
    }

    /// Valuations of the nonzero coefficients, indexed by degree.
    pub fn coeff_valuations(&self) -> Vec<(usize, i64)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.leading().map(|(v, _)| (i, v)))
            .collect()
    }

    /// Minimal precision among coefficients.
    pub fn prec(&self) -> Trop {
        self.coeffs.iter().map(|c| c.prec()).min().unwrap_or(Inf)
    }

    /// Equality of all coefficients up to their precision.
    pub fn agrees_with(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }

    /// Agreement of every coefficient modulo X^prec.
    pub fn agrees_to(&self, o: &Self, prec: i64) -> bool {
        self.sub(o).coeffs.iter().all(|c| c.truncate(Fin(prec)).is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.sub(b))
    }


    fn zip(&self, o: &Self, f: impl Fn(&LaurentSeries, &LaurentSeries) -> LaurentSeries) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::from_coeffs(self.field, (0..n).map(|i| f(&self.coeff(i), &o.coeff(i))).collect())
    }

    pub fn neg(&self) -> Self {
        Self::from_coeffs(self.field, self.coeffs.iter().map(|c| c.neg()).collect())
    }

    /// q·a for a constant a.
    pub fn mul_const(&self, a: &LaurentSeries) -> Self {
        Self::from_coeffs(self.field, self.coeffs.iter().map(|c| c.mul(a)).collect())
    }

    /// a·q = Σ tⁱ a^(dⁱ) aᵢ.
    pub fn const_mul(&self, a: &LaurentSeries) -> Self {
        Self::from_coeffs(
            self.field,
            self.coeffs.iter().enumerate().map(|(i, c)| a.frob_pow(i as u32).mul(c)).collect(),
        )
    }

    /// Ring product: (tⁱa)(tʲb) = t^(i+j) a^(dʲ) b.
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.field);
        }
        let mut out = vec![LaurentSeries::zero(self.field); self.coeffs.len() + o.coeffs.len() - 1];
        for (j, b) in o.coeffs.iter().enumerate() {
            if b.is_exact_zero() {
                continue;
            }
            for (i, a) in self.coeffs.iter().enumerate() {
                if a.is_exact_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.frob_pow(j as u32).mul(b));
            }
        }
        Self::from_coeffs(self.field, out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.field), |acc, _| acc.mul(self))
    }

    /// x.q = Σ x^(dⁱ)aᵢ.
    pub fn apply(&self, x: &LaurentSeries) -> LaurentSeries {
        let mut acc = LaurentSeries::zero(self.field);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            acc = acc.add(&x.frob_pow(i as u32).mul(a));
        }
        acc
    }

    /// r = q·quot + rem with deg rem < deg q; quotient coefficients are
    /// computed modulo X^cap when inexact.
    pub fn divmod_right_prec(r: &Self, q: &Self, cap: i64) -> Result<(Self, Self)> {
        let f = r.field;
        let Some(a) = q.lead() else {
            return Err(Error::DivisionByZero);
        };
        let m = q.degree();
        let mut rem = r.clone();
        let mut quot = Self::zero(f);
        let mut guard = 0;
        while rem.degree() >= m {
            let n = rem.degree();
            let c = rem.lead().unwrap();
            let e = (n - m) as u32;
            let ae = a.frob_pow(e);
            // the residual c - ae·b must vanish below X^cap
            let va = ae.leading().map_or(0, |(v, _)| v);
            let b = c.div(&ae, cap.max(cap - va))?;
            let step = Self::monomial(e as usize, b);
            quot = quot.add(&step);
            let next = rem.sub(&q.mul(&step));
            if next.degree() >= n {
                // top coefficient only known to precision: drop it
                let mut cs = next.coeffs.clone();
                cs.truncate(n as usize);
                rem = Self::from_coeffs(f, cs);
            } else {
                rem = next;
            }
            guard += 1;
            if guard > 10_000 {
                return Err(Error::InsufficientPrecision("division does not terminate".into()));
            }
        }
        Ok((quot, rem))
    }

    pub fn divmod_right(r: &Self, q: &Self) -> Result<(Self, Self)> {
        Self::divmod_right_prec(r, q, DEFAULT_PRECISION)
    }

    /// Monic right gcd (generator of qR + rR) and right lcm (generator of qR ∩ rR).
    pub fn gcd_lcm(q: &Self, r: &Self) -> Result<(Self, Self)> {
        if q.is_zero() || r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = q.field;
        // invariant: a = q·ua + r·va, b = q·ub + r·vb
        let (mut a, mut b) = (q.clone(), r.clone());
        let (mut ua, mut ub) = (Self::one(f), Self::zero(f));
        let (mut va, mut vb) = (Self::zero(f), Self::one(f));
        while !b.is_zero() {
            let (quot, rem) = Self::divmod_right(&a, &b)?;
            let un = ua.sub(&ub.mul(&quot));
            let vn = va.sub(&vb.mul(&quot));
            a = std::mem::replace(&mut b, rem);
            ua = std::mem::replace(&mut ub, un);
            va = std::mem::replace(&mut vb, vn);
        }
        let _ = (ua, va, vb);
        let lead_inv = a.lead().unwrap().inv(DEFAULT_PRECISION)?;
        let g = a.mul_const(&lead_inv);
        let l = q.mul(&ub);
        let l = match l.lead() {
            Some(c) => l.mul_const(&c.inv(DEFAULT_PRECISION)?),
            None => l,
        };
        Ok((g, l))
    }

    /// Components q_i, i < dⁿ, with q = Σ q_i·Xⁱ.
    pub fn alpha_decompose(&self, n: u32) -> Vec<Self> {
        let q = (self.field.d() as i64).pow(n);
        (0..q)
            .map(|i| {
                Self::from_coeffs(
                    self.field,
                    self.coeffs.iter().map(|a| a.lambda(n, i).frob_pow(n)).collect(),
                )
            })
            .collect()
    }

    /// ⁿ√(q_i) = Σ t^k λ⁽ⁿ⁾_i(a_k); satisfies tⁿ q = Σ_i ⁿ√(q_i)·tⁿ·Xⁱ.
    pub fn root_component(&self, n: u32, i: i64) -> Self {
        Self::from_coeffs(self.field, self.coeffs.iter().map(|a| a.lambda(n, i)).collect())
    }

    /// Σ_i ⁿ√(q_i)·Xⁱ, i.e. each coefficient a ↦ Σ_i λ⁽ⁿ⁾_i(a)·Xⁱ.
    pub fn nth_root_map(&self, n: u32) -> Self {
        let q = (self.field.d() as i64).pow(n);
        (0..q).fold(Self::zero(self.field), |acc, i| {
            acc.add(&self.root_component(n, i).mul_const(&LaurentSeries::x_pow(self.field, i)))
        })
    }

    pub fn parse(field: Field, text: &str) -> Result<Self> {
        parse_rpoly_at(field, text, 0)
    }
}

impl fmt::Display for TwistedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (i, a) in self.coeffs.iter().enumerate().rev() {
            if a.is_exact_zero() {
                continue;
            }
            let tp = match i {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{i}"),
            };
            let cs = a.to_string();
            let simple = a.terms().count() <= 1 && a.is_exact();
            parts.push(match (i, cs.as_str()) {
                (0, _) => cs,
                (_, "1") => tp,
                _ if simple => format!("{tp}*{cs}"),
                _ => format!("{tp}*({cs})"),
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Parse an R-expression; `offset` is added to error positions.
pub fn parse_rpoly_at(field: Field, text: &str, offset: usize) -> Result<TwistedPoly> {
    let mut p = Parser { field, src: text.as_bytes(), pos: 0, offset, o_prec: Inf };
    let q = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(match p.o_prec {
        Inf => q,
        prec => TwistedPoly::from_coeffs(field, q.coeffs.iter().map(|c| c.truncate(prec)).collect()),
    })
}

/// Parse a series literal such as `X^-1 + 1 + X^3 + O(X^8)`.
pub fn parse_series(field: Field, text: &str) -> Result<LaurentSeries> {
    let mut p = Parser { field, src: text.as_bytes(), pos: 0, offset: 0, o_prec: Inf };
    let q = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    if q.degree() > 0 {
        return Err(Error::parse(0, "series literal must not contain t"));
    }
    Ok(q.coeff(0).truncate(p.o_prec))
}

struct Parser<'a> {
    field: Field,
    src: &'a [u8],
    pos: usize,
    offset: usize,
    o_prec: Trop,
}

impl Parser<'_> {
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

    fn expr(&mut self) -> Result<TwistedPoly> {
        let neg = self.eat(b'-');
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<TwistedPoly> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let neg = self.eat(b'-');
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let v: i64 = std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("integer out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn exponent(&mut self) -> Result<i64> {
        if !self.eat(b'^') {
            return Ok(1);
        }
        if self.eat(b'(') {
            let v = self.int()?;
            self.expect(b')')?;
            Ok(v)
        } else {
            self.int()
        }
    }

    fn factor(&mut self) -> Result<TwistedPoly> {
        let f = self.field;
        let Some(c) = self.peek() else {
            return Err(self.err("unexpected end of input"));
        };
        let at = self.pos;
        match c {
            b'0'..=b'9' => {
                let n = self.int()?;
                Ok(TwistedPoly::constant(LaurentSeries::constant(f, f.from_int(n))))
            }
            b'X' => {
                self.pos += 1;
                let e = self.exponent()?;
                Ok(TwistedPoly::x_pow(f, e))
            }
            b't' => {
                self.pos += 1;
                let e = self.exponent()?;
                if e < 0 {
                    self.pos = at;
                    return Err(self.err("negative power of t"));
                }
                Ok(TwistedPoly::t_pow(f, e as usize))
            }
            b'g' => {
                self.pos += 1;
                let e = self.exponent()?;
                let order = f.d() as i64 - 1;
                let g = f.pow(f.generator(), e.rem_euclid(order.max(1)) as u64);
                Ok(TwistedPoly::constant(LaurentSeries::constant(f, g)))
            }
            b'O' => {
                self.pos += 1;
                self.expect(b'(')?;
                self.expect(b'X')?;
                let e = self.exponent()?;
                self.expect(b')')?;
                self.o_prec = self.o_prec.min(Fin(e));
                Ok(TwistedPoly::zero(f))
            }
            b'(' => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                if self.peek() == Some(b'^') {
                    let e = self.exponent()?;
                    if e < 0 {
                        return Err(self.err("negative power of a parenthesized expression"));
                    }
                    return Ok(inner.pow(e as u32));
                }
                Ok(inner)
            }
            _ => Err(self.err(&format!("unexpected character '{}'", c as char))),
        }
    }
}
