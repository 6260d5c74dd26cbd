//! λ-terms in normal form Σ λ⁽ˢ⁾ₙ(x_v).r.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ore::TwistedPoly;
use crate::series::{Field, LaurentSeries};
use crate::tropical::{Fin, Inf, Trop};

/// Maximal λ-level before reporting overflow.
pub const MAX_LAMBDA_LEVEL: u32 = 8;

/// λ⁽ˢ⁾ₙ applied to variable `var`; level 0 is the variable itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coord {
    pub var: usize,
    pub level: u32,
    pub index: i64,
}

impl Coord {
    pub fn plain(var: usize) -> Self {
        Coord { var, level: 0, index: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LambdaTerm {
    field: Field,
    parts: BTreeMap<Coord, TwistedPoly>,
}

impl LambdaTerm {
    pub fn zero(field: Field) -> Self {
        LambdaTerm { field, parts: BTreeMap::new() }
    }

    /// x_var.r
    pub fn var(var: usize, r: TwistedPoly) -> Self {
        Self::coord(Coord::plain(var), r)
    }

    pub fn coord(c: Coord, r: TwistedPoly) -> Self {
        let mut t = Self::zero(r.field());
        if !r.is_zero() {
            t.parts.insert(c, r);
        }
        t
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn parts(&self) -> impl Iterator<Item = (&Coord, &TwistedPoly)> {
        self.parts.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn max_level(&self) -> u32 {
        self.parts.keys().map(|c| c.level).max().unwrap_or(0)
    }

    pub fn vars(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.parts.keys().map(|c| c.var).collect();
        v.dedup();
        v
    }

    fn insert_add(&mut self, c: Coord, r: TwistedPoly) {
        let sum = match self.parts.remove(&c) {
            Some(old) => old.add(&r),
            None => r,
        };
        if !sum.is_zero() {
            self.parts.insert(c, sum);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (c, r) in &o.parts {
            out.insert_add(*c, r.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LambdaTerm { field: self.field, parts: self.parts.iter().map(|(c, r)| (*c, r.neg())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// (u).s
    pub fn mul_r(&self, s: &TwistedPoly) -> Self {
        let mut out = Self::zero(self.field);
        for (c, r) in &self.parts {
            out.insert_add(*c, r.mul(s));
        }
        out
    }

    /// Rename variables.
    pub fn map_vars(&self, f: impl Fn(usize) -> usize) -> Self {
        let mut out = Self::zero(self.field);
        for (c, r) in &self.parts {
            out.insert_add(Coord { var: f(c.var), ..*c }, r.clone());
        }
        out
    }

    /// λ⁽ᵉ⁾ᵥ of this term:
    /// λᵥ(z.r) = Σ_w λ_w(z).ᵉ√((X^w r)_v) and λ⁽ᵉ⁾_w ∘ λ⁽ˢ⁾ₙ = λ⁽ˢ⁺ᵉ⁾_{n + w dˢ}.
    pub fn lambda(&self, e: u32, v: i64) -> Result<Self> {
        let f = self.field;
        let d = f.d() as i64;
        let q = d.pow(e);
        let mut out = Self::zero(f);
        for (c, r) in &self.parts {
            let level = c.level + e;
            if level > MAX_LAMBDA_LEVEL {
                return Err(Error::LambdaLevelOverflow(level));
            }
            let ds = d.pow(c.level);
            for w in 0..q {
                let root = r.mul_const_left_x(w).root_component(e, v);
                if root.is_zero() {
                    continue;
                }
                out.insert_add(Coord { var: c.var, level, index: c.index + w * ds }, root);
            }
        }
        Ok(out)
    }

    /// Rewrite every part at level exactly `level` (≥ current levels).
    pub fn raise_to(&self, level: u32) -> Result<Self> {
        if level > MAX_LAMBDA_LEVEL {
            return Err(Error::LambdaLevelOverflow(level));
        }
        let f = self.field;
        let d = f.d() as i64;
        let mut out = Self::zero(f);
        for (c, r) in &self.parts {
            debug_assert!(c.level <= level);
            let e = level - c.level;
            let ds = d.pow(c.level);
            let te = TwistedPoly::t_pow(f, e as usize);
            for w in 0..d.pow(e) {
                let s = te.mul(&TwistedPoly::x_pow(f, w)).mul(r);
                out.insert_add(Coord { var: c.var, level, index: c.index + w * ds }, s);
            }
        }
        Ok(out)
    }

    pub fn eval(&self, xs: &[LaurentSeries]) -> LaurentSeries {
        let mut acc = LaurentSeries::zero(self.field);
        for (c, r) in &self.parts {
            let x = if c.level == 0 { xs[c.var].clone() } else { xs[c.var].lambda(c.level, c.index) };
            acc = acc.add(&r.apply(&x));
        }
        acc
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.parts.is_empty() {
            return "0".into();
        }
        let d = self.field.d() as i64;
        let parts: Vec<String> = self
            .parts
            .iter()
            .map(|(c, r)| {
                let mut s = names[c.var].clone();
                let mut idx = c.index;
                for _ in 0..c.level {
                    s = format!("L{}({s})", idx % d);
                    idx /= d;
                }
                if *r == TwistedPoly::one(self.field) {
                    s
                } else if c.level == 0 && s.contains(' ') {
                    format!("({s}).({r})")
                } else {
                    format!("{s}.({r})")
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl TwistedPoly {
    /// X^w·self.
    pub(crate) fn mul_const_left_x(&self, w: i64) -> TwistedPoly {
        self.const_mul(&LaurentSeries::x_pow(self.field(), w))
    }
}

/// Smallest β with β·r ≥ ε; None when r = 0 (no constraint).
pub fn trop_preimage(r: &TwistedPoly, eps: Trop) -> Option<Trop> {
    if r.is_zero() {
        return None;
    }
    let Fin(e) = eps else { return Some(Inf) };
    let d = r.field().d() as i64;
    r.coeff_valuations()
        .into_iter()
        .map(|(i, v)| Fin(crate::tropical::ceil_div(e - v, d.pow(i as u32))))
        .max()
}
