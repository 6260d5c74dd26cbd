use std::fmt;

use crate::error::{Error, Result};
use crate::series::Field;
use crate::tropical::{ceil_div, Fin, Inf, Trop};

/// A Laurent series over 𝔽_d known modulo X^prec.
///
/// `coeffs[j]` is the coefficient of X^(start + j). Stored coefficients are
/// trimmed on both ends and all lie below `prec`. `prec == Inf` means the
/// value is an exact Laurent polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentSeries {
    field: Field,
    start: i64,
    coeffs: Vec<u32>,
    prec: Trop,
}

impl LaurentSeries {
    /// Build from raw coefficients starting at X^start, truncating at `prec`.
    pub fn from_coeffs(field: Field, start: i64, coeffs: Vec<u32>, prec: Trop) -> Self {
        let mut s = LaurentSeries { field, start, coeffs, prec };
        s.normalize();
        s
    }

    pub fn zero(field: Field) -> Self {
        LaurentSeries { field, start: 0, coeffs: Vec::new(), prec: Inf }
    }

    /// All known coefficients vanish, but only modulo X^prec.
    pub fn known_zero(field: Field, prec: i64) -> Self {
        LaurentSeries { field, start: 0, coeffs: Vec::new(), prec: Fin(prec) }
    }

    pub fn one(field: Field) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: Field, c: u32) -> Self {
        Self::monomial(field, c, 0)
    }

    pub fn monomial(field: Field, c: u32, n: i64) -> Self {
        Self::from_coeffs(field, n, vec![c], Inf)
    }

    /// X^n.
    pub fn x_pow(field: Field, n: i64) -> Self {
        Self::monomial(field, 1, n)
    }

    /// Exact polynomial from (exponent, coefficient) pairs; repeated exponents add.
    pub fn from_terms(field: Field, terms: &[(i64, u32)]) -> Self {
        let mut acc = Self::zero(field);
        for &(n, c) in terms {
            acc = acc.add(&Self::monomial(field, c, n));
        }
        acc
    }

    fn normalize(&mut self) {
        if let Fin(p) = self.prec {
            let keep = (p - self.start).clamp(0, self.coeffs.len() as i64) as usize;
            self.coeffs.truncate(keep);
        }
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().position(|&c| c != 0).unwrap_or(self.coeffs.len());
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.start += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.start = 0;
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn prec(&self) -> Trop {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec == Inf
    }

    /// No nonzero coefficient is known (exact zero or zero to precision).
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.prec == Inf
    }

    /// X-adic valuation; ∞ for the exact zero.
    pub fn valuation(&self) -> Result<Trop> {
        if !self.coeffs.is_empty() {
            Ok(Fin(self.start))
        } else if self.prec == Inf {
            Ok(Inf)
        } else {
            Err(Error::InsufficientPrecision(format!(
                "all coefficients below X^{} vanish",
                self.prec
            )))
        }
    }

    /// A certified lower bound for the valuation.
    pub fn val_lower_bound(&self) -> Trop {
        if self.coeffs.is_empty() {
            self.prec
        } else {
            Fin(self.start)
        }
    }

    /// Index and coefficient of the lowest nonzero term.
    pub fn leading(&self) -> Option<(i64, u32)> {
        self.coeffs.first().map(|&c| (self.start, c))
    }

    /// One past the highest stored exponent.
    pub fn support_end(&self) -> i64 {
        self.start + self.coeffs.len() as i64
    }

    pub fn coeff(&self, n: i64) -> u32 {
        let j = n - self.start;
        if j < 0 || j >= self.coeffs.len() as i64 {
            0
        } else {
            self.coeffs[j as usize]
        }
    }

    /// Nonzero terms as (exponent, coefficient), ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i64, u32)> + '_ {
        let start = self.start;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(j, &c)| (start + j as i64, c))
    }

    pub fn is_monomial(&self) -> bool {
        self.terms().count() == 1
    }

    /// Reduce precision to at most `prec`.
    pub fn truncate(&self, prec: Trop) -> Self {
        Self::from_coeffs(self.field, self.start, self.coeffs.clone(), self.prec.min(prec))
    }

    /// Forget precision bookkeeping and treat stored coefficients as exact.
    pub fn to_exact(&self) -> Self {
        LaurentSeries { prec: Inf, ..self.clone() }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.combine(o, true)
    }

    fn combine(&self, o: &Self, negate: bool) -> Self {
        let f = self.field;
        let prec = self.prec.min(o.prec);
        if self.coeffs.is_empty() && !negate {
            return o.truncate(prec);
        }
        if o.coeffs.is_empty() {
            return self.truncate(prec);
        }
        let lo = self.start.min(o.start);
        let hi = self.support_end().max(o.support_end());
        let mut out = vec![0u32; (hi - lo) as usize];
        for (n, c) in self.terms() {
            out[(n - lo) as usize] = c;
        }
        for (n, c) in o.terms() {
            let slot = &mut out[(n - lo) as usize];
            *slot = if negate { f.sub(*slot, c) } else { f.add(*slot, c) };
        }
        Self::from_coeffs(f, lo, out, prec)
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        Self::from_coeffs(f, self.start, self.coeffs.iter().map(|&c| f.neg(c)).collect(), self.prec)
    }

    /// Multiply by a constant of 𝔽_d.
    pub fn scale(&self, c: u32) -> Self {
        let f = self.field;
        if c == 0 {
            return Self::zero(f).truncate(self.prec);
        }
        Self::from_coeffs(f, self.start, self.coeffs.iter().map(|&x| f.mul(x, c)).collect(), self.prec)
    }

    /// Multiply by X^n.
    pub fn shift(&self, n: i64) -> Self {
        LaurentSeries {
            start: if self.coeffs.is_empty() { 0 } else { self.start + n },
            prec: self.prec + n,
            ..self.clone()
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let f = self.field;
        let prec = (self.prec + o.val_lower_bound()).min(o.prec + self.val_lower_bound());
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return match prec {
                Inf => Self::zero(f),
                Fin(p) => Self::known_zero(f, p),
            };
        }
        let lo = self.start + o.start;
        let mut hi = self.support_end() + o.support_end() - 1;
        if let Fin(p) = prec {
            hi = hi.min(p);
        }
        if hi <= lo {
            return Self::from_coeffs(f, 0, Vec::new(), prec);
        }
        let mut out = vec![0u32; (hi - lo) as usize];
        for (i, a) in self.terms() {
            for (j, b) in o.terms() {
                let n = i + j - lo;
                if n >= out.len() as i64 {
                    break;
                }
                let slot = &mut out[n as usize];
                *slot = f.add(*slot, f.mul(a, b));
            }
        }
        Self::from_coeffs(f, lo, out, prec)
    }

    /// self / o, computed modulo X^cap at most. Exact when `o` is an exact monomial
    /// and `self` is exact.
    pub fn div(&self, o: &Self, cap: i64) -> Result<Self> {
        let f = self.field;
        let (vb, lb) = match o.leading() {
            Some(x) => x,
            None if o.prec == Inf => return Err(Error::DivisionByZero),
            None => {
                return Err(Error::InsufficientPrecision(format!(
                    "divisor vanishes modulo X^{}",
                    o.prec
                )))
            }
        };
        let rb = o.prec - vb;
        if o.is_monomial() && o.is_exact() {
            let inv = f.inv(lb)?;
            return Ok(self.scale(inv).shift(-vb));
        }
        if self.is_exact_zero() {
            return Ok(Self::zero(f));
        }
        let va = self.val_lower_bound();
        let ra = self.prec + (-va.fin().unwrap_or(0));
        let natural = match va {
            Inf => Inf,
            Fin(a) => ra.min(rb) + (a - vb),
        };
        let prec = natural.min(Fin(cap));
        let Fin(p) = prec else { unreachable!() };
        let Some((a0, _)) = self.leading() else {
            return Ok(Self::known_zero(f, p));
        };
        let q0 = a0 - vb;
        if p <= q0 {
            return Ok(Self::known_zero(f, p));
        }
        let n = (p - q0) as usize;
        let inv_lb = f.inv(lb)?;
        let ub: Vec<u32> = (0..n as i64).map(|i| o.coeff(vb + i)).collect();
        let mut q = vec![0u32; n];
        for m in 0..n {
            let mut acc = self.coeff(a0 + m as i64);
            for i in 1..=m {
                if ub[i] != 0 && q[m - i] != 0 {
                    acc = f.sub(acc, f.mul(ub[i], q[m - i]));
                }
            }
            q[m] = f.mul(acc, inv_lb);
        }
        Ok(Self::from_coeffs(f, q0, q, prec))
    }

    pub fn inv(&self, cap: i64) -> Result<Self> {
        Self::one(self.field).div(self, cap)
    }

    /// x^(d^i): X^n ↦ X^(n d^i), coefficients fixed.
    pub fn frob_pow(&self, i: u32) -> Self {
        if i == 0 {
            return self.clone();
        }
        let q = (self.field.d() as i64).pow(i);
        let prec = match self.prec {
            Fin(p) => Fin(p * q),
            Inf => Inf,
        };
        if self.coeffs.is_empty() {
            return LaurentSeries { prec, ..self.clone() };
        }
        let mut out = vec![0u32; (self.coeffs.len() - 1) * q as usize + 1];
        for (j, &c) in self.coeffs.iter().enumerate() {
            out[j * q as usize] = c;
        }
        Self::from_coeffs(self.field, self.start * q, out, prec)
    }

    /// Level-s coordinate λ^(s)_n(x) = Σ_{m ≡ n mod d^s} c_m X^((m-n)/d^s), 0 ≤ n < d^s.
    pub fn lambda(&self, s: u32, n: i64) -> Self {
        let q = (self.field.d() as i64).pow(s);
        debug_assert!((0..q).contains(&n));
        let prec = match self.prec {
            Fin(p) => Fin(ceil_div(p - n, q)),
            Inf => Inf,
        };
        let terms: Vec<(i64, u32)> = self
            .terms()
            .filter(|(m, _)| (m - n).rem_euclid(q) == 0)
            .map(|(m, c)| ((m - n) / q, c))
            .collect();
        let Some(&(lo, _)) = terms.first() else {
            return Self::from_coeffs(self.field, 0, Vec::new(), prec);
        };
        let hi = terms.last().unwrap().0;
        let mut out = vec![0u32; (hi - lo + 1) as usize];
        for (m, c) in terms {
            out[(m - lo) as usize] = c;
        }
        Self::from_coeffs(self.field, lo, out, prec)
    }

    /// λ_i at level 1.
    pub fn lambda_i(&self, i: u32) -> Self {
        self.lambda(1, i as i64)
    }

    /// Exact equality of stored data up to the smaller precision.
    pub fn agrees_with(&self, o: &Self) -> bool {
        let prec = self.prec.min(o.prec);
        self.truncate(prec).sub(&o.truncate(prec)).is_zero()
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = self.field;
        let mut parts: Vec<String> = self
            .terms()
            .map(|(n, c)| {
                let cs = field.fmt_elem(c);
                match (n, c) {
                    (0, _) => cs,
                    (1, 1) => "X".into(),
                    (_, 1) => format!("X^{n}"),
                    (1, _) => format!("{cs}*X"),
                    _ => format!("{cs}*X^{n}"),
                }
            })
            .collect();
        if let Fin(p) = self.prec {
            parts.push(format!("O(X^{p})"));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + "))
    }
}
