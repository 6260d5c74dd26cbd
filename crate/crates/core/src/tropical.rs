//! Tropical integers Γ = ℤ ∪ {∞}, balls, and the min-plus action of R.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ore::TwistedPoly;
use crate::series::LaurentSeries;

/// An element of ℤ ∪ {∞}. `Fin < Inf` and ∞ absorbs addition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Trop {
    Fin(i64),
    Inf,
}

pub use Trop::{Fin, Inf};

impl Trop {
    pub fn is_inf(self) -> bool {
        self == Inf
    }
    pub fn fin(self) -> Option<i64> {
        match self {
            Fin(v) => Some(v),
            Inf => None,
        }
    }
    /// Multiply by a positive integer factor (used for d^i·γ).
    pub fn scale(self, f: i64) -> Trop {
        match self {
            Fin(v) => Fin(v * f),
            Inf => Inf,
        }
    }
}

impl From<i64> for Trop {
    fn from(v: i64) -> Self {
        Fin(v)
    }
}

impl Add for Trop {
    type Output = Trop;
    fn add(self, o: Trop) -> Trop {
        match (self, o) {
            (Fin(a), Fin(b)) => Fin(a + b),
            _ => Inf,
        }
    }
}

impl Add<i64> for Trop {
    type Output = Trop;
    fn add(self, o: i64) -> Trop {
        self + Fin(o)
    }
}

impl Sub<i64> for Trop {
    type Output = Trop;
    fn sub(self, o: i64) -> Trop {
        self + Fin(-o)
    }
}

impl Neg for Trop {
    type Output = Trop;
    /// Only meaningful on finite values; ∞ stays ∞.
    fn neg(self) -> Trop {
        match self {
            Fin(v) => Fin(-v),
            Inf => Inf,
        }
    }
}

impl fmt::Display for Trop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fin(v) => write!(f, "{v}"),
            Inf => write!(f, "inf"),
        }
    }
}

impl Serialize for Trop {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Fin(v) => s.serialize_i64(*v),
            Inf => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Trop {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            I(i64),
            S(String),
        }
        match Raw::deserialize(de)? {
            Raw::I(v) => Ok(Fin(v)),
            Raw::S(s) if s == "inf" => Ok(Inf),
            Raw::S(s) => Err(serde::de::Error::custom(format!("bad tropical integer {s:?}"))),
        }
    }
}

pub fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

pub fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

/// Radius returned for degree-0 polynomials, which act bijectively everywhere.
pub const UNBOUNDED_RADIUS: i64 = 64;

/// Lines (dⁱ, v(aᵢ)) of the nonzero coefficients.
fn lines(q: &TwistedPoly) -> Vec<(i64, i64)> {
    let d = q.field().d() as i64;
    q.coeff_valuations().into_iter().map(|(i, v)| (d.pow(i as u32), v)).collect()
}

/// γ·q = min_i (dⁱγ + v(aᵢ)).
pub fn trop_act(gamma: Trop, q: &TwistedPoly) -> Trop {
    let Fin(g) = gamma else { return Inf };
    lines(q).into_iter().map(|(s, v)| Fin(s * g + v)).min().unwrap_or(Inf)
}

/// Integers γ where the tropical minimum is attained by at least two monomials.
pub fn jump_set(q: &TwistedPoly) -> Vec<i64> {
    let ls = lines(q);
    let mut out = std::collections::BTreeSet::new();
    for (a, &(si, vi)) in ls.iter().enumerate() {
        for &(sj, vj) in &ls[a + 1..] {
            let (num, den) = (vi - vj, sj - si);
            if num.rem_euclid(den) != 0 {
                continue;
            }
            let g = num / den;
            let min = ls.iter().map(|&(s, v)| s * g + v).min().unwrap();
            if si * g + vi == min {
                out.insert(g);
            }
        }
    }
    out.into_iter().collect()
}

/// Smallest integer γ at which the top monomial of q stops strictly dominating γ·q;
/// None when q has at most one nonzero coefficient.
pub fn dominance_end(q: &TwistedPoly) -> Option<i64> {
    let ls = lines(q);
    let &(top, vn) = ls.last()?;
    ls[..ls.len() - 1].iter().map(|&(s, v)| ceil_div(v - vn, top - s)).min()
}

/// ⌊γ⌋ for every γ at which two monomials of q take the same value, on the envelope or not.
pub fn crossings(q: &TwistedPoly) -> Vec<i64> {
    let ls = lines(q);
    let mut out = std::collections::BTreeSet::new();
    for (a, &(si, vi)) in ls.iter().enumerate() {
        for &(sj, vj) in &ls[a + 1..] {
            out.insert(floor_div(vi - vj, sj - si));
        }
    }
    out.into_iter().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct HenselData {
    /// Source ball radius: q maps P_h bijectively onto P_hens.
    pub h: i64,
    pub hens: i64,
    /// Minimal coefficient valuation when negative, else 0.
    pub shift: i64,
    /// Degree 0: every radius works; `h` is a conventional placeholder.
    pub unbounded: bool,
}

/// h(q) and hens(q) = h(q) + v(a₀) for separable q.
pub fn hensel_pair(q: &TwistedPoly) -> Result<HenselData> {
    if !q.is_separable() {
        return Err(Error::NotSeparable(q.to_string()));
    }
    let d = q.field().d() as i64;
    let vals = q.coeff_valuations();
    let v0 = vals[0].1;
    let shift = vals.iter().map(|&(_, v)| v).min().unwrap().min(0);
    if q.degree() == 0 {
        return Ok(HenselData {
            h: -UNBOUNDED_RADIUS,
            hens: -UNBOUNDED_RADIUS + v0,
            shift,
            unbounded: true,
        });
    }
    let h = vals[1..]
        .iter()
        .map(|&(i, vi)| floor_div(v0 - vi, d.pow(i as u32) - 1) + 1)
        .max()
        .unwrap();
    Ok(HenselData { h, hens: h + v0, shift, unbounded: false })
}

/// Strict form: all coefficients must lie in 𝒪.
pub fn hensel_pair_integral(q: &TwistedPoly) -> Result<HenselData> {
    let data = hensel_pair(q)?;
    if data.shift < 0 {
        return Err(Error::CoefficientsNotIntegral(q.to_string()));
    }
    Ok(data)
}

/// λᵢ(γ) = (γ − i)/d when γ ≡ i mod d, else 0.
pub fn lambda_gamma_i(gamma: Trop, i: i64, d: i64) -> Trop {
    match gamma {
        Fin(g) if (g - i).rem_euclid(d) == 0 => Fin((g - i) / d),
        Fin(_) => Fin(0),
        Inf => Inf,
    }
}

/// λ(γ) = Σᵢ λᵢ(γ) = ⌊γ/d⌋.
pub fn lambda_gamma(gamma: Trop, d: i64) -> Trop {
    match gamma {
        Fin(g) => Fin(floor_div(g, d)),
        Inf => Inf,
    }
}

/// λ^s(γ), the s-fold iterate.
pub fn lambda_gamma_s(gamma: Trop, d: i64, s: u32) -> Trop {
    (0..s).fold(gamma, |g, _| lambda_gamma(g, d))
}

/// Sharp coordinate bound: v(x) ≥ γ ⟹ v(λ⁽ˢ⁾ₙ(x)) ≥ ⌈(γ − n)/dˢ⌉.
pub fn lambda_coordinate_bound(gamma: Trop, n: i64, q: i64) -> Trop {
    match gamma {
        Fin(g) => Fin(ceil_div(g - n, q)),
        Inf => Inf,
    }
}

/// Π P_{γᵢ}; P_γ = {x : v(x) ≥ γ}, P_∞ = {0}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Ball {
    pub radii: Vec<Trop>,
}

impl Ball {
    pub fn new(radii: Vec<Trop>) -> Self {
        Ball { radii }
    }

    pub fn uniform(n: usize, gamma: Trop) -> Self {
        Ball { radii: vec![gamma; n] }
    }

    pub fn is_proper(&self) -> bool {
        self.radii.iter().all(|r| !r.is_inf())
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// Membership; errors when precision does not decide it.
    pub fn contains(&self, xs: &[LaurentSeries]) -> Result<bool> {
        for (x, &g) in xs.iter().zip(&self.radii) {
            if x.val_lower_bound() >= g {
                continue;
            }
            if x.is_zero() {
                return Err(Error::InsufficientPrecision(format!("cannot decide membership in P({g})")));
            }
            return Ok(false);
        }
        Ok(true)
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.radii.iter().map(|r| format!("P({r})")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}
