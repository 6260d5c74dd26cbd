//! Ball bounds and quantifier elimination on a neighbourhood of zero.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{lower_separable, RMatrix};
use crate::logic::formula::{PPFormula, QFLambdaFormula};
use crate::logic::term::{trop_preimage, LambdaTerm};
use crate::ore::TwistedPoly;
use crate::tropical::{hensel_pair, trop_act, Ball, Fin, Inf, Trop, UNBOUNDED_RADIUS};

/// Radius standing for "no constraint".
const FREE: i64 = -UNBOUNDED_RADIUS;

/// Smallest γ with x̄ ∈ P_γ ⇒ u(x̄) ∈ P_δ.
pub fn term_ball_bound(u: &LambdaTerm, delta: Trop) -> Trop {
    let Fin(_) = delta else { return Inf };
    let d = u.field().d() as i64;
    u.parts()
        .filter_map(|(c, r)| {
            let beta = trop_preimage(r, delta)?.fin()?;
            let q = d.pow(c.level);
            Some((beta - 1) * q + c.index + 1)
        })
        .max()
        .map_or(Fin(FREE), Fin)
}

/// δ with P_δ ⊆ P_γ.s.
pub fn division_ball(s: &TwistedPoly, gamma: Trop) -> Result<Trop> {
    let hd = hensel_pair(s)?;
    Ok(match gamma {
        Fin(g) if g <= hd.h => Fin(hd.hens),
        _ => trop_act(gamma, s),
    })
}

/// Proper W₁ with W₁ ⊆ W.A for A lower triangular with separable diagonal.
pub fn triangular_ball(w: &Ball, a: &RMatrix) -> Result<Ball> {
    let n = a.rows();
    if a.cols() != n || w.len() != n {
        return Err(Error::Unsupported("triangular_ball needs a square system".into()));
    }
    if !a.is_lower_triangular() {
        return Err(Error::Unsupported("matrix is not lower triangular".into()));
    }
    let mut delta = w.radii.clone();
    let mut eps = Vec::with_capacity(n);
    for j in 0..n {
        let e = division_ball(a.get(j, j), delta[j])?;
        for (i, di) in delta.iter_mut().enumerate().skip(j + 1) {
            if let Some(b) = trop_preimage(a.get(i, j), e) {
                *di = (*di).max(b);
            }
        }
        eps.push(e);
    }
    Ok(Ball::new(eps))
}

#[derive(Clone, Debug, Serialize)]
pub struct QeResult {
    pub delta: Trop,
    #[serde(serialize_with = "ser_display")]
    pub psi: QFLambdaFormula,
    pub trace: Vec<String>,
}

fn ser_display<S: serde::Serializer, T: std::fmt::Display>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// δ and ψ with φ ∧ P_δ ⟺ ψ ∧ P_δ.
pub fn qe_near_zero(phi: &PPFormula) -> Result<QeResult> {
    let norm = phi.normalize()?;
    let names = phi.free.clone();
    let mut trace = Vec::new();
    let eq: Vec<usize> = (0..norm.radii.len()).filter(|&j| norm.radii[j].is_inf()).collect();
    let balls: Vec<usize> = (0..norm.radii.len()).filter(|&j| !norm.radii[j].is_inf()).collect();
    let mut delta = Fin(FREE);
    for &c in &balls {
        let b = term_ball_bound(&norm.u[c], norm.radii[c]);
        trace.push(format!("ball atom {c}: free part in P({}) from x in {}", norm.radii[c], b));
        delta = delta.max(b);
    }
    if norm.n_bound() == 0 {
        let eqs: Vec<LambdaTerm> = eq.iter().map(|&j| norm.u[j].clone()).filter(|t| !t.is_zero()).collect();
        trace.push(format!("no bound variables; delta = {delta}"));
        return Ok(QeResult { delta, psi: QFLambdaFormula { names, eqs }, trace });
    }
    let a_eq = norm.a.select_cols(&eq);
    let rhs: Vec<LambdaTerm> = eq.iter().map(|&j| norm.u[j].neg()).collect();
    let ls = lower_separable(&a_eq, &rhs)?;
    trace.push(format!("lower separable form of rank {} with {} side conditions", ls.rank, ls.psi.len()));
    let a_ball = norm.a.select_cols(&balls);
    let radii: Vec<Trop> = ls.perm[..ls.rank]
        .iter()
        .map(|&k| {
            balls
                .iter()
                .enumerate()
                .filter_map(|(c, &j)| trop_preimage(a_ball.get(k, c), norm.radii[j]))
                .fold(Fin(FREE), Trop::max)
        })
        .collect();
    let w0 = Ball::new(radii);
    let pivots = ls.s.select_rows(&(0..ls.rank).collect::<Vec<_>>()).select_cols(&(0..ls.rank).collect::<Vec<_>>());
    let w1 = triangular_ball(&w0, &pivots)?;
    trace.push(format!("bound variables in {w0}; right-hand sides in {w1}"));
    for c in 0..ls.rank {
        let b = term_ball_bound(&ls.w[c], w1.radii[c]);
        trace.push(format!("pivot {c}: x in P({b})"));
        delta = delta.max(b);
    }
    trace.push(format!("delta = {delta}"));
    Ok(QeResult { delta, psi: QFLambdaFormula { names, eqs: ls.psi }, trace })
}
