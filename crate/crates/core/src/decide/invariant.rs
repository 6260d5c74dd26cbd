//! |A/(A∧B)| for one-variable p.p. formulas.

use serde::Serialize;

use crate::complement::{normalize_image, NormalizedImage, Signature};
use crate::decide::oracle::{oracle_quotient, Invariant};
use crate::error::{Error, Result};
use crate::linalg::{near_zero_equal, vddku, RMatrix};
use crate::logic::{qe_near_zero, trop_preimage, Atom, Coord, PPFormula, QFLambdaFormula};
use crate::ore::TwistedPoly;
use crate::series::{Field, LaurentSeries};
use crate::tropical::{crossings, floor_div, hensel_pair, jump_set, trop_act, Fin, Trop};

/// Valuation residues of φ(K) far from zero, for φ with one free variable.
pub fn formula_signature(phi: &PPFormula) -> Result<Signature> {
    Ok(formula_image(phi)?.signature())
}

/// Normalized generators q with φ(K) ≈ Σ K.q.
pub fn formula_image(phi: &PPFormula) -> Result<NormalizedImage> {
    if phi.free.len() != 1 {
        return Err(Error::Unsupported(format!("expected one free variable, got {}", phi.free.len())));
    }
    let f = phi.field();
    let d = f.d() as i64;
    let mut bound = phi.free.clone();
    bound.extend(phi.bound.iter().cloned());
    let image_form = PPFormula::new(f, vec![], bound, phi.atoms.clone());
    let norm = image_form.normalize()?;
    let a = norm.a;
    // rows of x come first
    let level = phi
        .atoms
        .iter()
        .flat_map(|at| at.as_ball().0.parts().filter(|(c, _)| c.var == 0).map(|(c, _)| c.level).collect::<Vec<_>>())
        .max()
        .unwrap_or(0);
    let nx = d.pow(level) as usize;
    let q1: Vec<TwistedPoly> = (0..a.rows())
        .map(|i| {
            if i < nx {
                TwistedPoly::monomial(level as usize, LaurentSeries::x_pow(f, i as i64))
            } else {
                TwistedPoly::zero(f)
            }
        })
        .collect();
    let mut m = a.hcat(&RMatrix::column(q1));
    let n_cons = a.cols();
    for _ in 0..n_cons {
        if m.rows() == 0 {
            break;
        }
        let v = vddku(&m)?;
        let keep: Vec<usize> = (0..v.q.rows()).filter(|&i| v.q.get(i, 0).is_zero()).collect();
        let rest: Vec<usize> = (1..v.q.cols()).collect();
        m = v.q.select_rows(&keep).select_cols(&rest);
    }
    let last = m.cols().saturating_sub(1);
    let gens: Vec<TwistedPoly> = (0..m.rows()).map(|i| m.get(i, last).clone()).collect();
    normalize_image(f, &gens)
}

/// A ≈ B: same valuation residues far from zero.
pub fn formulas_m_immediate(a: &PPFormula, b: &PPFormula) -> Result<bool> {
    let d = a.field().d() as i64;
    Ok(formula_signature(a)?.same_as(&formula_signature(b)?, d))
}

/// Below every finite radius, every valuation at which monomials of an atom can cancel
/// (ties within one coordinate, or two simultaneous ties between two coordinates), the
/// values taken there, and their preimages under each scalar.
pub fn invariant_alpha(formulas: &[&PPFormula]) -> Trop {
    let mut vals: Vec<i64> = Vec::new();
    for phi in formulas {
        let scalars = phi.scalars();
        let d = phi.field().d() as i64;
        for atom in &phi.atoms {
            vals.extend(tie_points(atom, d));
        }
        for r in &scalars {
            for m in crossings(r) {
                vals.push(m);
                let Fin(w) = trop_act(Fin(m), r) else { continue };
                vals.push(w);
                vals.extend(scalars.iter().filter_map(|s| trop_preimage(s, Fin(w)).and_then(|b| b.fin())));
            }
        }
        vals.extend(phi.finite_radii());
    }
    vals.iter().min().map_or(Fin(0), |m| Fin(m - 1))
}

/// Linear condition Σ coef·c_var = rhs on coordinate valuations.
type Tie = (Vec<(Coord, i64)>, i64);

fn tie_points(atom: &Atom, d: i64) -> Vec<i64> {
    let (term, radius) = atom.as_ball();
    // (coordinate, slope, offset) for every monomial
    let lines: Vec<(Coord, i64, i64)> = term
        .parts()
        .flat_map(|(c, r)| r.coeff_valuations().into_iter().map(move |(i, v)| (*c, d.pow(i as u32), v)))
        .collect();
    let mut ties: Vec<Tie> = Vec::new();
    for (k, &(ca, sa, va)) in lines.iter().enumerate() {
        for &(cb, sb, vb) in &lines[k + 1..] {
            if ca == cb {
                if sa != sb {
                    ties.push((vec![(ca, sa - sb)], vb - va));
                }
            } else {
                ties.push((vec![(ca, sa), (cb, -sb)], vb - va));
            }
        }
        if let Fin(rho) = radius {
            ties.push((vec![(ca, sa)], rho - va));
        }
    }
    let mut out = Vec::new();
    let mut emit = |c: Coord, num: i64, den: i64| {
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let v = floor_div(num, den);
        out.push(v);
        out.push(d.pow(c.level) * v + c.index);
        for &(cl, s, o) in &lines {
            if cl == c {
                out.push(s * v + o);
            }
        }
    };
    for (k, t) in ties.iter().enumerate() {
        if let [(c, a)] = t.0[..] {
            emit(c, t.1, a);
        }
        for u in &ties[k + 1..] {
            let mut vars: Vec<Coord> = t.0.iter().chain(&u.0).map(|&(c, _)| c).collect();
            vars.sort();
            vars.dedup();
            if vars.len() != 2 {
                continue;
            }
            let coef = |e: &Tie, c: Coord| e.0.iter().filter(|&&(x, _)| x == c).map(|&(_, a)| a).sum::<i64>();
            let (a11, a12, a21, a22) = (coef(t, vars[0]), coef(t, vars[1]), coef(u, vars[0]), coef(u, vars[1]));
            let det = a11 * a22 - a12 * a21;
            if det == 0 {
                continue;
            }
            emit(vars[0], t.1 * a22 - u.1 * a12, det);
            emit(vars[1], a11 * u.1 - a21 * t.1, det);
        }
    }
    out
}

/// ψ as a matrix: one row per equation, one column per λ-coordinate at a common level.
pub fn psi_matrix(f: Field, psi: &QFLambdaFormula, level: u32) -> Result<RMatrix> {
    let n = (f.d() as usize).pow(level);
    let mut rows = Vec::new();
    for eq in &psi.eqs {
        // u = 0 iff every λ⁽ᵉ⁾ᵥ(u) = 0
        let e = level - eq.max_level();
        for v in 0..(f.d() as i64).pow(e) {
            let part = if e == 0 { eq.clone() } else { eq.lambda(e, v)? };
            let raised = part.raise_to(level)?;
            let mut row = vec![TwistedPoly::zero(f); n];
            for (c, r) in raised.parts() {
                let idx = if level == 0 { 0 } else { c.index as usize };
                row[idx] = row[idx].add(r);
            }
            rows.push(row);
        }
    }
    Ok(RMatrix::from_rows(f, n, rows))
}

fn psi_level(psi: &QFLambdaFormula) -> u32 {
    psi.eqs.iter().map(|e| e.max_level()).max().unwrap_or(0)
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    #[serde(flatten)]
    pub invariant: Invariant,
    pub alpha: Option<Trop>,
    pub gamma: Option<Trop>,
    pub trace: Vec<String>,
}

pub fn invariant(a: &PPFormula, b: &PPFormula) -> Result<Invariant> {
    Ok(invariant_report(a, b)?.invariant)
}

pub fn invariant_report(a: &PPFormula, b: &PPFormula) -> Result<InvariantReport> {
    let dform = a.conjoin(b)?;
    if dform.free.len() != 1 {
        return Err(Error::Unsupported(format!("invariants need one free variable, got {}", dform.free.len())));
    }
    let a = a.with_free(&dform.free)?;
    let d = a.field().d() as i64;
    let mut trace = Vec::new();
    let sa = formula_signature(&a)?;
    let sd = formula_signature(&dform)?;
    trace.push(format!("signatures: A level {} {:?}, D level {} {:?}", sa.level, sa.residues, sd.level, sd.residues));
    if !sa.same_as(&sd, d) {
        return Ok(InvariantReport {
            invariant: Invariant::Infinite { witness: "not-m-immediate".into() },
            alpha: None,
            gamma: None,
            trace,
        });
    }
    let alpha = invariant_alpha(&[&a, &dform]);
    trace.push(format!("alpha = {alpha}"));
    let qa = qe_near_zero(&a)?;
    let qd = qe_near_zero(&dform)?;
    let level = psi_level(&qa.psi).max(psi_level(&qd.psi));
    let ma = psi_matrix(a.field(), &qa.psi, level)?;
    let md = psi_matrix(a.field(), &qd.psi, level)?;
    if !near_zero_equal(&ma, &md)? {
        trace.push("near-zero systems differ".into());
        return Ok(InvariantReport {
            invariant: Invariant::Infinite { witness: "rowspace".into() },
            alpha: Some(alpha),
            gamma: None,
            trace,
        });
    }
    let mut gamma = qa.delta.max(qd.delta).max(alpha + 1);
    // column n holds the level-`level` coordinate λ_n(x): v(x) ≥ dˡc + n forces v(λ_n(x)) ≥ c
    let scale = d.pow(level);
    for m in [&ma, &md] {
        for i in 0..m.rows() {
            for (n, q) in m.row(i).iter().enumerate() {
                let to_x = |c: i64| Fin(scale * c + n as i64);
                if let Some(&j) = jump_set(q).last() {
                    gamma = gamma.max(to_x(j + 1));
                }
                if q.is_separable() && q.degree() > 0 {
                    gamma = gamma.max(to_x(hensel_pair(q)?.h));
                }
            }
        }
    }
    if gamma.is_inf() {
        return Err(Error::UnboundedSearch("no finite ball separates A from A and B".into()));
    }
    trace.push(format!("delta_A = {}, delta_D = {}, gamma = {gamma}", qa.delta, qd.delta));
    let invariant = oracle_quotient(&a, b, alpha, gamma)?;
    trace.push(format!("count {invariant:?}"));
    Ok(InvariantReport { invariant, alpha: Some(alpha), gamma: Some(gamma), trace })
}
