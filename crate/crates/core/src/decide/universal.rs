//! Universal definitions of p.p. sets from a Rohwer configuration.

use serde::Serialize;

use crate::complement::comp_f;
use crate::decide::invariant::{formula_image, invariant, invariant_alpha};
use crate::decide::oracle::{oracle_projection_basis, oracle_projection_dim, theta_invariant, Invariant};
use crate::error::{Error, Result};
use crate::logic::{qe_near_zero, Atom, LambdaTerm, PPFormula};
use crate::ore::TwistedPoly;
use crate::series::{Field, LaurentSeries};
use crate::tropical::{Fin, Trop};

/// Window margin around [B₀, B₁] for the set checks.
const CHECK_MARGIN: i64 = 8;
/// Largest number of coset representatives listed.
const MAX_REPRESENTATIVES: usize = 64;

#[derive(Clone, Debug, Serialize)]
pub struct RohwerChecks {
    pub window: (i64, i64),
    /// A + A_c covers the window.
    pub sum_is_whole: bool,
    /// A ∩ A_c ⊆ B₀.
    pub pseudo_orthogonal: bool,
    /// A ∩ B₁ = A_s ∩ B₁.
    pub small_ball_agreement: bool,
    /// A ∩ B₀ ⊆ A_m; None when A_m is a union of several cosets.
    pub lower_inclusion: Option<bool>,
    /// A_m ⊆ A + B₁; None when A_m is a union of several cosets.
    pub upper_inclusion: Option<bool>,
}

impl RohwerChecks {
    pub fn all_hold(&self) -> bool {
        self.sum_is_whole
            && self.pseudo_orthogonal
            && self.small_ball_agreement
            && self.lower_inclusion != Some(false)
            && self.upper_inclusion != Some(false)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RohwerConfiguration {
    #[serde(serialize_with = "ser_display")]
    pub a: PPFormula,
    #[serde(serialize_with = "ser_display")]
    pub a_c: PPFormula,
    pub complement_generators: Vec<String>,
    pub gamma_c: Trop,
    /// B₀ = P(b0), B₁ = P(b1).
    pub b0: Trop,
    pub b1: Trop,
    #[serde(serialize_with = "ser_display")]
    pub a_s: PPFormula,
    /// k = |(A ∧ B₀)/(A ∧ B₁)| = d^log_d_k.
    pub log_d_k: u32,
    pub basis: Vec<String>,
    pub representatives: Vec<String>,
    pub a_m: String,
    pub universal: String,
    pub checks: RohwerChecks,
}

fn ser_display<S: serde::Serializer, T: std::fmt::Display>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ball(f: Field, name: &str, r: Trop) -> PPFormula {
    PPFormula::new(f, vec![name.into()], vec![], vec![Atom::In(LambdaTerm::var(0, TwistedPoly::one(f)), r)])
}

fn renamed(phi: &PPFormula, free: &str, bound: &[String]) -> PPFormula {
    let mut out = phi.clone();
    out.free = vec![free.into()];
    out.bound = bound.to_vec();
    out
}

fn fresh_names(base: &str, n: usize, avoid: &[&str]) -> Vec<String> {
    let mut out = Vec::new();
    let mut i = 0;
    while out.len() < n {
        let name = if n == 1 && i == 0 { base.to_string() } else { format!("{base}{i}") };
        if !avoid.contains(&name.as_str()) {
            out.push(name);
        }
        i += 1;
    }
    out
}

fn dim(phi: &PPFormula, lo: i64, hi: i64) -> Result<usize> {
    oracle_projection_dim(phi, lo, hi, crate::decide::oracle::DEFAULT_SLACK)
}

fn span(f: Field, basis: &[LaurentSeries]) -> Vec<LaurentSeries> {
    let mut out = vec![LaurentSeries::zero(f)];
    for b in basis {
        let mut next = Vec::new();
        for x in &out {
            for c in f.elements() {
                next.push(x.add(&b.scale(c)));
                if next.len() >= MAX_REPRESENTATIVES {
                    break;
                }
            }
        }
        out = next;
    }
    out
}

fn coeff_key(x: &LaurentSeries, lo: i64, hi: i64) -> Vec<u32> {
    (lo..hi).map(|n| x.coeff(n)).collect()
}

pub fn universalize(a: &PPFormula) -> Result<RohwerConfiguration> {
    if a.free.len() != 1 {
        return Err(Error::Unsupported("universal definitions need one free variable".into()));
    }
    let f = a.field();
    let x = a.free[0].clone();
    let whole = PPFormula::whole(f, &x);
    let is_whole = invariant(&whole, a)? == Invariant::Finite { log_d: 0 };

    let img = formula_image(a)?;
    let data = comp_f(f, &img.gens)?;
    let alpha = invariant_alpha(&[a]);
    let gamma_c = if data.threshold.is_inf() { alpha } else { data.threshold };
    let gens: Vec<TwistedPoly> = if is_whole {
        vec![]
    } else {
        data.complement_indices
            .iter()
            .map(|&j| TwistedPoly::monomial(data.level as usize, LaurentSeries::x_pow(f, j)))
            .collect()
    };
    let cs = fresh_names("c", gens.len(), &[&x, "y"]);
    let one = TwistedPoly::one(f);
    let mut lhs = LambdaTerm::var(0, one);
    for (i, g) in gens.iter().enumerate() {
        lhs = lhs.add(&LambdaTerm::var(1 + i, g.neg()));
    }
    let a_c_radius = if is_whole { crate::tropical::Inf } else { gamma_c };
    let a_c = PPFormula::new(f, vec![x.clone()], cs.clone(), vec![Atom::In(lhs, a_c_radius)]);

    let b0 = gamma_c.min(alpha);
    let qa = qe_near_zero(a)?;
    let b1 = qa.delta.max(b0);
    let (Fin(g0), Fin(dl)) = (b0, b1) else {
        return Err(Error::UnboundedSearch("no finite ball for the near-zero part".into()));
    };
    let mut atoms: Vec<Atom> = qa.psi.eqs.iter().map(|e| Atom::Eq(e.clone(), LambdaTerm::zero(f))).collect();
    atoms.push(Atom::In(LambdaTerm::var(0, TwistedPoly::one(f)), b1));
    let a_s = PPFormula::new(f, vec![x.clone()], vec![], atoms);

    let log_d_k = match theta_invariant(a, b0, b1)? {
        Invariant::Finite { log_d } => log_d,
        Invariant::Infinite { .. } => unreachable!(),
    };
    let basis = oracle_projection_basis(a, g0, dl)?;
    let mut reps = span(f, &basis);
    reps.sort_by_key(|r| coeff_key(r, g0, dl));

    let a_s_at = |arg: &str| renamed(&a_s, arg, &[]).to_string();
    let a_m = if log_d_k == 0 {
        a_s_at("y")
    } else {
        let parts: Vec<String> = reps.iter().map(|r| format!("({})", a_s_at(&format!("y - ({})", r.to_exact())))).collect();
        format!("({})", parts.join(" \\/ "))
    };

    let zs = fresh_names("z", a.bound.len(), &["x", "y", "c"]);
    let a_shift = renamed(a, &format!("{x} - y"), &zs);
    let a_c_text = if gens.is_empty() {
        if is_whole { "y = 0".to_string() } else { format!("y in P({gamma_c})") }
    } else {
        let terms: Vec<String> = cs.iter().zip(&gens).map(|(c, g)| format!("{c}.({g})")).collect();
        format!("E {} : y - {} in P({gamma_c})", cs.join(", "), terms.join(" - "))
    };
    let universal = if is_whole {
        "true".to_string()
    } else {
        format!("forall y : (({a_shift}) /\\ ({a_c_text})) -> {a_m}")
    };

    let lo = g0 - CHECK_MARGIN;
    let hi = dl.max(g0 + 1) + CHECK_MARGIN;
    let sum_is_whole = dim(&a.sum(&a_c)?, lo, hi)? == (hi - lo) as usize;
    let pseudo_orthogonal = dim(&a.conjoin(&a_c)?, lo, g0)? == 0;
    let a_b1 = a.and_ball(b1);
    let (d1, d2, d3) = (dim(&a_b1, lo, hi)?, dim(&a_s, lo, hi)?, dim(&a_b1.conjoin(&a_s)?, lo, hi)?);
    let small_ball_agreement = d1 == d2 && d2 == d3;
    let (lower_inclusion, upper_inclusion) = if log_d_k == 0 {
        let a_b0 = a.and_ball(b0);
        let lower = dim(&a_b0.conjoin(&a_s)?, lo, hi)? == dim(&a_b0, lo, hi)?;
        let upper_set = a.sum(&ball(f, &x, b1))?;
        let upper = dim(&a_s.conjoin(&upper_set)?, lo, hi)? == dim(&a_s, lo, hi)?;
        (Some(lower), Some(upper))
    } else {
        (None, None)
    };

    Ok(RohwerConfiguration {
        a: a.clone(),
        a_c,
        complement_generators: gens.iter().map(|g| g.to_string()).collect(),
        gamma_c,
        b0,
        b1,
        a_s,
        log_d_k,
        basis: basis.iter().map(|b| b.to_string()).collect(),
        representatives: reps.iter().map(|r| r.to_string()).collect(),
        a_m,
        universal,
        checks: RohwerChecks {
            window: (lo, hi),
            sum_is_whole,
            pseudo_orthogonal,
            small_ball_agreement,
            lower_inclusion,
            upper_inclusion,
        },
    })
}
