//! Window oracle: membership and quotient counts by 𝔽_d-linear algebra on coefficient windows.

use serde::Serialize;

use crate::decide::window::{atom_cutoff, atom_specs, image_ceiling, image_floor, AtomSpec, VarMode, Window, WindowSystem};
use crate::error::{Error, Result};
use crate::logic::{trop_preimage, PPFormula};
use crate::series::{Field, LaurentSeries};
use crate::tropical::{crossings, Fin, Trop};

/// |G/H| as a power of d, or infinite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Invariant {
    Finite { log_d: u32 },
    Infinite { witness: String },
}

impl Invariant {
    pub fn is_finite(&self) -> bool {
        matches!(self, Invariant::Finite { .. })
    }

    /// The count, saturating at u64::MAX; None when infinite.
    pub fn count(&self, d: u32) -> Option<u64> {
        match self {
            Invariant::Finite { log_d } => Some((d as u64).saturating_pow(*log_d)),
            Invariant::Infinite { .. } => None,
        }
    }
}

/// Extra coefficients kept on each side of the region of interest.
pub const DEFAULT_SLACK: i64 = 16;
const MAX_GROWTH: usize = 64;

fn scalar_shift(specs: &[AtomSpec]) -> i64 {
    specs
        .iter()
        .flat_map(|s| s.terms.iter())
        .flat_map(|(_, r)| r.coeff_valuations())
        .map(|(_, v)| v.abs())
        .max()
        .unwrap_or(0)
}

/// Lowest valuation a bound variable may need to match free terms supported from `low` on.
fn witness_floor(f: Field, specs: &[AtomSpec], n_free: usize, low: i64) -> i64 {
    let mut need = 0;
    for s in specs {
        let Some(Fin(floor)) = s.terms.iter().filter(|(c, _)| c.var < n_free).map(|(c, r)| image_floor(f, c, r, low)).min()
        else {
            continue;
        };
        for (c, r) in s.terms.iter().filter(|(c, _)| c.var >= n_free) {
            let q = (f.d() as i64).pow(c.level);
            if let Some(Fin(b)) = trop_preimage(r, Fin(floor)) {
                need = need.min(q * b + c.index);
            }
            if let Some(&m) = crossings(r).first() {
                need = need.min(q * m + c.index);
            }
        }
    }
    need
}

/// Precision at which witnesses for free values of valuation `gamma` are fully visible.
fn witness_ceiling(f: Field, specs: &[AtomSpec], n_free: usize, gamma: i64) -> i64 {
    let d = f.d() as i64;
    let mut out = gamma;
    for s in specs {
        let Some(Fin(e)) = s.terms.iter().filter(|(c, _)| c.var < n_free).map(|(c, r)| image_floor(f, c, r, gamma)).min()
        else {
            continue;
        };
        for (c, r) in s.terms.iter().filter(|(c, _)| c.var >= n_free) {
            let Some(Fin(b)) = trop_preimage(r, Fin(e)) else { continue };
            let top = r.coeff_valuations().into_iter().map(|(i, v)| v + d.pow(i as u32) * b).max();
            let seen = top.unwrap_or(e).min(s.radius.fin().unwrap_or(i64::MAX));
            out = out.max(seen + (d.pow(c.level) - 1).max(0));
        }
    }
    out
}

/// Windows for the bound variables (and free ones when projecting) reaching `target`.
fn plan(
    f: Field,
    specs: &[AtomSpec],
    n_vars: usize,
    free: &[VarMode],
    low: i64,
    target: i64,
    slack: i64,
) -> Result<Vec<VarMode>> {
    let shift = scalar_shift(specs);
    let bound_lo = (low.min(0) - shift).min(witness_floor(f, specs, free.len(), low)) - slack;
    let mut hi = target.max(low + 1) + slack;
    for _ in 0..MAX_GROWTH {
        let mut modes: Vec<VarMode> = free.to_vec();
        for m in modes.iter_mut() {
            if let VarMode::Unknown(w) = m {
                w.hi = w.hi.max(hi);
            }
        }
        while modes.len() < n_vars {
            modes.push(VarMode::Unknown(Window { lo: bound_lo, hi }));
        }
        let ok = specs.iter().all(|s| atom_cutoff(f, s, &modes) >= s.radius.min(Fin(target)));
        if ok {
            return Ok(modes);
        }
        hi += slack.max(1);
    }
    Err(Error::WindowTooSmall(format!("no window up to X^{hi} determines coefficients below {target}")))
}

/// 𝔽_d-dimension of the image of φ ∩ P_α in P_α/P_γ (all free variables).
pub fn oracle_projection_dim(phi: &PPFormula, alpha: i64, gamma: i64, slack: i64) -> Result<usize> {
    if gamma <= alpha {
        return Ok(0);
    }
    let f = phi.field();
    let norm = phi.normalize()?;
    let specs = atom_specs(&norm);
    let n_vars = norm.n_free + norm.n_bound();
    let free = vec![VarMode::Unknown(Window { lo: alpha, hi: gamma }); norm.n_free];
    let target = witness_ceiling(f, &specs, norm.n_free, gamma) + slack;
    let modes = plan(f, &specs, n_vars, &free, alpha, target, slack)?;
    let mut sys = WindowSystem::build(f, specs, modes, target);
    let nf = norm.n_free;
    Ok(sys.projection_dim(|v, n| v < nf && n < gamma))
}

/// Reduced 𝔽_d-basis of the image of φ ∩ P_α in P_α/P_γ, as series known to O(X^γ).
pub fn oracle_projection_basis(phi: &PPFormula, alpha: i64, gamma: i64) -> Result<Vec<LaurentSeries>> {
    if phi.free.len() != 1 {
        return Err(Error::Unsupported("projection bases need one free variable".into()));
    }
    let f = phi.field();
    if gamma <= alpha {
        return Ok(vec![]);
    }
    let slack = DEFAULT_SLACK;
    let norm = phi.normalize()?;
    let specs = atom_specs(&norm);
    let n_vars = norm.n_free + norm.n_bound();
    let free = vec![VarMode::Unknown(Window { lo: alpha, hi: gamma })];
    let target = witness_ceiling(f, &specs, norm.n_free, gamma) + slack;
    let modes = plan(f, &specs, n_vars, &free, alpha, target, slack)?;
    let mut sys = WindowSystem::build(f, specs, modes, target);
    let (kept, basis) = sys.projection_basis(|v, n| v == 0 && n < gamma);
    let idx: Vec<i64> = kept.iter().map(|&i| sys.unknowns[i].1).collect();
    Ok(basis
        .iter()
        .map(|row| {
            let mut coeffs = vec![0u32; (gamma - alpha) as usize];
            for (c, &n) in row.iter().zip(&idx) {
                coeffs[(n - alpha) as usize] = *c;
            }
            LaurentSeries::from_coeffs(f, alpha, coeffs, Fin(gamma))
        })
        .collect())
}

/// |(A ∩ P_α)/P_γ| / |(D ∩ P_α)/P_γ| with D = A ∧ B.
pub fn oracle_quotient(a: &PPFormula, b: &PPFormula, alpha: Trop, gamma: Trop) -> Result<Invariant> {
    oracle_quotient_with(a, b, alpha, gamma, DEFAULT_SLACK)
}

pub fn oracle_quotient_with(a: &PPFormula, b: &PPFormula, alpha: Trop, gamma: Trop, slack: i64) -> Result<Invariant> {
    let (Fin(al), Fin(ga)) = (alpha, gamma) else {
        return Err(Error::Unsupported("oracle windows need finite radii".into()));
    };
    if al > ga {
        return Err(Error::Unsupported(format!("alpha {al} exceeds gamma {ga}")));
    }
    let d_formula = a.conjoin(b)?;
    let a = a.with_free(&d_formula.free)?;
    let da = oracle_projection_dim(&a, al, ga, slack)?;
    let dd = oracle_projection_dim(&d_formula, al, ga, slack)?;
    Ok(Invariant::Finite { log_d: da.saturating_sub(dd) as u32 })
}

/// |(A ∩ P_γ)/(A ∩ P_δ)|.
pub fn theta_invariant(a: &PPFormula, gamma: Trop, delta: Trop) -> Result<Invariant> {
    let (Fin(g), Fin(dl)) = (gamma, delta) else {
        return Err(Error::Unsupported("theta needs finite radii".into()));
    };
    if g > dl {
        return Err(Error::Unsupported(format!("gamma {g} exceeds delta {dl}")));
    }
    Ok(Invariant::Finite { log_d: oracle_projection_dim(a, g, dl, DEFAULT_SLACK)? as u32 })
}

/// Log_d of the oracle estimate of |A/(A∧B)| on the window [−w, w).
pub fn oracle_estimate(a: &PPFormula, b: &PPFormula, w: i64) -> Result<u32> {
    match oracle_quotient_with(a, b, Fin(-w), Fin(w), DEFAULT_SLACK)? {
        Invariant::Finite { log_d } => Ok(log_d),
        Invariant::Infinite { .. } => unreachable!(),
    }
}

/// Membership tests for many values of the free variables, compiled once.
pub struct Membership {
    n_free: usize,
    system: WindowSystem,
    window: Window,
}

impl Membership {
    /// Values must be exact with support in `window`.
    pub fn new(phi: &PPFormula, window: Window) -> Result<Self> {
        Self::with_slack(phi, window, DEFAULT_SLACK)
    }

    pub fn with_slack(phi: &PPFormula, window: Window, slack: i64) -> Result<Self> {
        let f = phi.field();
        let norm = phi.normalize()?;
        let specs = atom_specs(&norm);
        let n_vars = norm.n_free + norm.n_bound();
        let free = vec![VarMode::Given(window); norm.n_free];
        let mut target = window.hi;
        for s in &specs {
            if let Some(r) = s.radius.fin() {
                target = target.max(r);
            }
            for (c, r) in &s.terms {
                if c.var < norm.n_free {
                    target = target.max(image_ceiling(f, c, r, window.hi));
                }
            }
        }
        let modes = plan(f, &specs, n_vars, &free, window.lo, target, slack)?;
        Ok(Membership { n_free: norm.n_free, system: WindowSystem::build(f, specs, modes, target), window })
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn contains(&mut self, xs: &[LaurentSeries]) -> Result<bool> {
        if xs.len() != self.n_free {
            return Err(Error::Unsupported(format!("expected {} values, got {}", self.n_free, xs.len())));
        }
        let n = self.system.modes().len();
        let values: Vec<Option<&LaurentSeries>> = (0..n).map(|i| xs.get(i)).collect();
        self.system.solvable(&values)
    }
}

/// One-off membership test.
pub fn oracle_member(phi: &PPFormula, xs: &[LaurentSeries]) -> Result<bool> {
    let lo = xs.iter().map(|x| x.val_lower_bound().fin().unwrap_or(0)).min().unwrap_or(0).min(0);
    let hi = xs.iter().map(|x| x.support_end()).max().unwrap_or(1).max(lo + 1);
    Membership::new(phi, Window { lo, hi })?.contains(xs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    fn pp(field: Field, s: &str) -> PPFormula {
        PPFormula::parse(field, s).unwrap()
    }

    #[test]
    fn quotient_examples() {
        let fl = f(2);
        let o = pp(fl, "x in P(0)");
        let wp = pp(fl, "E y : x = y.(t - 1)");
        assert_eq!(oracle_quotient(&o, &wp, Fin(0), Fin(4)).unwrap(), Invariant::Finite { log_d: 1 });
        assert_eq!(oracle_quotient(&wp, &wp, Fin(-4), Fin(4)).unwrap(), Invariant::Finite { log_d: 0 });
        let p2 = pp(fl, "x in P(2)");
        assert_eq!(oracle_quotient(&o, &p2, Fin(0), Fin(4)).unwrap(), Invariant::Finite { log_d: 2 });
        let f3 = f(3);
        let o3 = pp(f3, "x in P(0)");
        let wp3 = pp(f3, "E y : x = y.(t - 1)");
        assert_eq!(oracle_quotient(&o3, &wp3, Fin(0), Fin(4)).unwrap(), Invariant::Finite { log_d: 1 });
    }

    #[test]
    fn theta_examples() {
        let fl = f(2);
        let o = pp(fl, "x in P(0)");
        assert_eq!(theta_invariant(&o, Fin(0), Fin(2)).unwrap(), Invariant::Finite { log_d: 2 });
        assert_eq!(theta_invariant(&o, Fin(3), Fin(3)).unwrap(), Invariant::Finite { log_d: 0 });
    }

    #[test]
    fn growth_for_infinite_quotient() {
        let fl = f(2);
        let wp = pp(fl, "E y : x = y.(t - 1)");
        let o = pp(fl, "x in P(0)");
        let est: Vec<u32> = [8, 16, 32].iter().map(|&w| oracle_estimate(&wp, &o, w).unwrap()).collect();
        assert!(est[0] < est[1] && est[1] < est[2], "{est:?}");
    }

    #[test]
    fn membership_in_artin_schreier_image() {
        let fl = f(2);
        let wp = pp(fl, "E y : x = y.(t - 1)");
        let mut m = Membership::new(&wp, Window { lo: -8, hi: 8 }).unwrap();
        assert!(m.contains(&[LaurentSeries::x_pow(fl, -2).add(&LaurentSeries::x_pow(fl, -1))]).unwrap());
        assert!(!m.contains(&[LaurentSeries::x_pow(fl, -1)]).unwrap());
        assert!(!m.contains(&[LaurentSeries::one(fl)]).unwrap());
        assert!(m.contains(&[LaurentSeries::x_pow(fl, 3)]).unwrap());
        assert!(oracle_member(&wp, &[LaurentSeries::x_pow(fl, 5)]).unwrap());
    }

    #[test]
    fn valuation_ring_definition() {
        let fl = f(2);
        let phi = pp(fl, "E y : x.(t*X) = y.(t - 1)");
        let mut m = Membership::new(&phi, Window { lo: -6, hi: 6 }).unwrap();
        for n in -6..6 {
            assert_eq!(m.contains(&[LaurentSeries::x_pow(fl, n)]).unwrap(), n >= 0, "X^{n}");
        }
    }
}
