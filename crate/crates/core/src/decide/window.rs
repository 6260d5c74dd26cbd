//! Coefficient windows: the module action as 𝔽_d-linear algebra on finitely many coefficients.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::fd::FdMatrix;
use crate::linalg::RMatrix;
use crate::logic::{Coord, Normalized};
use crate::ore::TwistedPoly;
use crate::series::{Field, LaurentSeries};
use crate::tropical::{ceil_div, trop_act, Fin, Inf, Trop};

/// Coefficient indices lo ≤ n < hi.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo >= hi {
            return Err(Error::WindowTooSmall(format!("empty window [{lo}, {hi})")));
        }
        Ok(Window { lo, hi })
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo).max(0) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }

    pub fn contains(&self, n: i64) -> bool {
        self.lo <= n && n < self.hi
    }
}

/// Matrix of ȳ ↦ ȳ.Q on coefficient vectors: row (i, n) is the image of Xⁿ in slot i,
/// column (j, m) the coefficient of X^m in slot j, images truncated at `out.hi`.
pub fn window_matrix(q: &RMatrix, inw: Window, out: Window) -> Result<FdMatrix> {
    let f = q.field();
    let (li, lo) = (inw.len(), out.len());
    let mut m = FdMatrix::zeros(f, q.rows() * li, q.cols() * lo);
    for i in 0..q.rows() {
        for j in 0..q.cols() {
            let r = q.get(i, j);
            let bound = trop_act(Fin(inw.lo), r);
            if bound < Fin(out.lo) {
                return Err(Error::WindowTooSmall(format!(
                    "X^{}.({r}) may have valuation {bound} below the output window start {}",
                    inw.lo, out.lo
                )));
            }
            for (a, n) in (inw.lo..inw.hi).enumerate() {
                let img = r.apply(&LaurentSeries::x_pow(f, n));
                for (k, c) in img.terms() {
                    if out.contains(k) {
                        m.set(i * li + a, j * lo + (k - out.lo) as usize, c);
                    }
                }
            }
        }
    }
    Ok(m)
}

/// One atom Σ terms ∈ P_radius; a term is (variable, λ-coordinate, scalar).
#[derive(Clone, Debug)]
pub struct AtomSpec {
    pub terms: Vec<(Coord, TwistedPoly)>,
    pub radius: Trop,
}

/// Atom specs of a normalized formula; bound variable k becomes variable n_free + k.
pub fn atom_specs(norm: &Normalized) -> Vec<AtomSpec> {
    (0..norm.radii.len())
        .map(|j| {
            let mut terms: Vec<(Coord, TwistedPoly)> = norm.u[j].parts().map(|(c, r)| (*c, r.clone())).collect();
            for k in 0..norm.n_bound() {
                let r = norm.a.get(k, j);
                if !r.is_zero() {
                    terms.push((Coord::plain(norm.n_free + k), r.clone()));
                }
            }
            AtomSpec { terms, radius: norm.radii[j] }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarMode {
    /// Coefficients in the window are unknowns; higher ones are left free.
    Unknown(Window),
    /// An exact value supplied at query time, with support in the window.
    Given(Window),
}

impl VarMode {
    pub fn window(&self) -> Window {
        match *self {
            VarMode::Unknown(w) | VarMode::Given(w) => w,
        }
    }
}

fn coord_image(f: Field, c: &Coord, r: &TwistedPoly, n: i64) -> Option<LaurentSeries> {
    let q = (f.d() as i64).pow(c.level);
    if (n - c.index).rem_euclid(q) != 0 {
        return None;
    }
    Some(r.apply(&LaurentSeries::x_pow(f, (n - c.index) / q)))
}

/// Lower bound on the valuation of λ_c(x).r for v(x) ≥ lo.
pub(crate) fn image_floor(f: Field, c: &Coord, r: &TwistedPoly, lo: i64) -> Trop {
    let q = (f.d() as i64).pow(c.level);
    trop_act(Fin(ceil_div(lo - c.index, q)), r)
}

/// Upper bound on the support of λ_c(x).r for x supported below hi.
pub(crate) fn image_ceiling(f: Field, c: &Coord, r: &TwistedPoly, hi: i64) -> i64 {
    let q = (f.d() as i64).pow(c.level);
    let top = ceil_div(hi - c.index, q);
    let d = f.d() as i64;
    r.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(i, a)| top.max(0) * d.pow(i as u32) + top.min(0) + a.support_end())
        .max()
        .unwrap_or(hi)
}

/// First coefficient of atom output not determined by the windows of unknown variables.
pub(crate) fn atom_cutoff(f: Field, spec: &AtomSpec, modes: &[VarMode]) -> Trop {
    spec.terms
        .iter()
        .filter_map(|(c, r)| match modes[c.var] {
            VarMode::Unknown(w) => Some(image_floor(f, c, r, w.hi)),
            VarMode::Given(_) => None,
        })
        .min()
        .unwrap_or(Inf)
}

/// The constraint system v·M = −b(given) in the unknown coefficients v.
#[derive(Clone, Debug)]
pub struct WindowSystem {
    field: Field,
    specs: Vec<AtomSpec>,
    modes: Vec<VarMode>,
    /// (variable, index) of each matrix row.
    pub unknowns: Vec<(usize, i64)>,
    /// Output coefficient range [lo, hi) constrained for each atom.
    pub ranges: Vec<(i64, i64)>,
    offsets: Vec<usize>,
    matrix: FdMatrix,
    echelon: Option<(FdMatrix, Vec<usize>)>,
}

impl WindowSystem {
    /// Rows of each atom are capped at `cap` in addition to the cutoff and radius.
    pub fn build(f: Field, specs: Vec<AtomSpec>, modes: Vec<VarMode>, cap: i64) -> Self {
        let mut ranges = Vec::new();
        let mut offsets = Vec::new();
        let mut total = 0usize;
        for spec in &specs {
            let hi = atom_cutoff(f, spec, &modes).min(spec.radius).min(Fin(cap)).fin().unwrap();
            let lo = spec
                .terms
                .iter()
                .map(|(c, r)| image_floor(f, c, r, modes[c.var].window().lo))
                .min()
                .unwrap_or(Inf)
                .fin()
                .unwrap_or(hi)
                .min(hi);
            offsets.push(total);
            total += (hi - lo) as usize;
            ranges.push((lo, hi));
        }
        let mut unknowns = Vec::new();
        for (v, m) in modes.iter().enumerate() {
            if let VarMode::Unknown(w) = m {
                unknowns.extend((w.lo..w.hi).map(|n| (v, n)));
            }
        }
        let mut matrix = FdMatrix::zeros(f, unknowns.len(), total);
        for (row, &(v, n)) in unknowns.iter().enumerate() {
            for (j, spec) in specs.iter().enumerate() {
                let (lo, hi) = ranges[j];
                for (c, r) in spec.terms.iter().filter(|(c, _)| c.var == v) {
                    let Some(img) = coord_image(f, c, r, n) else { continue };
                    for (k, coef) in img.terms() {
                        if k >= hi {
                            break;
                        }
                        debug_assert!(k >= lo);
                        let col = offsets[j] + (k - lo) as usize;
                        matrix.set(row, col, f.add(matrix.get(row, col), coef));
                    }
                }
            }
        }
        WindowSystem { field: f, specs, modes, unknowns, ranges, offsets, matrix, echelon: None }
    }

    pub fn matrix(&self) -> &FdMatrix {
        &self.matrix
    }

    pub fn modes(&self) -> &[VarMode] {
        &self.modes
    }

    fn echelon(&mut self) -> &(FdMatrix, Vec<usize>) {
        if self.echelon.is_none() {
            let mut m = self.matrix.clone();
            let piv = m.rref();
            let basis = FdMatrix::from_rows(self.field, m.cols(), (0..piv.len()).map(|i| m.row(i).to_vec()).collect());
            self.echelon = Some((basis, piv));
        }
        self.echelon.as_ref().unwrap()
    }

    /// Contribution of the given variables to the constrained output coefficients.
    pub fn given_vector(&self, values: &[Option<&LaurentSeries>]) -> Result<Vec<u32>> {
        let f = self.field;
        let mut b = vec![0u32; self.matrix.cols()];
        for (j, spec) in self.specs.iter().enumerate() {
            let (lo, hi) = self.ranges[j];
            for (c, r) in &spec.terms {
                let VarMode::Given(w) = self.modes[c.var] else { continue };
                let x = values[c.var].ok_or_else(|| Error::Unsupported(format!("missing value for variable {}", c.var)))?;
                if x.val_lower_bound() < Fin(w.lo) || x.support_end() > w.hi {
                    return Err(Error::WindowTooSmall(format!("value {x} outside window [{}, {})", w.lo, w.hi)));
                }
                let img = r.apply(&x.lambda(c.level, c.index));
                for (k, coef) in img.terms() {
                    if k >= hi {
                        break;
                    }
                    if k < lo {
                        return Err(Error::WindowTooSmall(format!("output coefficient {k} below {lo}")));
                    }
                    let col = self.offsets[j] + (k - lo) as usize;
                    b[col] = f.add(b[col], coef);
                }
            }
        }
        Ok(b)
    }

    /// Whether some unknown assignment satisfies every constrained coefficient.
    pub fn solvable(&mut self, values: &[Option<&LaurentSeries>]) -> Result<bool> {
        let f = self.field;
        let mut b = self.given_vector(values)?;
        let (basis, piv) = self.echelon();
        for (i, &pc) in piv.iter().enumerate() {
            let c = b[pc];
            if c == 0 {
                continue;
            }
            for (x, &e) in b.iter_mut().zip(basis.row(i)) {
                if e != 0 {
                    *x = f.sub(*x, f.mul(c, e));
                }
            }
        }
        Ok(b.iter().all(|&x| x == 0))
    }

    /// 𝔽_d-dimension of the projection of the solution space onto the selected unknowns.
    pub fn projection_dim(&mut self, keep: impl Fn(usize, i64) -> bool) -> usize {
        let rest: Vec<usize> = (0..self.unknowns.len()).filter(|&i| !keep(self.unknowns[i].0, self.unknowns[i].1)).collect();
        let kept = self.unknowns.len() - rest.len();
        let full = self.echelon().1.len();
        let others = FdMatrix::from_rows(
            self.field,
            self.matrix.cols(),
            rest.iter().map(|&i| self.matrix.row(i).to_vec()).collect(),
        )
        .rank();
        kept + others - full
    }

    /// Reduced basis of the homogeneous solutions projected onto the kept unknowns.
    pub fn projection_basis(&mut self, keep: impl Fn(usize, i64) -> bool) -> (Vec<usize>, Vec<Vec<u32>>) {
        let kept: Vec<usize> = (0..self.unknowns.len()).filter(|&i| keep(self.unknowns[i].0, self.unknowns[i].1)).collect();
        let kernel = self.matrix.left_kernel();
        let rows: Vec<Vec<u32>> = kernel.iter().map(|v| kept.iter().map(|&i| v[i]).collect()).collect();
        let mut m = FdMatrix::from_rows(self.field, kept.len(), rows);
        let piv = m.rref();
        let basis = (0..piv.len()).map(|i| m.row(i).to_vec()).collect();
        (kept, basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_matrices() {
        let f = Field::prime(2).unwrap();
        let one = RMatrix::identity(f, 1);
        let w = Window::new(-3, 5).unwrap();
        assert_eq!(window_matrix(&one, w, w).unwrap(), FdMatrix::identity(f, 8));
        let t = RMatrix::from_rows(f, 1, vec![vec![TwistedPoly::parse(f, "t").unwrap()]]);
        let m = window_matrix(&t, Window::new(0, 4).unwrap(), Window::new(0, 8).unwrap()).unwrap();
        for n in 0..4 {
            for k in 0..8 {
                assert_eq!(m.get(n, k), u32::from(k == 2 * n));
            }
        }
        let p = RMatrix::from_rows(f, 1, vec![vec![TwistedPoly::parse(f, "t - 1").unwrap()]]);
        let m = window_matrix(&p, Window::new(0, 4).unwrap(), Window::new(0, 8).unwrap()).unwrap();
        for n in 0..4usize {
            for k in 0..8usize {
                let e = u32::from(k == 2 * n) ^ u32::from(k == n);
                assert_eq!(m.get(n, k), e, "n={n} k={k}");
            }
        }
        assert!(matches!(
            window_matrix(&t, Window::new(-2, 2).unwrap(), Window::new(0, 8).unwrap()),
            Err(Error::WindowTooSmall(_))
        ));
    }
}
