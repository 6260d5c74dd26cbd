//! RV classes, m-immediacy, pseudo-orthogonality and pseudo-complements of images Σ M.qᵢ.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::fd::FdMatrix;
use crate::linalg::{vddku, RMatrix};
use crate::ore::TwistedPoly;
use crate::series::{Field, LaurentSeries};
use crate::tropical::{dominance_end, jump_set, trop_act, Fin, Inf, Trop};

/// (valuation, leading coefficient); equal classes ⟺ v(x) = v(y) < v(x − y).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RVClass {
    pub val: Trop,
    pub lead: u32,
}

impl RVClass {
    pub fn of(x: &LaurentSeries) -> Result<Self> {
        let val = x.valuation()?;
        Ok(RVClass { val, lead: x.leading().map_or(0, |(_, c)| c) })
    }
}

/// Residues mod d^level of valuations attained far from zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub level: u32,
    pub residues: BTreeSet<i64>,
}

impl Signature {
    pub fn empty() -> Self {
        Signature { level: 0, residues: BTreeSet::new() }
    }

    /// Same set of valuations expressed at a finer level.
    pub fn refine(&self, d: i64, level: u32) -> Self {
        assert!(level >= self.level);
        let q = d.pow(self.level);
        let k = d.pow(level - self.level);
        let residues = self.residues.iter().flat_map(|&r| (0..k).map(move |i| r + q * i)).collect();
        Signature { level, residues }
    }

    pub fn is_full(&self, d: i64) -> bool {
        self.residues.len() as i64 == d.pow(self.level)
    }

    pub fn same_as(&self, o: &Self, d: i64) -> bool {
        let l = self.level.max(o.level);
        self.refine(d, l).residues == o.refine(d, l).residues
    }

    pub fn disjoint_from(&self, o: &Self, d: i64) -> bool {
        let l = self.level.max(o.level);
        self.refine(d, l).residues.is_disjoint(&o.refine(d, l).residues)
    }
}

/// Normalized generators of Σ M.qᵢ: common degree, leading valuations distinct in [0, d^level).
#[derive(Clone, Debug)]
pub struct NormalizedImage {
    pub level: u32,
    pub gens: Vec<TwistedPoly>,
    pub residues: Vec<i64>,
}

impl NormalizedImage {
    pub fn signature(&self) -> Signature {
        Signature { level: self.level, residues: self.residues.iter().copied().collect() }
    }
}

pub fn normalize_image(field: Field, gens: &[TwistedPoly]) -> Result<NormalizedImage> {
    let nonzero: Vec<TwistedPoly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        return Ok(NormalizedImage { level: 0, gens: vec![], residues: vec![] });
    }
    let v = vddku(&RMatrix::column(nonzero))?;
    let mut out = NormalizedImage { level: v.level, gens: vec![], residues: vec![] };
    for i in 0..v.q.rows() {
        if let Some(r) = v.lead_vals[i] {
            out.gens.push(v.q.get(i, 0).clone());
            out.residues.push(r);
        }
    }
    let _ = field;
    Ok(out)
}

pub fn image_signature(field: Field, gens: &[TwistedPoly]) -> Result<Signature> {
    Ok(normalize_image(field, gens)?.signature())
}

#[derive(Clone, Debug, Serialize)]
pub struct PseudoComplementData {
    pub level: u32,
    /// Valuation-independent basis of K over K^(φ^level), one element per residue.
    #[serde(serialize_with = "ser_basis")]
    pub basis: Vec<(i64, LaurentSeries)>,
    /// Residues whose basis elements span the complement Σ M.t^level·X^j.
    pub complement_indices: Vec<i64>,
    pub gamma: Trop,
    pub no_jump: bool,
    /// Valuations below this are peeled greedily.
    pub threshold: Trop,
    #[serde(skip)]
    pub image: NormalizedImage,
}

fn ser_basis<S: serde::Serializer>(b: &[(i64, LaurentSeries)], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(b.len()))?;
    for (_, x) in b {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

/// min over generators of min jump − 1; 0 when no generator has a jump.
pub fn comp_j(gens: &[TwistedPoly]) -> Trop {
    gens.iter().filter_map(|g| jump_set(g).first().copied()).min().map_or(Fin(0), |j| Fin(j - 1))
}

fn min_jump(g: &TwistedPoly) -> Option<i64> {
    jump_set(g).first().copied()
}

/// Image valuations below this are attained only through the top monomial.
fn greedy_threshold(g: &TwistedPoly) -> Trop {
    dominance_end(g).map_or(Inf, |e| trop_act(Fin(e), g))
}

/// Pseudo-complement data of Σ M.qᵢ.
pub fn comp_f(field: Field, gens: &[TwistedPoly]) -> Result<PseudoComplementData> {
    let image = normalize_image(field, gens)?;
    let d = field.d() as i64;
    let q = d.pow(image.level);
    let mut basis = Vec::new();
    let mut complement = Vec::new();
    for r in 0..q {
        match image.residues.iter().position(|&x| x == r) {
            Some(i) => basis.push((r, image.gens[i].lead().unwrap().to_exact())),
            None => {
                basis.push((r, LaurentSeries::x_pow(field, r)));
                complement.push(r);
            }
        }
    }
    let threshold = image.gens.iter().map(greedy_threshold).min().unwrap_or(Inf);
    let no_jump = gens.iter().all(|g| min_jump(g).is_none());
    Ok(PseudoComplementData { level: image.level, basis, complement_indices: complement, gamma: comp_j(gens), no_jump, threshold, image })
}

/// Σ M.t^level·X^j over the complement residues, as generators.
pub fn complement_generators(field: Field, data: &PseudoComplementData) -> Vec<TwistedPoly> {
    data.complement_indices
        .iter()
        .map(|&j| TwistedPoly::monomial(data.level as usize, LaurentSeries::x_pow(field, j)))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    #[serde(serialize_with = "ser_series")]
    pub a: LaurentSeries,
    #[serde(serialize_with = "ser_series")]
    pub c: LaurentSeries,
    #[serde(serialize_with = "ser_series")]
    pub r: LaurentSeries,
    /// v(r) ≥ radius.
    pub radius: Trop,
    /// Coordinates yⱼ with a = Σ yⱼ.gⱼ over the normalized generators.
    #[serde(skip)]
    pub ys: Vec<LaurentSeries>,
}

fn ser_series<S: serde::Serializer>(x: &LaurentSeries, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// x = a + c + r with a in the image, c in the complement and v(r) ≥ radius.
pub fn comp_decompose(x: &LaurentSeries, data: &PseudoComplementData) -> Result<Decomposition> {
    let f = x.field();
    let d = f.d() as i64;
    let q = d.pow(data.level);
    let img = &data.image;
    let greedy_to = if data.threshold.is_inf() { data.gamma } else { data.threshold };
    let mut radius = greedy_to.max(data.gamma);
    if x.prec() < radius {
        return Err(Error::InsufficientPrecision(format!("decomposition needs x known to O(X^{radius})")));
    }
    let mut rest = x.clone();
    let mut a = LaurentSeries::zero(f);
    let mut c = LaurentSeries::zero(f);
    let mut ys = vec![LaurentSeries::zero(f); img.gens.len()];
    while let Some((v, coef)) = rest.leading() {
        if Fin(v) >= greedy_to {
            break;
        }
        let rho = v.rem_euclid(q);
        match img.residues.iter().position(|&r| r == rho) {
            Some(j) => {
                let y = LaurentSeries::monomial(f, coef, (v - rho) / q);
                let part = img.gens[j].apply(&y);
                debug_assert_eq!(part.leading(), Some((v, coef)));
                a = a.add(&part);
                rest = rest.sub(&part);
                ys[j] = ys[j].add(&y);
            }
            None => {
                let part = LaurentSeries::monomial(f, coef, v);
                c = c.add(&part);
                rest = rest.sub(&part);
            }
        }
    }
    if greedy_to < data.gamma {
        // A + C need not reach P_gamma; the greedy radius is always attained.
        match window_finish(data, &mut rest, &mut a, &mut c, &mut ys, greedy_to, data.gamma) {
            Err(Error::WindowSolveFailure(_)) => radius = greedy_to,
            r => r?,
        }
    }
    Ok(Decomposition { a, c, r: rest, radius, ys })
}

/// 𝔽_d-linear solve pushing the remainder from P_lo into P_hi.
fn window_finish(
    data: &PseudoComplementData,
    rest: &mut LaurentSeries,
    a: &mut LaurentSeries,
    c: &mut LaurentSeries,
    ys: &mut [LaurentSeries],
    lo: Trop,
    hi: Trop,
) -> Result<()> {
    let (Fin(lo), Fin(hi)) = (lo, hi) else { return Ok(()) };
    let f = rest.field();
    let d = f.d() as i64;
    let q = d.pow(data.level);
    let mut columns: Vec<(Option<usize>, i64, LaurentSeries)> = Vec::new();
    for (j, g) in data.image.gens.iter().enumerate() {
        let start = crate::logic::trop_preimage(g, Fin(lo)).and_then(|t| t.fin()).unwrap_or(lo);
        let start = start.min(dominance_end(g).unwrap_or(start)) - 1;
        let end = crate::logic::trop_preimage(g, Fin(hi)).and_then(|t| t.fin()).unwrap_or(hi);
        for n in start..end.max(start) {
            columns.push((Some(j), n, g.apply(&LaurentSeries::x_pow(f, n))));
        }
    }
    for v in lo..hi {
        if data.complement_indices.contains(&v.rem_euclid(q)) {
            columns.push((None, v, LaurentSeries::x_pow(f, v)));
        }
    }
    let out_lo = columns.iter().filter_map(|(_, _, s)| s.leading().map(|l| l.0)).min().unwrap_or(lo).min(lo);
    let rows = (hi - out_lo) as usize;
    let mut m = FdMatrix::zeros(f, rows, columns.len());
    for (k, (_, _, s)) in columns.iter().enumerate() {
        for (n, coef) in s.terms() {
            if n < hi {
                m.set((n - out_lo) as usize, k, coef);
            }
        }
    }
    let b: Vec<u32> = (out_lo..hi).map(|n| rest.coeff(n)).collect();
    let sol = m.solve(&b).ok_or_else(|| Error::WindowSolveFailure(format!("no solution on [{lo}, {hi})")))?;
    for (k, (slot, n, s)) in columns.iter().enumerate() {
        if sol[k] == 0 {
            continue;
        }
        let part = s.scale(sol[k]);
        *rest = rest.sub(&part);
        match slot {
            Some(j) => {
                *a = a.add(&part);
                ys[*j] = ys[*j].add(&LaurentSeries::monomial(f, sol[k], *n));
            }
            None => *c = c.add(&part),
        }
    }
    Ok(())
}

/// Σ M.aᵢ ≈ Σ M.bᵢ.
pub fn comp_m_immediate(field: Field, a: &[TwistedPoly], b: &[TwistedPoly]) -> Result<bool> {
    let d = field.d() as i64;
    Ok(image_signature(field, a)?.same_as(&image_signature(field, b)?, d))
}

/// Σ M.aᵢ ∥ Σ M.bᵢ.
pub fn comp_pseudo_orthogonal(field: Field, a: &[TwistedPoly], b: &[TwistedPoly]) -> Result<bool> {
    let d = field.d() as i64;
    Ok(image_signature(field, a)?.disjoint_from(&image_signature(field, b)?, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    fn polys(f: Field, s: &[&str]) -> Vec<TwistedPoly> {
        s.iter().map(|x| TwistedPoly::parse(f, x).unwrap()).collect()
    }

    #[test]
    fn complement_examples() {
        let f = f2();
        let data = comp_f(f, &polys(f, &["t - 1"])).unwrap();
        assert_eq!((data.level, data.complement_indices.clone()), (1, vec![1]));
        assert_eq!(complement_generators(f, &data), polys(f, &["t*X"]));
        assert!(comp_f(f, &polys(f, &["t", "t*X"])).unwrap().complement_indices.is_empty());
        let one = comp_f(f, &polys(f, &["1"])).unwrap();
        assert_eq!((one.level, one.complement_indices.len()), (0, 0));
    }

    #[test]
    fn comp_j_examples() {
        let f = f2();
        assert_eq!(comp_j(&polys(f, &["t - 1"])), Fin(-1));
        assert_eq!(comp_j(&polys(f, &["t*X^-1 + 1"])), Fin(0));
        assert_eq!(comp_j(&polys(f, &["t"])), Fin(0));
        assert!(comp_f(f, &polys(f, &["t"])).unwrap().no_jump);
    }

    #[test]
    fn relations() {
        let f = f2();
        assert!(comp_m_immediate(f, &polys(f, &["t - 1"]), &polys(f, &["t"])).unwrap());
        assert!(!comp_m_immediate(f, &polys(f, &["t"]), &polys(f, &["t*X"])).unwrap());
        assert!(comp_pseudo_orthogonal(f, &polys(f, &["t"]), &polys(f, &["t*X"])).unwrap());
        let g = polys(f, &["t^2*X + X^3", "1 + t"]);
        assert!(comp_m_immediate(f, &g, &g).unwrap());
    }

    #[test]
    fn artin_schreier_examples() {
        let f = f2();
        let data = comp_f(f, &polys(f, &["t - 1"])).unwrap();
        let x = LaurentSeries::x_pow(f, -1);
        let dec = comp_decompose(&x, &data).unwrap();
        assert!(dec.a.is_zero() && dec.r.is_zero());
        assert_eq!(dec.c, x);
        let x = LaurentSeries::x_pow(f, -2);
        let dec = comp_decompose(&x, &data).unwrap();
        assert_eq!(dec.a, LaurentSeries::from_terms(f, &[(-2, 1), (-1, 1)]));
        assert_eq!(dec.c, LaurentSeries::x_pow(f, -1));
        assert!(dec.r.is_zero());
        let x = LaurentSeries::from_terms(f, &[(0, 1), (3, 1)]);
        let dec = comp_decompose(&x, &data).unwrap();
        assert_eq!(dec.r, x);
    }

    #[test]
    fn window_finish_reaches_gamma() {
        let f = f2();
        let data = comp_f(f, &polys(f, &["t + X^-5"])).unwrap();
        assert!(data.threshold < data.gamma);
        let x = LaurentSeries::from_terms(f, &[(-20, 1), (-9, 1), (-7, 1), (2, 1)]);
        let dec = comp_decompose(&x, &data).unwrap();
        assert_eq!(dec.a.add(&dec.c).add(&dec.r), x);
        assert!(dec.r.val_lower_bound() >= data.gamma);
    }

    #[test]
    fn unreachable_gamma_keeps_greedy_radius() {
        let f = f2();
        let data = comp_f(f, &polys(f, &["t^2*X^2 + t*(X^-2 + X^2) + 1"])).unwrap();
        assert_eq!((data.threshold, data.gamma), (Fin(-6), Fin(-3)));
        let x = LaurentSeries::x_pow(f, -6);
        let dec = comp_decompose(&x, &data).unwrap();
        assert_eq!(dec.radius, Fin(-6));
        assert_eq!(dec.r, x);
    }
}
