use crate::error::{Error, Result};
use crate::linalg::fd::FdMatrix;
use crate::linalg::rmatrix::RMatrix;
use crate::ore::TwistedPoly;
use crate::series::{Field, LaurentSeries};

const MAX_STEPS: usize = 10_000;
const RELATION_WINDOWS: [i64; 5] = [2, 4, 8, 16, 32];

/// Normal form Q' with M^k.Q = M^k'.Q'.
///
/// The nonzero entries of the first column of Q' share one degree `level` and
/// their leading coefficients have distinct valuations in [0, d^level) with
/// lowest coefficient 1. Q' = T·Q.
#[derive(Clone, Debug)]
pub struct Vddku {
    pub q: RMatrix,
    pub t: RMatrix,
    pub level: u32,
    /// Valuation of the leading coefficient of each first-column entry (None for zero entries).
    pub lead_vals: Vec<Option<i64>>,
}

pub fn vddku(q: &RMatrix) -> Result<Vddku> {
    let f = q.field();
    let d = f.d() as i64;
    let mut m = q.clone();
    let mut t = RMatrix::identity(f, q.rows());
    let mut steps = 0;
    let level = loop {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::SemilinearSolveFailure("relation elimination did not terminate".into()));
        }
        let active: Vec<usize> = (0..m.rows()).filter(|&i| !m.get(i, 0).is_zero()).collect();
        if active.is_empty() {
            break 0;
        }
        let degs: Vec<u32> = active.iter().map(|&i| m.get(i, 0).degree() as u32).collect();
        let leads: Vec<LaurentSeries> = active.iter().map(|&i| m.get(i, 0).lead().unwrap().to_exact()).collect();
        if let Some(a) = find_relation(f, &leads, &degs)? {
            // Claim 1: row i0 ← Σ t^(e'−eᵢ) aᵢ rowᵢ lowers the first-column degree
            let pos = (0..active.len()).filter(|&j| !a[j].is_zero()).max_by_key(|&j| (degs[j], usize::MAX - j)).unwrap();
            let e0 = degs[pos];
            let i0 = active[pos];
            let combo: Vec<(usize, TwistedPoly)> = (0..active.len())
                .filter(|&j| !a[j].is_zero())
                .map(|j| (active[j], TwistedPoly::monomial((e0 - degs[j]) as usize, a[j].clone())))
                .collect();
            let mut new_m = vec![TwistedPoly::zero(f); m.cols()];
            let mut new_t = vec![TwistedPoly::zero(f); t.cols()];
            for (i, s) in &combo {
                for (dst, e) in new_m.iter_mut().zip(m.row(*i)) {
                    *dst = dst.add(&s.mul(e));
                }
                for (dst, e) in new_t.iter_mut().zip(t.row(*i)) {
                    *dst = dst.add(&s.mul(e));
                }
            }
            for (j, e) in new_m.into_iter().enumerate() {
                m.set(i0, j, e);
            }
            for (j, e) in new_t.into_iter().enumerate() {
                t.set(i0, j, e);
            }
            debug_assert!(m.get(i0, 0).degree() < e0 as i64);
            continue;
        }
        // Claim 2: split rows of lower degree into d^(e−eᵢ) rows t^(e−eᵢ)X^u·rowᵢ
        let e = *degs.iter().max().unwrap();
        let mut k = 0;
        while k < m.rows() {
            let q0 = m.get(k, 0);
            if q0.is_zero() || q0.degree() as u32 == e {
                k += 1;
                continue;
            }
            let gap = e - q0.degree() as u32;
            let row_m = m.remove_row(k);
            let row_t = t.remove_row(k);
            for u in 0..d.pow(gap) {
                let s = TwistedPoly::monomial(gap as usize, LaurentSeries::x_pow(f, u));
                m.push_row(row_m.iter().map(|x| s.mul(x)).collect());
                t.push_row(row_t.iter().map(|x| s.mul(x)).collect());
            }
        }
        separate_valuations(&mut m, &mut t, e)?;
        break e;
    };
    let keep: Vec<usize> = (0..m.rows()).filter(|&i| !m.row_is_zero(i)).collect();
    let m = m.select_rows(&keep);
    let t = t.select_rows(&keep);
    let lead_vals = (0..m.rows())
        .map(|i| m.get(i, 0).lead().and_then(|c| c.leading()).map(|(v, _)| v))
        .collect();
    Ok(Vddku { q: m, t, level, lead_vals })
}

fn lead_data(m: &RMatrix, i: usize) -> Option<(i64, u32)> {
    m.get(i, 0).lead().and_then(|c| c.leading())
}

/// Row reduction so that leading valuations are distinct mod d^e, then
/// scaling each into [0, d^e) with lowest coefficient 1.
fn separate_valuations(m: &mut RMatrix, t: &mut RMatrix, e: u32) -> Result<()> {
    let f = m.field();
    let q = (f.d() as i64).pow(e);
    for _ in 0..MAX_STEPS {
        let active: Vec<(usize, i64, u32)> = (0..m.rows())
            .filter_map(|i| lead_data(m, i).map(|(v, c)| (i, v, c)))
            .collect();
        let clash = active.iter().enumerate().find_map(|(a, &(i, vi, ci))| {
            active[a + 1..]
                .iter()
                .find(|&&(_, vj, _)| (vi - vj).rem_euclid(q) == 0)
                .map(|&(j, vj, cj)| if vi <= vj { (i, vi, ci, j, vj, cj) } else { (j, vj, cj, i, vi, ci) })
        });
        let Some((i, vi, ci, j, vj, cj)) = clash else {
            for (i, v, c) in active {
                let b = LaurentSeries::monomial(f, f.inv(c)?, -v.div_euclid(q));
                let s = TwistedPoly::constant(b);
                m.row_scale(i, &s);
                t.row_scale(i, &s);
            }
            return Ok(());
        };
        let kappa = f.mul(cj, f.inv(ci)?);
        let b = TwistedPoly::constant(LaurentSeries::monomial(f, f.neg(kappa), (vj - vi) / q));
        m.row_add_mul(j, i, &b);
        t.row_add_mul(j, i, &b);
        if m.get(j, 0).degree() != e as i64 {
            return Err(Error::SemilinearSolveFailure("leading coefficients became dependent".into()));
        }
    }
    Err(Error::SemilinearSolveFailure("valuation separation did not terminate".into()))
}

/// Nonzero (aᵢ) with Σ aᵢ^(d^eᵢ) cᵢ = 0, if one exists.
fn find_relation(f: Field, leads: &[LaurentSeries], degs: &[u32]) -> Result<Option<Vec<LaurentSeries>>> {
    if leads.len() < 2 && degs.iter().all(|&e| e == *degs.iter().max().unwrap()) {
        return Ok(None);
    }
    if !dependent(f, leads, degs)? {
        return Ok(None);
    }
    let d = f.d() as i64;
    for &w in &RELATION_WINDOWS {
        // unknown coefficients of aᵢ on [−w, w)
        let mut images = Vec::new();
        for (c, &e) in leads.iter().zip(degs) {
            for n in -w..w {
                images.push(LaurentSeries::x_pow(f, n * d.pow(e)).mul(c));
            }
        }
        let lo = images.iter().filter_map(|s| s.leading().map(|(v, _)| v)).min().unwrap();
        let hi = images.iter().map(|s| s.support_end()).max().unwrap();
        let rows: Vec<Vec<u32>> = images.iter().map(|s| (lo..hi).map(|n| s.coeff(n)).collect()).collect();
        let mat = FdMatrix::from_rows(f, (hi - lo) as usize, rows);
        if let Some(v) = mat.left_kernel().into_iter().next() {
            let width = (2 * w) as usize;
            let a = (0..leads.len())
                .map(|i| LaurentSeries::from_coeffs(f, -w, v[i * width..(i + 1) * width].to_vec(), crate::tropical::Inf))
                .collect();
            return Ok(Some(a));
        }
    }
    Err(Error::SemilinearSolveFailure(format!(
        "no relation with coefficients in a window of width {}",
        2 * RELATION_WINDOWS[RELATION_WINDOWS.len() - 1]
    )))
}

/// Whether the cᵢ admit a nontrivial relation: rank test of the level-e
/// coordinates of X^(u dᵉⁱ)cᵢ over 𝔽_d(X).
fn dependent(f: Field, leads: &[LaurentSeries], degs: &[u32]) -> Result<bool> {
    let d = f.d() as i64;
    let e = *degs.iter().max().unwrap();
    let mut rows = Vec::new();
    for (c, &ei) in leads.iter().zip(degs) {
        for u in 0..d.pow(e - ei) {
            let v = LaurentSeries::x_pow(f, u * d.pow(ei)).mul(c);
            rows.push((0..d.pow(e)).map(|w| v.lambda(e, w)).collect::<Vec<_>>());
        }
    }
    let n = rows.len();
    Ok(laurent_rank(rows)? < n)
}

/// Exact quotient of Laurent polynomials, if it exists.
fn div_exact(a: &LaurentSeries, b: &LaurentSeries) -> Option<LaurentSeries> {
    if a.is_zero() {
        return Some(a.clone());
    }
    let cap = a.support_end() - b.support_end() + 1;
    let q = a.div(b, cap).ok()?.to_exact();
    (q.mul(b) == *a).then_some(q)
}

/// Rank over 𝔽_d(X) of a matrix of exact Laurent polynomials (fraction-free elimination).
pub fn laurent_rank(mut m: Vec<Vec<LaurentSeries>>) -> Result<usize> {
    let Some(cols) = m.first().map(|r| r.len()) else { return Ok(0) };
    let f = m[0].first().map(|x| x.field());
    let Some(f) = f else { return Ok(0) };
    let mut prev = LaurentSeries::one(f);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        for i in rank + 1..m.len() {
            for j in c + 1..cols {
                let num = m[rank][c].mul(&m[i][j]).sub(&m[i][c].mul(&m[rank][j]));
                m[i][j] = div_exact(&num, &prev)
                    .ok_or_else(|| Error::InsufficientPrecision("inexact fraction-free step".into()))?;
            }
            m[i][c] = LaurentSeries::zero(f);
        }
        prev = m[rank][c].clone();
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    Ok(rank)
}
