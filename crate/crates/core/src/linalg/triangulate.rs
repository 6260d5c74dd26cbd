use crate::error::{Error, Result};
use crate::linalg::rmatrix::{pivot_key, RMatrix};
use crate::ore::TwistedPoly;
use crate::series::DEFAULT_PRECISION;
use crate::tropical::{Fin, Inf, Trop};

/// T = P·A·Q with T lower triangular, P a permutation, Q unimodular (Q·Q⁻¹ = I).
#[derive(Clone, Debug)]
pub struct Triangulation {
    pub p: RMatrix,
    pub q: RMatrix,
    pub q_inv: RMatrix,
    pub t: RMatrix,
    pub rank: usize,
    /// T is P·A·Q with the entries above the diagonal, which vanish modulo X^prec, set to zero.
    pub prec: Trop,
}

impl Triangulation {
    /// T lower triangular, Q·Q⁻¹ = I, and P·A·Q = T modulo X^n in every coefficient,
    /// n the lesser of the working precision and `prec`.
    pub fn verifies(&self, a: &RMatrix) -> bool {
        let n = self.prec.fin().map_or(DEFAULT_PRECISION, |p| p.min(DEFAULT_PRECISION));
        self.t.is_lower_triangular()
            && self.q.mul(&self.q_inv).agrees_with(&RMatrix::identity(a.field(), a.cols()))
            && self.p.mul(a).mul(&self.q).agrees_to(&self.t, n)
    }
}

/// Column op col_c −= col_j·s applied to T and Q, with the inverse row op on Q⁻¹.
fn col_sub(t: &mut RMatrix, q: &mut RMatrix, q_inv: &mut RMatrix, c: usize, j: usize, s: &TwistedPoly) {
    let neg = s.neg();
    t.col_add_mul(c, j, &neg);
    q.col_add_mul(c, j, &neg);
    q_inv.row_add_mul(j, c, s);
}

fn col_swap(t: &mut RMatrix, q: &mut RMatrix, q_inv: &mut RMatrix, a: usize, b: usize) {
    t.swap_cols(a, b);
    q.swap_cols(a, b);
    q_inv.swap_rows(a, b);
}

/// Division caps tried in turn; quotients can need far more than the working precision.
const CAPS: [i64; 4] = [DEFAULT_PRECISION, 4 * DEFAULT_PRECISION, 16 * DEFAULT_PRECISION, 64 * DEFAULT_PRECISION];

/// Triangulates A, retrying with larger division caps until the witness holds to the working precision.
pub fn triangulate(a: &RMatrix) -> Result<Triangulation> {
    for cap in CAPS {
        let tr = triangulate_to(a, cap)?;
        if tr.prec >= Fin(DEFAULT_PRECISION) && tr.verifies(a) {
            return Ok(tr);
        }
    }
    Err(Error::InsufficientPrecision(format!("triangulation witness below X^{DEFAULT_PRECISION}")))
}

fn triangulate_to(a: &RMatrix, cap: i64) -> Result<Triangulation> {
    let f = a.field();
    let (rows, cols) = (a.rows(), a.cols());
    let mut t = a.clone();
    let mut perm: Vec<usize> = (0..rows).collect();
    let mut q = RMatrix::identity(f, cols);
    let mut q_inv = RMatrix::identity(f, cols);
    if a.is_lower_triangular() {
        let rank = (0..rows.min(cols)).take_while(|&i| !a.get(i, i).is_zero()).count();
        return Ok(Triangulation { p: RMatrix::identity(f, rows), q: q.clone(), q_inv, t, rank, prec: Inf });
    }
    let mut k = 0;
    while k < rows && k < cols {
        let best = (k..rows)
            .flat_map(|r| (k..cols).map(move |c| (r, c)))
            .filter(|&(r, c)| !t.get(r, c).is_zero())
            .min_by_key(|&(r, c)| pivot_key(t.get(r, c), c, r));
        let Some((r, c)) = best else { break };
        t.swap_rows(k, r);
        perm.swap(k, r);
        col_swap(&mut t, &mut q, &mut q_inv, k, c);
        loop {
            for c in k + 1..cols {
                if t.get(k, c).is_zero() {
                    continue;
                }
                let (quot, rem) = TwistedPoly::divmod_right_prec(t.get(k, c), t.get(k, k), cap)?;
                col_sub(&mut t, &mut q, &mut q_inv, c, k, &quot);
                t.set(k, c, rem);
            }
            let next = (k + 1..cols)
                .filter(|&c| !t.get(k, c).is_zero())
                .min_by_key(|&c| pivot_key(t.get(k, c), c, k));
            match next {
                Some(c) => col_swap(&mut t, &mut q, &mut q_inv, k, c),
                None => break,
            }
        }
        k += 1;
    }
    // rounding in the eliminations is amplified by later quotients, so T is rebuilt from Q
    let p = RMatrix::permutation(f, &perm);
    let mut t = p.mul(a).mul(&q);
    let mut prec = Inf;
    for i in 0..rows {
        for j in i + 1..cols {
            let e = t.get(i, j);
            prec = e.coeffs().iter().map(|x| x.val_lower_bound()).fold(prec, Trop::min);
            t.set(i, j, TwistedPoly::zero(f));
        }
    }
    Ok(Triangulation { p, q, q_inv, t, rank: k, prec })
}
