use crate::error::Result;
use crate::linalg::rmatrix::{pivot_key, RMatrix};
use crate::logic::LambdaTerm;
use crate::ore::TwistedPoly;

/// ȳ.A = u rewritten as ȳ'.S = w, ȳ' = P·ȳ, S lower triangular separable.
///
/// Columns `rank..` of S are zero; the corresponding entries of `w` are the
/// side conditions `psi` (each must vanish).
#[derive(Clone, Debug)]
pub struct LowerSeparable {
    /// Row i of S belongs to variable `perm[i]` of the input.
    pub perm: Vec<usize>,
    pub p: RMatrix,
    pub s: RMatrix,
    pub w: Vec<LambdaTerm>,
    pub rank: usize,
    pub psi: Vec<LambdaTerm>,
}

pub fn lower_separable(a: &RMatrix, u: &[LambdaTerm]) -> Result<LowerSeparable> {
    assert_eq!(a.cols(), u.len());
    let f = a.field();
    let rows = a.rows();
    let mut m = a.clone();
    let mut w = u.to_vec();
    let mut perm: Vec<usize> = (0..rows).collect();
    let mut k = 0;
    loop {
        let nonzero: Vec<(usize, usize)> = (k..rows)
            .flat_map(|r| (k..m.cols()).map(move |c| (r, c)))
            .filter(|&(r, c)| !m.get(r, c).is_zero())
            .collect();
        if nonzero.is_empty() {
            break;
        }
        let sep = nonzero
            .iter()
            .copied()
            .filter(|&(r, c)| m.get(r, c).is_separable())
            .min_by_key(|&(r, c)| pivot_key(m.get(r, c), c, r));
        let Some((r, c)) = sep else {
            split_columns(&mut m, &mut w, k)?;
            continue;
        };
        m.swap_rows(k, r);
        perm.swap(k, r);
        m.swap_cols(k, c);
        w.swap(k, c);
        loop {
            for c in k + 1..m.cols() {
                if m.get(k, c).is_zero() {
                    continue;
                }
                let (quot, rem) = TwistedPoly::divmod_right(m.get(k, c), m.get(k, k))?;
                let neg = quot.neg();
                m.col_add_mul(c, k, &neg);
                m.set(k, c, rem);
                w[c] = w[c].sub(&w[k].mul_r(&quot));
            }
            let next = (k + 1..m.cols())
                .filter(|&c| !m.get(k, c).is_zero())
                .min_by_key(|&c| pivot_key(m.get(k, c), c, k));
            match next {
                Some(c) => {
                    m.swap_cols(k, c);
                    w.swap(k, c);
                }
                None => break,
            }
        }
        debug_assert!(m.get(k, k).is_separable());
        k += 1;
        if k == rows {
            break;
        }
    }
    let psi = w[k..].iter().filter(|t| !t.is_zero()).cloned().collect();
    Ok(LowerSeparable { p: RMatrix::permutation(f, &perm), perm, s: m, w, rank: k, psi })
}

/// Replace each nonzero column c ≥ k, all of whose entries lie in t^e R, by the
/// d^e columns of e-th roots: Σ y.(t^e q) = u ⟺ ∀v Σ y.ᵉ√(q_v) = λ⁽ᵉ⁾ᵥ(u).
fn split_columns(m: &mut RMatrix, w: &mut Vec<LambdaTerm>, k: usize) -> Result<()> {
    let f = m.field();
    let d = f.d() as i64;
    let mut c = k;
    while c < m.cols() {
        if m.col_is_zero(c) {
            c += 1;
            continue;
        }
        let col = m.col(c);
        let e = col.iter().filter_map(|q| q.t_order()).min().unwrap() as u32;
        if e == 0 {
            c += 1;
            continue;
        }
        let stripped: Vec<TwistedPoly> = col.iter().map(|q| if q.is_zero() { q.clone() } else { q.strip_t(e as usize) }).collect();
        let term = w.remove(c);
        m.remove_col(c);
        for v in 0..d.pow(e) {
            let new_col: Vec<TwistedPoly> = stripped.iter().map(|q| q.root_component(e, v)).collect();
            m.push_col(new_col);
            w.push(term.lambda(e, v)?);
        }
    }
    Ok(())
}
