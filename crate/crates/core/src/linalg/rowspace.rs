use crate::error::Result;
use crate::linalg::rmatrix::{pivot_key, RMatrix};
use crate::linalg::separable::lower_separable;
use crate::logic::LambdaTerm;
use crate::ore::TwistedPoly;

/// Column echelon form of `gens`ᵀ under right-Euclid column operations.
/// Each returned pivot is (row, column) of the transposed matrix.
struct Echelon {
    m: RMatrix,
    pivots: Vec<usize>,
}

fn echelon(gens: &RMatrix) -> Result<Echelon> {
    let mut m = gens.transpose();
    let mut pivots = Vec::new();
    let mut pc = 0;
    for r in 0..m.rows() {
        if pc == m.cols() {
            break;
        }
        loop {
            let best = (pc..m.cols())
                .filter(|&c| !m.get(r, c).is_zero())
                .min_by_key(|&c| pivot_key(m.get(r, c), c, r));
            let Some(c) = best else { break };
            m.swap_cols(pc, c);
            let mut reduced = false;
            for c in pc + 1..m.cols() {
                if m.get(r, c).is_zero() {
                    continue;
                }
                let (quot, rem) = TwistedPoly::divmod_right(m.get(r, c), m.get(r, pc))?;
                m.col_add_mul(c, pc, &quot.neg());
                m.set(r, c, rem);
                reduced = true;
            }
            if !reduced || (pc + 1..m.cols()).all(|c| m.get(r, c).is_zero()) {
                break;
            }
        }
        if !m.get(r, pc).is_zero() {
            pivots.push(r);
            pc += 1;
        }
    }
    Ok(Echelon { m, pivots })
}

fn contains(ech: &Echelon, v: &[TwistedPoly]) -> Result<bool> {
    let mut res = v.to_vec();
    let mut k = 0;
    for r in 0..res.len() {
        if k < ech.pivots.len() && ech.pivots[k] == r {
            if !res[r].is_zero() {
                let (s, rem) = TwistedPoly::divmod_right(&res[r], ech.m.get(r, k))?;
                if !rem.is_zero() {
                    return Ok(false);
                }
                for (i, x) in res.iter_mut().enumerate() {
                    *x = x.sub(&ech.m.get(i, k).mul(&s));
                }
            }
            k += 1;
        } else if !res[r].is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether every row of `b` lies in the right R-module generated by the rows of `a`.
pub fn rowspace_contains(a: &RMatrix, b: &RMatrix) -> Result<bool> {
    let ech = echelon(a)?;
    for i in 0..b.rows() {
        if !contains(&ech, b.row(i))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Equality of the right R-modules generated by the rows.
pub fn mat_rowspace_equal(a: &RMatrix, b: &RMatrix) -> Result<bool> {
    Ok(rowspace_contains(a, b)? && rowspace_contains(b, a)?)
}

/// Rank of the row span over the division ring of right fractions of R.
pub fn saturated_rank(a: &RMatrix) -> Result<usize> {
    if a.rows() == 0 {
        return Ok(0);
    }
    Ok(echelon(a)?.pivots.len())
}

/// Equality of row spans after saturation (over the division ring of fractions).
pub fn saturated_span_equal(a: &RMatrix, b: &RMatrix) -> Result<bool> {
    let ra = saturated_rank(a)?;
    let rb = saturated_rank(b)?;
    Ok(ra == rb && saturated_rank(&a.vcat(b))? == ra)
}

/// Rows read as equations Σ z_c.(m_c) = 0 on coordinates: the number of
/// separable pivots after splitting off powers of t, so each pivot fixes one
/// coordinate near zero.
pub fn separable_rank(a: &RMatrix) -> Result<usize> {
    let zero = vec![LambdaTerm::zero(a.field()); a.rows()];
    Ok(lower_separable(&a.transpose(), &zero)?.rank)
}

/// The two systems have the same solutions near zero.
pub fn near_zero_equal(a: &RMatrix, b: &RMatrix) -> Result<bool> {
    let both = separable_rank(&a.vcat(b))?;
    Ok(separable_rank(a)? == both && separable_rank(b)? == both)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Field;

    fn m(s: &str) -> RMatrix {
        RMatrix::parse_json(Field::prime(2).unwrap(), s).unwrap()
    }

    #[test]
    fn examples() {
        let a = m(r#"[["t", "X"], ["1", "t"]]"#);
        assert!(mat_rowspace_equal(&a, &a).unwrap());
        assert!(!mat_rowspace_equal(&m(r#"[["t"]]"#), &m(r#"[["t^2"]]"#)).unwrap());
        assert!(mat_rowspace_equal(&m(r#"[["t"], ["1"]]"#), &m(r#"[["1"]]"#)).unwrap());
    }

    #[test]
    fn near_zero() {
        assert!(near_zero_equal(&m(r#"[["t", "t*X"]]"#), &m(r#"[["1", "0"], ["0", "1"]]"#)).unwrap());
        assert!(near_zero_equal(&m(r#"[["t"]]"#), &m(r#"[["t^2"]]"#)).unwrap());
        assert!(!near_zero_equal(&m(r#"[["t", "t"]]"#), &m(r#"[["1", "0"], ["0", "1"]]"#)).unwrap());
        assert_eq!(separable_rank(&m(r#"[["t", "X"], ["t + 1", "0"]]"#)).unwrap(), 2);
    }

    #[test]
    fn saturation() {
        assert!(saturated_span_equal(&m(r#"[["t"]]"#), &m(r#"[["t^2"]]"#)).unwrap());
        assert!(!saturated_span_equal(&m(r#"[["t", "0"]]"#), &m(r#"[["0", "1"]]"#)).unwrap());
        assert!(saturated_span_equal(
            &m(r#"[["t", "X"], ["t + 1", "0"]]"#),
            &m(r#"[["1", "0"], ["0", "1"]]"#)
        )
        .unwrap());
    }

    #[test]
    fn combination_is_contained() {
        let a = m(r#"[["t + X", "1", "0"], ["0", "t", "X^2"]]"#);
        let s = TwistedPoly::parse(Field::prime(2).unwrap(), "t*X + 1").unwrap();
        let combo: Vec<TwistedPoly> = (0..3).map(|j| a.get(0, j).mul(&s).add(a.get(1, j))).collect();
        let b = RMatrix::from_rows(a.field(), 3, vec![combo]);
        assert!(rowspace_contains(&a, &b).unwrap());
        assert!(!rowspace_contains(&b, &a).unwrap());
    }
}
