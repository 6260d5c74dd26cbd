use std::fmt;

use crate::error::{Error, Result};
use crate::ore::TwistedPoly;
use crate::series::{Field, LaurentSeries};
use crate::tropical::{Inf, Trop};

/// A rows × cols matrix over R acting on row vectors: ȳ ↦ ȳ.A.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Vec<TwistedPoly>>,
}

impl RMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        RMatrix { field, rows, cols, data: vec![vec![TwistedPoly::zero(field); cols]; rows] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i][i] = TwistedPoly::one(field);
        }
        m
    }

    pub fn from_rows(field: Field, cols: usize, data: Vec<Vec<TwistedPoly>>) -> Self {
        assert!(data.iter().all(|r| r.len() == cols), "ragged matrix");
        RMatrix { field, rows: data.len(), cols, data }
    }

    /// Permutation matrix with row i equal to e_{perm[i]}, so (P·A) row i = A row perm[i].
    pub fn permutation(field: Field, perm: &[usize]) -> Self {
        let mut m = Self::zeros(field, perm.len(), perm.len());
        for (i, &j) in perm.iter().enumerate() {
            m.data[i][j] = TwistedPoly::one(field);
        }
        m
    }

    pub fn column(entries: Vec<TwistedPoly>) -> Self {
        let field = entries[0].field();
        Self::from_rows(field, 1, entries.into_iter().map(|e| vec![e]).collect())
    }

    /// Parse `[["t+1","X"],["0","t"]]`.
    pub fn parse_json(field: Field, text: &str) -> Result<Self> {
        let raw: Vec<Vec<serde_json::Value>> = serde_json::from_str(text)
            .map_err(|e| Error::parse(e.column().saturating_sub(1), e.to_string()))?;
        let cols = raw.first().map_or(0, |r| r.len());
        let mut data = Vec::new();
        for row in raw {
            if row.len() != cols {
                return Err(Error::parse(0, "rows of different lengths"));
            }
            let mut out = Vec::new();
            for v in row {
                let s = match v {
                    serde_json::Value::String(s) => s,
                    serde_json::Value::Number(n) => n.to_string(),
                    other => return Err(Error::parse(0, format!("bad entry {other}"))),
                };
                out.push(TwistedPoly::parse(field, &s)?);
            }
            data.push(out);
        }
        Ok(Self::from_rows(field, cols, data))
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.data.iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect()
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> &TwistedPoly {
        &self.data[i][j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: TwistedPoly) {
        self.data[i][j] = v;
    }
    pub fn row(&self, i: usize) -> &[TwistedPoly] {
        &self.data[i]
    }
    pub fn col(&self, j: usize) -> Vec<TwistedPoly> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().flatten().all(|e| e.is_zero())
    }

    pub fn col_is_zero(&self, j: usize) -> bool {
        self.data.iter().all(|r| r[j].is_zero())
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        self.data[i].iter().all(|e| e.is_zero())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut out = Self::zeros(self.field, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    if o.data[k][j].is_zero() {
                        continue;
                    }
                    out.data[i][j] = out.data[i][j].add(&self.data[i][k].mul(&o.data[k][j]));
                }
            }
        }
        out
    }

    /// ȳ.A with (ȳ.A)_j = Σᵢ yᵢ.a_ij.
    pub fn apply(&self, ys: &[LaurentSeries]) -> Vec<LaurentSeries> {
        (0..self.cols)
            .map(|j| {
                ys.iter()
                    .zip(&self.data)
                    .fold(LaurentSeries::zero(self.field), |acc, (y, r)| acc.add(&r[j].apply(y)))
            })
            .collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.data.swap(a, b);
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        for r in &mut self.data {
            r.swap(a, b);
        }
    }

    /// col_c ← col_c + col_j·s.
    pub fn col_add_mul(&mut self, c: usize, j: usize, s: &TwistedPoly) {
        for r in &mut self.data {
            if !r[j].is_zero() {
                r[c] = r[c].add(&r[j].mul(s));
            }
        }
    }

    /// row_i ← row_i + s·row_j.
    pub fn row_add_mul(&mut self, i: usize, j: usize, s: &TwistedPoly) {
        let src = self.data[j].clone();
        for (dst, e) in self.data[i].iter_mut().zip(&src) {
            if !e.is_zero() {
                *dst = dst.add(&s.mul(e));
            }
        }
    }

    /// row_i ← s·row_i.
    pub fn row_scale(&mut self, i: usize, s: &TwistedPoly) {
        for e in &mut self.data[i] {
            *e = s.mul(e);
        }
    }

    pub fn push_row(&mut self, row: Vec<TwistedPoly>) {
        assert_eq!(row.len(), self.cols);
        self.data.push(row);
        self.rows += 1;
    }

    pub fn push_col(&mut self, col: Vec<TwistedPoly>) {
        assert_eq!(col.len(), self.rows);
        for (r, e) in self.data.iter_mut().zip(col) {
            r.push(e);
        }
        self.cols += 1;
    }

    pub fn remove_row(&mut self, i: usize) -> Vec<TwistedPoly> {
        self.rows -= 1;
        self.data.remove(i)
    }

    pub fn remove_col(&mut self, j: usize) -> Vec<TwistedPoly> {
        self.cols -= 1;
        self.data.iter_mut().map(|r| r.remove(j)).collect()
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let data = self.data.iter().map(|r| idx.iter().map(|&j| r[j].clone()).collect()).collect();
        Self::from_rows(self.field, idx.len(), data)
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let data = idx.iter().map(|&i| self.data[i].clone()).collect();
        Self::from_rows(self.field, self.cols, data)
    }

    /// Rows and columns swapped as data (not an algebra map).
    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    /// [self ; other]
    pub fn vcat(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Self::from_rows(self.field, self.cols, data)
    }

    /// [self | other]
    pub fn hcat(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows);
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.iter().chain(b).cloned().collect()).collect();
        Self::from_rows(self.field, self.cols + o.cols, data)
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.data[i][j].is_zero()))
    }

    /// Lower triangular, cols ≤ rows, separable diagonal.
    pub fn is_diagonally_separable(&self) -> bool {
        self.cols <= self.rows
            && self.is_lower_triangular()
            && (0..self.cols).all(|i| self.data[i][i].is_separable())
    }

    /// Block form (S₁ | 0) with S₁ diagonally separable.
    pub fn is_lower_separable(&self) -> bool {
        let r = (0..self.cols).take_while(|&j| !self.col_is_zero(j)).count();
        (r..self.cols).all(|j| self.col_is_zero(j))
            && self.select_cols(&(0..r).collect::<Vec<_>>()).is_diagonally_separable()
    }

    /// Entrywise equality up to the precision of the entries.
    pub fn agrees_with(&self, o: &Self) -> bool {
        self.rows == o.rows
            && self.cols == o.cols
            && self.data.iter().flatten().zip(o.data.iter().flatten()).all(|(a, b)| a.agrees_with(b))
    }

    /// Minimal precision among entries.
    pub fn prec(&self) -> Trop {
        self.data.iter().flatten().map(|e| e.prec()).min().unwrap_or(Inf)
    }

    /// Entrywise agreement modulo X^prec in every coefficient.
    pub fn agrees_to(&self, o: &Self, prec: i64) -> bool {
        self.rows == o.rows
            && self.cols == o.cols
            && self.data.iter().flatten().zip(o.data.iter().flatten()).all(|(a, b)| a.agrees_to(b, prec))
    }

    pub fn max_degree(&self) -> i64 {
        self.data.iter().flatten().map(|e| e.degree()).max().unwrap_or(-1)
    }
}

impl fmt::Display for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .data
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|e| format!("{:?}", e.to_string())).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Pivot preference: minimal degree, then minimal leading valuation, then column, then row.
pub(crate) fn pivot_key(q: &TwistedPoly, col: usize, row: usize) -> (i64, i64, usize, usize) {
    let lv = q.lead().and_then(|c| c.leading()).map_or(i64::MAX, |(v, _)| v);
    (q.degree(), lv, col, row)
}
