//! Dense matrices over 𝔽_d: rank, echelon form, kernels and solving.

use crate::series::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FdMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Vec<u32>>,
}

impl FdMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        FdMatrix { field, rows, cols, data: vec![vec![0; cols]; rows] }
    }

    pub fn from_rows(field: Field, cols: usize, data: Vec<Vec<u32>>) -> Self {
        debug_assert!(data.iter().all(|r| r.len() == cols));
        FdMatrix { field, rows: data.len(), cols, data }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i][i] = 1;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i][j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i][j] = v;
    }
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i]
    }

    pub fn push_row(&mut self, row: Vec<u32>) {
        debug_assert_eq!(row.len(), self.cols);
        self.data.push(row);
        self.rows += 1;
    }

    /// Columns selected by index, in order.
    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let data = self.data.iter().map(|r| idx.iter().map(|&j| r[j]).collect()).collect();
        FdMatrix { field: self.field, rows: self.rows, cols: idx.len(), data }
    }

    /// [self | other].
    pub fn hcat(&self, other: &Self) -> Self {
        debug_assert_eq!(self.rows, other.rows);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.iter().chain(b).copied().collect())
            .collect();
        FdMatrix { field: self.field, rows: self.rows, cols: self.cols + other.cols, data }
    }

    /// [self ; other].
    pub fn vcat(&self, other: &Self) -> Self {
        debug_assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        FdMatrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j];
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Self {
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i][k];
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.data[k][j];
                    if b != 0 {
                        out.data[i][j] = f.add(out.data[i][j], f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    /// Row-vector times matrix.
    pub fn vec_mul(&self, v: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut out = vec![0; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in self.data[i].iter().enumerate() {
                if b != 0 {
                    out[j] = f.add(out[j], f.mul(a, b));
                }
            }
        }
        out
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.data[i][c] != 0) else {
                continue;
            };
            self.data.swap(r, p);
            let inv = f.inv(self.data[r][c]).expect("nonzero pivot");
            if inv != 1 {
                for x in self.data[r][c..].iter_mut() {
                    *x = f.mul(*x, inv);
                }
            }
            let pivot_row = self.data[r].clone();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.data[i][c];
                if factor == 0 {
                    continue;
                }
                let row = &mut self.data[i];
                for j in c..self.cols {
                    if pivot_row[j] != 0 {
                        row[j] = f.sub(row[j], f.mul(factor, pivot_row[j]));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        // eliminate along the shorter side
        if self.rows > self.cols {
            return self.transpose().rank();
        }
        self.clone().rref().len()
    }

    /// Basis of {v : v·self = 0} (left kernel), as row vectors.
    pub fn left_kernel(&self) -> Vec<Vec<u32>> {
        self.transpose().right_kernel()
    }

    /// Basis of {v : self·v = 0}.
    pub fn right_kernel(&self) -> Vec<Vec<u32>> {
        let f = self.field;
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0; self.cols];
                v[fc] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(m.data[r][fc]);
                }
                v
            })
            .collect()
    }

    /// Some x with self·x = b, if one exists.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        let f = self.field;
        let aug = self.hcat(&FdMatrix::from_rows(f, 1, b.iter().map(|&x| vec![x]).collect()));
        let mut m = aug;
        let pivots = m.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = m.data[r][self.cols];
        }
        Some(x)
    }
}
