//! Dense row-major matrices over a prime field and their reduced row echelon forms.

use alloc::vec;
use alloc::vec::Vec;

use crate::field::PrimeField;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from row-major data, reducing every entry mod `p`.
    ///
    /// Panics if `data.len() != rows * cols`.
    pub fn from_vec(field: PrimeField, rows: usize, cols: usize, data: Vec<u64>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        let data = data.into_iter().map(|x| field.reduce(x)).collect();
        Matrix { field, rows, cols, data }
    }

    /// Builds a matrix from rows of equal length; `cols` fixes the width
    /// when there are no rows.
    pub fn from_rows<R: AsRef<[u64]>>(field: PrimeField, cols: usize, rows: &[R]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row.iter().map(|&x| field.reduce(x)));
        }
        Matrix { field, rows: rows.len(), cols, data }
    }

    pub fn random<R: rand_core::RngCore + ?Sized>(field: PrimeField, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        Matrix { field, rows, cols, data }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: u64) {
        self.data[i * self.cols + j] = self.field.reduce(value);
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u64]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    /// Matrix product. Panics on incompatible shapes.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        out
    }

    /// `self · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        let f = self.field;
        self.row_iter().map(|row| row.iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))).collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix sum shape");
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Matrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix difference shape");
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Matrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    /// Stacks matrices of equal width on top of each other.
    pub fn vstack(field: PrimeField, cols: usize, parts: &[&Matrix]) -> Matrix {
        let mut data = Vec::new();
        let mut rows = 0;
        for part in parts {
            assert_eq!(part.cols, cols, "vstack width");
            data.extend_from_slice(&part.data);
            rows += part.rows;
        }
        Matrix { field, rows, cols, data }
    }

    pub fn push_row(&mut self, row: &[u64]) {
        assert_eq!(row.len(), self.cols, "row width");
        self.data.extend(row.iter().map(|&x| self.field.reduce(x)));
        self.rows += 1;
    }

    /// First `k` rows.
    pub fn top_rows(&self, k: usize) -> Matrix {
        assert!(k <= self.rows);
        Matrix { field: self.field, rows: k, cols: self.cols, data: self.data[..k * self.cols].to_vec() }
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.row_iter().map(<[u64]>::to_vec).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// `row[target] -= factor * row[source]`, touching columns `from..`.
    fn eliminate(&mut self, target: usize, source: usize, factor: u64, from: usize) {
        let f = self.field;
        let c = self.cols;
        for j in from..c {
            let s = self.data[source * c + j];
            if s != 0 {
                let t = &mut self.data[target * c + j];
                *t = f.sub(*t, f.mul(factor, s));
            }
        }
    }

    /// Reduced row echelon form by Gauss-Jordan elimination.
    pub fn rref(&self) -> EchelonForm {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for col in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(found) = (lead..m.rows).find(|&i| m.get(i, col) != 0) else {
                continue;
            };
            m.swap_rows(lead, found);
            let inv = f.inv(m.get(lead, col)).expect("pivot is nonzero");
            for j in col..m.cols {
                let idx = lead * m.cols + j;
                m.data[idx] = f.mul(m.data[idx], inv);
            }
            for i in 0..m.rows {
                if i != lead {
                    let factor = m.get(i, col);
                    if factor != 0 {
                        m.eliminate(i, lead, factor, col);
                    }
                }
            }
            pivots.push(col);
            lead += 1;
        }
        EchelonForm { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Basis of `{v : self · v = 0}` as the rows of a canonical echelon matrix.
    pub fn kernel(&self) -> Matrix {
        self.rref().kernel()
    }

    /// Some `x` with `self · x = rhs`, or `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(rhs.len(), self.rows, "right-hand side length");
        let f = self.field;
        let width = self.cols + 1;
        let mut aug = Matrix::zeros(f, self.rows, width);
        for i in 0..self.rows {
            aug.data[i * width..i * width + self.cols].copy_from_slice(self.row(i));
            aug.data[i * width + self.cols] = f.reduce(rhs[i]);
        }
        let ech = aug.rref();
        if ech.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (k, &pc) in ech.pivots.iter().enumerate() {
            x[pc] = ech.reduced.get(k, self.cols);
        }
        Some(x)
    }
}

/// A reduced row echelon form together with its pivot columns.
///
/// Equality compares the nonzero rows only, so two matrices with the same row
/// space have equal echelon forms even when their row counts differ.
#[derive(Clone, Debug)]
pub struct EchelonForm {
    reduced: Matrix,
    pivots: Vec<usize>,
}

impl EchelonForm {
    pub fn matrix(&self) -> &Matrix {
        &self.reduced
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The nonzero rows: a canonical basis of the row space.
    pub fn basis(&self) -> Matrix {
        self.reduced.top_rows(self.rank())
    }

    pub fn into_basis(self) -> Matrix {
        let rank = self.rank();
        let mut m = self.reduced;
        m.data.truncate(rank * m.cols);
        m.rows = rank;
        m
    }

    /// Columns without a pivot.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut it = self.pivots.iter().peekable();
        (0..self.reduced.cols)
            .filter(|c| {
                if it.peek() == Some(&c) {
                    it.next();
                    false
                } else {
                    true
                }
            })
            .collect()
    }

    pub fn kernel(&self) -> Matrix {
        let f = self.reduced.field;
        let cols = self.reduced.cols;
        let free = self.free_columns();
        let mut k = Matrix::zeros(f, free.len(), cols);
        for (row, &fc) in free.iter().enumerate() {
            k.data[row * cols + fc] = 1;
            for (i, &pc) in self.pivots.iter().enumerate() {
                k.data[row * cols + pc] = f.neg(self.reduced.get(i, fc));
            }
        }
        // The free-column construction is already independent; rref fixes the
        // canonical scaling and order.
        k.rref().into_basis()
    }
}

impl PartialEq for EchelonForm {
    fn eq(&self, other: &Self) -> bool {
        self.reduced.field == other.reduced.field
            && self.reduced.cols == other.reduced.cols
            && self.pivots == other.pivots
            && self.reduced.data[..self.rank() * self.reduced.cols]
                == other.reduced.data[..other.rank() * other.reduced.cols]
    }
}

impl Eq for EchelonForm {}
