//! Sparse matrices over an exact field: echelon form, rank, kernel and image
//! bases, and linear solves. Pivoting is deterministic (first nonzero entry
//! scanning top-to-bottom, left-to-right), so every downstream report is
//! reproducible byte for byte.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::field::{Field, FieldElement};

/// A sparse matrix in coordinate form. Stored entries are nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub field: Field,
    pub nrows: usize,
    pub ncols: usize,
    entries: BTreeMap<(usize, usize), FieldElement>,
}

impl Matrix {
    pub fn zero(field: Field, nrows: usize, ncols: usize) -> Matrix {
        Matrix { field, nrows, ncols, entries: BTreeMap::new() }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_entries<I>(field: Field, nrows: usize, ncols: usize, it: I) -> Matrix
    where
        I: IntoIterator<Item = (usize, usize, FieldElement)>,
    {
        let mut m = Matrix::zero(field, nrows, ncols);
        for (i, j, v) in it {
            m.set(i, j, v);
        }
        m
    }

    /// Dense row-major construction from integer literals, for tests.
    pub fn from_i64_rows(field: Field, rows: &[&[i64]]) -> Matrix {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = Matrix::zero(field, nrows, ncols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), ncols);
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, field.from_i64(*v));
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        assert!(i < self.nrows && j < self.ncols, "index out of bounds");
        self.entries.get(&(i, j)).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        assert!(i < self.nrows && j < self.ncols, "index out of bounds");
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &FieldElement) {
        let cur = self.get(i, j);
        self.set(i, j, self.field.add(&cur, v));
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &FieldElement)> {
        self.entries.iter()
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zero(self.field, self.ncols, self.nrows);
        for ((i, j), v) in &self.entries {
            m.set(*j, *i, v.clone());
        }
        m
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols), "shape mismatch");
        let mut m = self.clone();
        for ((i, j), v) in &other.entries {
            m.add_to(*i, *j, v);
        }
        m
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.scale(&self.field.neg(&self.field.one())))
    }

    pub fn scale(&self, c: &FieldElement) -> Matrix {
        let mut m = Matrix::zero(self.field, self.nrows, self.ncols);
        for ((i, j), v) in &self.entries {
            m.set(*i, *j, self.field.mul(v, c));
        }
        m
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.ncols, other.nrows, "shape mismatch in product");
        let mut m = Matrix::zero(self.field, self.nrows, other.ncols);
        // group rhs by row for sparse traversal
        for ((i, k), a) in &self.entries {
            for ((_, j), b) in other.entries.range((*k, 0)..(*k + 1, 0)) {
                let prod = self.field.mul(a, b);
                m.add_to(*i, *j, &prod);
            }
        }
        m
    }

    /// Applies the matrix to a column vector given as a Vec.
    pub fn apply(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.ncols, "dimension mismatch");
        let mut out = vec![self.field.zero(); self.nrows];
        for ((i, j), a) in &self.entries {
            if !v[*j].is_zero() {
                let t = self.field.mul(a, &v[*j]);
                out[*i] = self.field.add(&out[*i], &t);
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.nrows).map(|i| self.get(i, j)).collect()
    }

    pub fn from_columns(field: Field, nrows: usize, cols: &[Vec<FieldElement>]) -> Matrix {
        let mut m = Matrix::zero(field, nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), nrows);
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    /// Horizontal augmentation `[self | other]`.
    pub fn augment(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.nrows, other.nrows);
        let mut m = Matrix::zero(self.field, self.nrows, self.ncols + other.ncols);
        for ((i, j), v) in &self.entries {
            m.set(*i, *j, v.clone());
        }
        for ((i, j), v) in &other.entries {
            m.set(*i, self.ncols + *j, v.clone());
        }
        m
    }

    /// Reduced row echelon form together with the pivot columns in
    /// ascending order. Elimination runs on sparse rows; the pivot is the
    /// first nonzero entry scanning top-to-bottom, left-to-right.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = self.field;
        let mut rows: Vec<BTreeMap<usize, FieldElement>> = vec![BTreeMap::new(); self.nrows];
        for ((i, j), v) in &self.entries {
            rows[*i].insert(*j, v.clone());
        }
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..self.ncols {
            if r >= self.nrows {
                break;
            }
            let Some(p) = (r..self.nrows).find(|i| rows[*i].contains_key(&c)) else {
                continue;
            };
            rows.swap(r, p);
            let inv = f.inv(&rows[r][&c]).expect("pivot nonzero");
            if !inv.is_one() {
                let scaled: BTreeMap<usize, FieldElement> =
                    rows[r].iter().map(|(j, v)| (*j, f.mul(v, &inv))).collect();
                rows[r] = scaled;
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r {
                    continue;
                }
                let Some(factor) = row.get(&c).cloned() else { continue };
                for (j, pv) in &pivot_row {
                    let t = f.mul(pv, &factor);
                    match row.get_mut(j) {
                        Some(e) => {
                            *e = f.sub(e, &t);
                            if e.is_zero() {
                                row.remove(j);
                            }
                        }
                        None => {
                            if !t.is_zero() {
                                row.insert(*j, f.neg(&t));
                            }
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let mut m = Matrix::zero(f, self.nrows, self.ncols);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row {
                m.set(i, *j, v.clone());
            }
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Columns spanning ker(self); count = ncols - rank.
    pub fn kernel_basis(&self) -> Matrix {
        let f = self.field;
        let (red, pivots) = self.rref();
        let free: Vec<usize> = (0..self.ncols).filter(|c| !pivots.contains(c)).collect();
        let mut cols = Vec::new();
        for &fc in &free {
            let mut v = vec![f.zero(); self.ncols];
            v[fc] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&red.get(r, fc));
            }
            cols.push(v);
        }
        Matrix::from_columns(f, self.ncols, &cols)
    }

    /// Columns of `self` at the pivot positions: a basis of the image.
    pub fn image_basis(&self) -> Matrix {
        let (_, pivots) = self.rref();
        let cols: Vec<Vec<FieldElement>> = pivots.iter().map(|&c| self.column(c)).collect();
        Matrix::from_columns(self.field, self.nrows, &cols)
    }

    /// One solution of `self * x = b`, or None when infeasible.
    pub fn solve(&self, b: &[FieldElement]) -> Option<Vec<FieldElement>> {
        assert_eq!(b.len(), self.nrows, "dimension mismatch");
        let f = self.field;
        let rhs = Matrix::from_columns(f, self.nrows, &[b.to_vec()]);
        let (red, pivots) = self.augment(&rhs).rref();
        if pivots.contains(&self.ncols) {
            return None; // leading entry in the augmented column
        }
        let mut x = vec![f.zero(); self.ncols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = red.get(r, self.ncols);
        }
        Some(x)
    }

    /// Kronecker product with row index `i1*other.nrows + i2` and column
    /// index `j1*other.ncols + j2`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zero(self.field, self.nrows * other.nrows, self.ncols * other.ncols);
        for ((i1, j1), a) in &self.entries {
            for ((i2, j2), b) in &other.entries {
                m.set(i1 * other.nrows + i2, j1 * other.ncols + j2, self.field.mul(a, b));
            }
        }
        m
    }
}
