//! Exact integer linear algebra.
//!
//! Everything here is dense and works over `ℤ` with [`Int`] entries: Smith
//! normal form, saturated kernel bases, linear solving, and presentations of
//! subquotients `K/B` of lattices in `ℤ^m`.

mod echelon;
mod smith;
mod subquotient;

use std::fmt;

use crate::int::Int;

pub use echelon::{image_basis, kernel_basis, Coordinatizer, EchelonBasis};
pub use smith::{smith_normal_form, solve, SmithDecomposition};
pub use subquotient::{describe_group, subquotient, Subquotient};

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Int::one();
        }
        m
    }

    /// Builds a matrix from small integer rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&v| Int::from(v)));
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Builds a `rows × columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Int>]) -> Self {
        let mut m = IntMatrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column {j} has the wrong length");
            for (i, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m.data[i * m.cols + j] = v.clone();
                }
            }
        }
        m
    }

    pub fn from_row_vectors(cols: usize, rows: Vec<Vec<Int>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r);
        }
        IntMatrix {
            rows: n,
            cols,
            data,
        }
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
    pub fn get(&self, r: usize, c: usize) -> &Int {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut Int {
        &mut self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Int) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[Int] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Int> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Int>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Int::is_zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = &self.data[r * self.cols + c];
                if !v.is_zero() {
                    t.data[c * self.rows + r] = v.clone();
                }
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    if !b.is_zero() {
                        o.add_mul_assign(a, b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = Int::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc.add_mul_assign(a, b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.data[r * cols.len() + j] = self.get(r, c).clone();
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        IntMatrix {
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    /// Contiguous block `[r0, r1) × [c0, c1)`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> IntMatrix {
        let mut data = Vec::with_capacity((r1 - r0) * (c1 - c0));
        for r in r0..r1 {
            data.extend_from_slice(&self.row(r)[c0..c1]);
        }
        IntMatrix {
            rows: r1 - r0,
            cols: c1 - c0,
            data,
        }
    }

    /// Column concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, rhs.rows, "hstack row mismatch");
        let cols = self.cols + rhs.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(rhs.row(r));
        }
        IntMatrix {
            rows: self.rows,
            cols,
            data,
        }
    }

    pub fn push_column(&mut self, col: &[Int]) {
        *self = self.hstack(&IntMatrix::from_columns(self.rows, &[col.to_vec()]));
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    pub fn negate_row(&mut self, r: usize) {
        for v in &mut self.data[r * self.cols..(r + 1) * self.cols] {
            if !v.is_zero() {
                v.negate();
            }
        }
    }

    pub fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = &mut self.data[r * self.cols + c];
            if !v.is_zero() {
                v.negate();
            }
        }
    }

    /// `row[target] += q * row[source]`, touching columns from `start` on.
    pub fn add_row_multiple(&mut self, target: usize, source: usize, q: &Int, start: usize) {
        debug_assert_ne!(target, source);
        if q.is_zero() {
            return;
        }
        let cols = self.cols;
        let (t, s) = if target < source {
            let (lo, hi) = self.data.split_at_mut(source * cols);
            (&mut lo[target * cols..(target + 1) * cols], &hi[..cols])
        } else {
            let (lo, hi) = self.data.split_at_mut(target * cols);
            (&mut hi[..cols], &lo[source * cols..(source + 1) * cols])
        };
        for (tv, sv) in t[start..].iter_mut().zip(&s[start..]) {
            if !sv.is_zero() {
                tv.add_mul_assign(q, sv);
            }
        }
    }

    /// `col[target] += q * col[source]`.
    pub fn add_col_multiple(&mut self, target: usize, source: usize, q: &Int) {
        debug_assert_ne!(target, source);
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let base = r * self.cols;
            if self.data[base + source].is_zero() {
                continue;
            }
            let s = self.data[base + source].clone();
            self.data[base + target].add_mul_assign(q, &s);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

pub(crate) fn is_zero_vec(v: &[Int]) -> bool {
    v.iter().all(Int::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_transpose() {
        let a = IntMatrix::from_rows(&[[1, 2, 3], [4, 5, 6]]);
        let b = a.transpose();
        assert_eq!(b, IntMatrix::from_rows(&[[1, 4], [2, 5], [3, 6]]));
        assert_eq!(a.mul(&b), IntMatrix::from_rows(&[[14, 32], [32, 77]]));
        let v = vec![Int::from(1), Int::from(0), Int::from(-1)];
        assert_eq!(a.mul_vec(&v), vec![Int::from(-2), Int::from(-2)]);
    }

    #[test]
    fn row_and_column_operations() {
        let mut a = IntMatrix::from_rows(&[[1, 2], [3, 4]]);
        a.add_row_multiple(1, 0, &Int::from(-3), 0);
        assert_eq!(a, IntMatrix::from_rows(&[[1, 2], [0, -2]]));
        a.add_row_multiple(0, 1, &Int::from(1), 0);
        assert_eq!(a, IntMatrix::from_rows(&[[1, 0], [0, -2]]));
        a.add_col_multiple(0, 1, &Int::from(2));
        assert_eq!(a, IntMatrix::from_rows(&[[1, 0], [-4, -2]]));
        a.swap_cols(0, 1);
        a.negate_row(1);
        assert_eq!(a, IntMatrix::from_rows(&[[0, 1], [2, 4]]));
    }

    #[test]
    fn empty_shapes() {
        let a = IntMatrix::zeros(0, 3);
        let b = IntMatrix::zeros(3, 2);
        let p = a.mul(&b);
        assert_eq!((p.rows(), p.cols()), (0, 2));
        assert_eq!(IntMatrix::zeros(2, 0).transpose().rows(), 0);
        assert!(IntMatrix::zeros(0, 0).is_zero());
    }
}
