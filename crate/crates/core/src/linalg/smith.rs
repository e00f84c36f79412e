//! Smith normal form with unimodular transforms.

use super::IntMatrix;
use crate::int::Int;

/// `U · A · V = S` with `S` diagonal and `diag[0] | diag[1] | ...`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    /// Nonzero diagonal entries of `S`, all positive; their count is the rank.
    pub diag: Vec<Int>,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }
}

struct Smith {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Smith {
    // row[i] += q row[t]
    fn row_add(&mut self, i: usize, t: usize, q: &Int) {
        self.a.add_row_multiple(i, t, q, 0);
        self.u.add_row_multiple(i, t, q, 0);
        self.u_inv.add_col_multiple(t, i, &-q);
    }

    // col[j] += q col[t]
    fn col_add(&mut self, j: usize, t: usize, q: &Int) {
        self.a.add_col_multiple(j, t, q);
        self.v.add_col_multiple(j, t, q);
        self.v_inv.add_row_multiple(t, j, &-q, 0);
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    /// Minimal nonzero |entry| in the trailing block, ties to lowest (row, col).
    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let v = self.a.get(i, j);
                if v.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.a.get(bi, bj).cmp_abs(v).is_le() => {}
                    _ => best = Some((i, j)),
                }
                if v.cmp_abs(&Int::one()).is_eq() {
                    return best;
                }
            }
        }
        best
    }

    /// Reduces row and column `t` against the pivot; true if both are cleared.
    fn clear_cross(&mut self, t: usize) -> bool {
        let pivot = self.a.get(t, t).clone();
        let mut cleared = true;
        for i in t + 1..self.a.rows() {
            if self.a.get(i, t).is_zero() {
                continue;
            }
            let (q, r) = self.a.get(i, t).div_mod_floor(&pivot);
            self.row_add(i, t, &-q);
            cleared &= r.is_zero();
        }
        for j in t + 1..self.a.cols() {
            if self.a.get(t, j).is_zero() {
                continue;
            }
            let (q, r) = self.a.get(t, j).div_mod_floor(&pivot);
            self.col_add(j, t, &-q);
            cleared &= r.is_zero();
        }
        cleared
    }

    fn non_divisible_row(&self, t: usize) -> Option<usize> {
        let pivot = self.a.get(t, t);
        for i in t + 1..self.a.rows() {
            for j in t + 1..self.a.cols() {
                if !pivot.divides(self.a.get(i, j)) {
                    return Some(i);
                }
            }
        }
        None
    }
}

/// Smith normal form by minimal-absolute-value pivoting.
///
/// The pivot at each step is a nonzero entry of least absolute value in the
/// remaining block, ties broken by lowest `(row, col)`, so the output is a
/// deterministic function of the input.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut st = Smith {
        a: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
        v_inv: IntMatrix::identity(n),
    };
    let mut diag = Vec::new();
    for t in 0..m.min(n) {
        let Some((i, j)) = st.min_entry(t) else { break };
        st.swap_rows(t, i);
        st.swap_cols(t, j);
        loop {
            if !st.clear_cross(t) {
                let (i, j) = st.min_entry(t).expect("block is nonzero");
                st.swap_rows(t, i);
                st.swap_cols(t, j);
                continue;
            }
            match st.non_divisible_row(t) {
                Some(i) => st.row_add(t, i, &Int::one()),
                None => break,
            }
        }
        if st.a.get(t, t).is_negative() {
            st.negate_row(t);
        }
        diag.push(st.a.get(t, t).clone());
    }
    SmithDecomposition {
        u: st.u,
        s: st.a,
        v: st.v,
        diag,
        u_inv: st.u_inv,
        v_inv: st.v_inv,
    }
}

/// Some integer solution of `a · x = b`, or `None` if there is none.
pub fn solve(a: &IntMatrix, b: &[Int]) -> Option<Vec<Int>> {
    assert_eq!(a.rows(), b.len(), "right-hand side has the wrong length");
    let snf = smith_normal_form(a);
    let ub = snf.u.mul_vec(b);
    let rank = snf.rank();
    if ub[rank..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut y = vec![Int::zero(); a.cols()];
    for (i, d) in snf.diag.iter().enumerate() {
        y[i] = ub[i].div_exact(d)?;
    }
    Some(snf.v.mul_vec(&y))
}
