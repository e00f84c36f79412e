//! Integer row echelon forms and what falls out of them: lattice bases of
//! column spans, saturated kernel bases, and coordinates with respect to a
//! lattice basis.

use super::{is_zero_vec, IntMatrix};
use crate::int::Int;

pub(crate) struct RowEchelon {
    pub echelon: IntMatrix,
    /// Unimodular `W` with `W · input = echelon`, when requested.
    pub transform: Option<IntMatrix>,
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
}

impl RowEchelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Euclidean row reduction over `ℤ`. Pivots are made positive; entries above
/// pivots are left unreduced.
pub(crate) fn row_echelon(mut a: IntMatrix, track: bool) -> RowEchelon {
    let (m, n) = (a.rows(), a.cols());
    let mut w = track.then(|| IntMatrix::identity(m));
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..m {
                let v = a.get(i, c);
                if v.is_zero() {
                    continue;
                }
                match best {
                    Some(b) if a.get(b, c).cmp_abs(v).is_le() => {}
                    _ => best = Some(i),
                }
            }
            let Some(p) = best else { break };
            a.swap_rows(r, p);
            if let Some(w) = w.as_mut() {
                w.swap_rows(r, p);
            }
            let pivot = a.get(r, c).clone();
            let mut cleared = true;
            for i in r + 1..m {
                if a.get(i, c).is_zero() {
                    continue;
                }
                let (q, rem) = a.get(i, c).div_mod_floor(&pivot);
                let q = -q;
                a.add_row_multiple(i, r, &q, c);
                if let Some(w) = w.as_mut() {
                    w.add_row_multiple(i, r, &q, 0);
                }
                if !rem.is_zero() {
                    cleared = false;
                }
            }
            if cleared {
                if a.get(r, c).is_negative() {
                    a.negate_row(r);
                    if let Some(w) = w.as_mut() {
                        w.negate_row(r);
                    }
                }
                pivots.push(c);
                r += 1;
                break;
            }
        }
    }
    RowEchelon {
        echelon: a,
        transform: w,
        pivots,
    }
}

/// Lattice basis (as columns) of the span of the columns of `a`.
pub fn image_basis(a: &IntMatrix) -> IntMatrix {
    EchelonBasis::from_generators(a).into_basis()
}

/// Saturated `ℤ`-basis (as columns) of `{x : a·x = 0}`.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let n = a.cols();
    if a.rows() == 0 {
        return IntMatrix::identity(n);
    }
    let ech = row_echelon(a.transpose(), true);
    let w = ech.transform.expect("transform was requested");
    let kernel_rows: Vec<usize> = (ech.pivots.len()..n).collect();
    w.select_rows(&kernel_rows).transpose()
}

/// A lattice basis in echelon form with respect to the *last* nonzero
/// coordinate: each basis vector has a distinct leading index, the largest
/// index where it is nonzero.
///
/// If coordinates are ordered so that a filtration `F_0 ⊆ F_1 ⊆ ...` consists
/// of coordinate prefixes, the intersection of the lattice with a prefix is
/// spanned by the basis vectors whose leading index falls inside it.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    basis: IntMatrix,
    leading: Vec<usize>,
}

impl EchelonBasis {
    /// Columns of `gens` generate the lattice.
    pub fn from_generators(gens: &IntMatrix) -> Self {
        let m = gens.rows();
        // Rows = generators, coordinates reversed so the pivot is the last nonzero entry.
        let mut rev = IntMatrix::zeros(gens.cols(), m);
        for j in 0..gens.cols() {
            for i in 0..m {
                let v = gens.get(i, j);
                if !v.is_zero() {
                    rev.set(j, m - 1 - i, v.clone());
                }
            }
        }
        let ech = row_echelon(rev, false);
        let rank = ech.rank();
        let mut basis = IntMatrix::zeros(m, rank);
        for r in 0..rank {
            for c in ech.pivots[r]..m {
                let v = ech.echelon.get(r, c);
                if !v.is_zero() {
                    basis.set(m - 1 - c, r, v.clone());
                }
            }
        }
        let leading = ech.pivots.iter().map(|&p| m - 1 - p).collect();
        EchelonBasis { basis, leading }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn into_basis(self) -> IntMatrix {
        self.basis
    }

    pub fn leading(&self) -> &[usize] {
        &self.leading
    }

    /// Basis of the sublattice of vectors supported on coordinates `< len`.
    pub fn within_prefix(&self, len: usize) -> IntMatrix {
        let cols: Vec<usize> = (0..self.rank()).filter(|&j| self.leading[j] < len).collect();
        self.basis.select_columns(&cols)
    }
}

/// Solves `basis · c = x` for a basis of full column rank.
#[derive(Clone, Debug)]
pub struct Coordinatizer {
    /// Transpose of the unimodular reduction `W`, so column `j` of `W` is a row.
    w_t: IntMatrix,
    /// Upper-triangular `r × r` block of `W · basis`.
    upper: IntMatrix,
}

impl Coordinatizer {
    /// Returns `None` when the columns of `basis` are linearly dependent.
    pub fn new(basis: &IntMatrix) -> Option<Self> {
        let r = basis.cols();
        let ech = row_echelon(basis.clone(), true);
        if ech.rank() != r {
            return None;
        }
        let w = ech.transform.expect("transform was requested");
        let upper = ech.echelon.block(0, r, 0, r);
        Some(Coordinatizer {
            w_t: w.transpose(),
            upper,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.w_t.rows()
    }

    pub fn rank(&self) -> usize {
        self.upper.rows()
    }

    /// Coordinates of `x` in the basis, or `None` when `x` is outside the lattice.
    pub fn coords(&self, x: &[Int]) -> Option<Vec<Int>> {
        let m = self.ambient_dim();
        let r = self.rank();
        assert_eq!(x.len(), m, "vector length does not match the ambient dimension");
        let mut y = vec![Int::zero(); m];
        for (j, xj) in x.iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            for (yi, wij) in y.iter_mut().zip(self.w_t.row(j)) {
                if !wij.is_zero() {
                    yi.add_mul_assign(xj, wij);
                }
            }
        }
        if !is_zero_vec(&y[r..]) {
            return None;
        }
        let mut c = vec![Int::zero(); r];
        for i in (0..r).rev() {
            let mut rhs = y[i].clone();
            for (j, cj) in c.iter().enumerate().skip(i + 1) {
                let u = self.upper.get(i, j);
                if !u.is_zero() && !cj.is_zero() {
                    rhs.sub_mul_assign(u, cj);
                }
            }
            c[i] = rhs.div_exact(self.upper.get(i, i))?;
        }
        Some(c)
    }

    pub fn contains(&self, x: &[Int]) -> bool {
        self.coords(x).is_some()
    }
}
