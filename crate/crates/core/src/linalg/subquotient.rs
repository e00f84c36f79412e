//! Finitely generated abelian groups presented as subquotients `K/B` with
//! `B ⊆ K ⊆ ℤ^m`.

use super::echelon::{image_basis, Coordinatizer};
use super::smith::smith_normal_form;
use super::IntMatrix;
use crate::error::{Error, Result};
use crate::int::Int;

/// `K/B ≅ ℤ^free_rank ⊕ ⊕ ℤ/torsion[i]`.
///
/// Group coordinates list the free generators first and then one coordinate per
/// torsion factor, reduced into `[0, torsion[i])`.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub ambient_dim: usize,
    /// Lattice basis of `K`, one column per basis vector.
    pub kernel_gens: IntMatrix,
    /// Generators of `B` as supplied (not necessarily independent).
    pub boundary_gens: IntMatrix,
    pub free_rank: usize,
    /// Invariant factors `≥ 2`, each dividing the next.
    pub torsion: Vec<Int>,
    /// One ambient representative per group generator.
    pub lifts: IntMatrix,
    kernel_coords: Option<Coordinatizer>,
    /// Rows map `K`-coordinates to group coordinates (before torsion reduction).
    reducer: IntMatrix,
}

/// Presents `span(kernel_gens) / span(boundary_gens)`.
///
/// Fails with [`Error::InvalidSubquotient`] when some boundary generator is not
/// in the span of the kernel generators.
pub fn subquotient(kernel_gens: &IntMatrix, boundary_gens: &IntMatrix) -> Result<Subquotient> {
    let m = kernel_gens.rows();
    if boundary_gens.rows() != m {
        return Err(Error::DimensionMismatch(format!(
            "kernel generators live in dimension {m}, boundary generators in {}",
            boundary_gens.rows()
        )));
    }
    let kb = image_basis(kernel_gens);
    let r = kb.cols();
    let coords = Coordinatizer::new(&kb).expect("an echelon basis is independent");

    let mut b_coords = Vec::with_capacity(boundary_gens.cols());
    for j in 0..boundary_gens.cols() {
        let col = boundary_gens.column(j);
        match coords.coords(&col) {
            Some(c) => b_coords.push(c),
            None => return Err(Error::InvalidSubquotient { column: j }),
        }
    }
    let rel = image_basis(&IntMatrix::from_columns(r, &b_coords));
    let snf = smith_normal_form(&rel);

    // SNF order: unit factors, torsion factors, then free directions.
    let rank = snf.rank();
    let mut free_idx = Vec::new();
    let mut torsion_idx = Vec::new();
    let mut torsion = Vec::new();
    for i in 0..r {
        if i >= rank {
            free_idx.push(i);
        } else if !snf.diag[i].is_one() {
            torsion_idx.push(i);
            torsion.push(snf.diag[i].clone());
        }
    }
    let order: Vec<usize> = free_idx.iter().chain(&torsion_idx).copied().collect();
    let reducer = snf.u.select_rows(&order);
    let lifts = kb.mul(&snf.u_inv.select_columns(&order));

    Ok(Subquotient {
        ambient_dim: m,
        kernel_gens: kb,
        boundary_gens: boundary_gens.clone(),
        free_rank: free_idx.len(),
        torsion,
        lifts,
        kernel_coords: Some(coords),
        reducer,
    })
}

impl Subquotient {
    /// The trivial group inside `ℤ^ambient_dim`.
    pub fn zero(ambient_dim: usize) -> Self {
        Subquotient {
            ambient_dim,
            kernel_gens: IntMatrix::zeros(ambient_dim, 0),
            boundary_gens: IntMatrix::zeros(ambient_dim, 0),
            free_rank: 0,
            torsion: Vec::new(),
            lifts: IntMatrix::zeros(ambient_dim, 0),
            kernel_coords: None,
            reducer: IntMatrix::zeros(0, 0),
        }
    }

    pub fn generator_count(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn is_zero(&self) -> bool {
        self.generator_count() == 0
    }

    /// Ambient representative of generator `j`.
    pub fn lift(&self, j: usize) -> Vec<Int> {
        self.lifts.column(j)
    }

    pub fn contains_kernel(&self, x: &[Int]) -> bool {
        match &self.kernel_coords {
            Some(c) => c.contains(x),
            None => x.iter().all(Int::is_zero),
        }
    }

    /// Group coordinates of the class of `x`.
    pub fn reduce(&self, x: &[Int]) -> Result<Vec<Int>> {
        if x.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} reduced in dimension {}",
                x.len(),
                self.ambient_dim
            )));
        }
        let Some(coords) = &self.kernel_coords else {
            return if x.iter().all(Int::is_zero) {
                Ok(Vec::new())
            } else {
                Err(Error::NotInKernel)
            };
        };
        let c = coords.coords(x).ok_or(Error::NotInKernel)?;
        Ok(self.normalize(self.reducer.mul_vec(&c)))
    }

    /// Reduces torsion coordinates into their canonical range.
    pub fn normalize(&self, mut coords: Vec<Int>) -> Vec<Int> {
        for (v, t) in coords[self.free_rank..].iter_mut().zip(&self.torsion) {
            *v = v.mod_floor(t);
        }
        coords
    }

    /// Relations among group coordinates: one column `t_i e_i` per torsion factor.
    pub fn relations(&self) -> IntMatrix {
        let n = self.generator_count();
        let mut rel = IntMatrix::zeros(n, self.torsion.len());
        for (i, t) in self.torsion.iter().enumerate() {
            rel.set(self.free_rank + i, i, t.clone());
        }
        rel
    }

    /// Same abstract group: equal free rank and invariant factors.
    pub fn isomorphic(&self, other: &Subquotient) -> bool {
        self.free_rank == other.free_rank && self.torsion == other.torsion
    }

    /// Canonical description, e.g. `Z^2 + Z/2 + Z/6` or `0`.
    pub fn describe(&self) -> String {
        describe_group(self.free_rank, &self.torsion)
    }
}

pub fn describe_group(free_rank: usize, torsion: &[Int]) -> String {
    let mut parts = Vec::new();
    match free_rank {
        0 => {}
        1 => parts.push("Z".to_string()),
        f => parts.push(format!("Z^{f}")),
    }
    parts.extend(torsion.iter().map(|t| format!("Z/{t}")));
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}
