//! The spectral sequence of the length filtration `R^ℓ_n(G) = (R_n(G))^{≤ℓ}`.
//!
//! Every page cell is computed from the `Z`/`B` lattices directly:
//!
//! ```text
//! Z^{ℓ,r}_n = { x ∈ C^ℓ_n : ∂x ∈ C^{ℓ-r}_{n-1} }
//! B^{ℓ,r}_n = ∂(C^{ℓ+r}_{n+1}) ∩ C^ℓ_n
//! E^{ℓ,r}_n = Z^{ℓ,r}_n / (Z^{ℓ-1,r-1}_n + B^{ℓ,r-1}_n)
//! ```

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::chains::{enumerate_upto, face_matrix, pushforward_matrix, GeneratorBasis};
use crate::digraph::{Digraph, DigraphMap};
use crate::error::{Error, Result};
use crate::homology::{homology_at, GroupShape, InducedMap};
use crate::linalg::{image_basis, kernel_basis, subquotient, Coordinatizer, EchelonBasis, IntMatrix, Subquotient};

/// A page index `r ∈ ℕ ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Page {
    Finite(i64),
    Infinity,
}

impl Page {
    fn minus_one(self) -> Page {
        match self {
            Page::Finite(r) => Page::Finite(r - 1),
            Page::Infinity => Page::Infinity,
        }
    }
}

impl fmt::Display for Page {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Page::Finite(r) => write!(f, "{r}"),
            Page::Infinity => f.write_str("inf"),
        }
    }
}

/// The filtered complex `C^ℓ_n` for degrees `-1..=n_max+1`.
///
/// Degree `n_max + 1` is carried so that `B` lattices in degree `n_max` are
/// complete. The level cap is `(n_max + 1) · diam(G)`, which bounds `L` for
/// every tuple in every carried degree.
pub struct FilteredComplex {
    graph: Arc<Digraph>,
    n_max: i64,
    l_max: i64,
    bases: Vec<GeneratorBasis>,
    /// `boundary[i]` is `∂` out of degree `i - 1`.
    boundary: Vec<IntMatrix>,
    z_cache: Mutex<HashMap<(i64, i64, i64), Arc<IntMatrix>>>,
    image_cache: Mutex<HashMap<(i64, i64), Arc<EchelonBasis>>>,
    cell_cache: Mutex<HashMap<(i64, i64, Page), Arc<Subquotient>>>,
}

pub fn build_filtered_complex(graph: Arc<Digraph>, n_max: i64) -> Result<FilteredComplex> {
    let diam = graph.finite_diameter()?;
    let l_max = (n_max + 1).max(0) * diam;
    let bases: Vec<GeneratorBasis> = (-1..=n_max + 1).map(|n| enumerate_upto(&graph, l_max, n)).collect();
    let mut boundary = Vec::with_capacity(bases.len());
    for i in 0..bases.len() {
        boundary.push(if i == 0 {
            IntMatrix::zeros(0, bases[0].len())
        } else {
            face_matrix(&bases[i], &bases[i - 1])
        });
    }
    Ok(FilteredComplex {
        graph,
        n_max,
        l_max,
        bases,
        boundary,
        z_cache: Mutex::default(),
        image_cache: Mutex::default(),
        cell_cache: Mutex::default(),
    })
}

impl FilteredComplex {
    pub fn graph(&self) -> &Arc<Digraph> {
        &self.graph
    }

    pub fn n_max(&self) -> i64 {
        self.n_max
    }

    pub fn level_cap(&self) -> i64 {
        self.l_max
    }

    fn idx(&self, n: i64) -> Option<usize> {
        (n >= -1 && n <= self.n_max + 1).then(|| (n + 1) as usize)
    }

    /// Union basis of degree `n`, grouped by level; empty outside the range.
    pub fn basis(&self, n: i64) -> Option<&GeneratorBasis> {
        self.idx(n).map(|i| &self.bases[i])
    }

    pub fn dim(&self, n: i64) -> usize {
        self.basis(n).map_or(0, GeneratorBasis::len)
    }

    /// Full `∂_n` on union bases.
    pub fn boundary(&self, n: i64) -> IntMatrix {
        match (self.idx(n), self.idx(n - 1)) {
            (Some(i), Some(_)) => self.boundary[i].clone(),
            (Some(i), None) => IntMatrix::zeros(0, self.bases[i].len()),
            (None, _) => IntMatrix::zeros(self.dim(n - 1), 0),
        }
    }

    /// Number of leading basis vectors of degree `n` spanning `C^ℓ_n`.
    pub fn prefix(&self, level: i64, n: i64) -> usize {
        match self.basis(n) {
            None => 0,
            Some(_) if level < -1 => 0,
            Some(b) => b.prefix_len(level),
        }
    }

    /// Size of `MC^ℓ_n` as the `ℓ`-th block of the union basis.
    pub fn block_size(&self, level: i64, n: i64) -> usize {
        self.prefix(level, n) - self.prefix(level - 1, n)
    }

    fn check_degree(&self, n: i64) -> Result<()> {
        if n > self.n_max {
            return Err(Error::DimensionMismatch(format!(
                "degree {n} is above the filtered complex's range (n_max = {})",
                self.n_max
            )));
        }
        Ok(())
    }

    /// Basis of `Z^{ℓ,r}_n` in the degree-`n` union basis.
    pub fn z_submodule(&self, level: i64, r: Page, n: i64) -> IntMatrix {
        let cols = self.prefix(level, n);
        let threshold = match r {
            Page::Finite(r) => level - r,
            Page::Infinity => i64::MIN,
        };
        let rows_from = if threshold < -1 { 0 } else { self.prefix(threshold, n - 1) };
        let key = (n, cols as i64, rows_from as i64);
        if let Some(z) = self.z_cache.lock().expect("cache poisoned").get(&key) {
            return (**z).clone();
        }
        let d = self.boundary(n);
        let rows: Vec<usize> = (rows_from..d.rows()).collect();
        let col_idx: Vec<usize> = (0..cols).collect();
        let k = kernel_basis(&d.select_rows(&rows).select_columns(&col_idx));
        let mut z = IntMatrix::zeros(self.dim(n), k.cols());
        for i in 0..cols {
            for j in 0..k.cols() {
                let v = k.get(i, j);
                if !v.is_zero() {
                    z.set(i, j, v.clone());
                }
            }
        }
        self.z_cache.lock().expect("cache poisoned").insert(key, Arc::new(z.clone()));
        z
    }

    /// Echelon basis (by last nonzero coordinate) of `∂(C^m_{n+1})`.
    fn image_echelon(&self, m: i64, n: i64) -> Arc<EchelonBasis> {
        let cols = self.prefix(m, n + 1);
        let key = (n, cols as i64);
        if let Some(e) = self.image_cache.lock().expect("cache poisoned").get(&key) {
            return e.clone();
        }
        let d = self.boundary(n + 1);
        let col_idx: Vec<usize> = (0..cols).collect();
        let e = Arc::new(EchelonBasis::from_generators(&d.select_columns(&col_idx)));
        self.image_cache.lock().expect("cache poisoned").entry(key).or_insert(e).clone()
    }

    /// Basis of `B^{ℓ,r}_n = ∂(C^{ℓ+r}_{n+1}) ∩ C^ℓ_n`.
    ///
    /// Because the union basis lists levels in increasing order, `C^ℓ_n` is a
    /// coordinate prefix and the intersection is read off an echelon basis.
    pub fn b_submodule(&self, level: i64, r: Page, n: i64) -> IntMatrix {
        let m = match r {
            Page::Finite(r) => level.saturating_add(r),
            Page::Infinity => i64::MAX,
        };
        let m = m.min(self.l_max);
        self.image_echelon(m, n).within_prefix(self.prefix(level, n))
    }

    /// `B^{ℓ,r}_n` as `∂(Z^{ℓ+r,r}_{n+1})`, the other side of the identity
    /// `∂ Z^{ℓ+r,r}_{n+1} = B^{ℓ,r}_n`; used to cross-check [`Self::b_submodule`].
    pub fn b_submodule_via_z(&self, level: i64, r: Page, n: i64) -> IntMatrix {
        let z = match r {
            Page::Finite(r) => self.z_submodule(level.saturating_add(r), Page::Finite(r), n + 1),
            Page::Infinity => {
                // y ranges over all of C_{n+1}, subject only to ∂y ∈ C^ℓ_n.
                let d = self.boundary(n + 1);
                let rows: Vec<usize> = (self.prefix(level, n)..d.rows()).collect();
                kernel_basis(&d.select_rows(&rows))
            }
        };
        image_basis(&self.boundary(n + 1).mul(&z))
    }

    /// `E^{ℓ,r}_n`.
    pub fn page_cell(&self, level: i64, r: Page, n: i64) -> Result<Arc<Subquotient>> {
        self.check_degree(n)?;
        let key = (level, n, r);
        if let Some(c) = self.cell_cache.lock().expect("cache poisoned").get(&key) {
            return Ok(c.clone());
        }
        let z = self.z_submodule(level, r, n);
        let below = self.z_submodule(level - 1, r.minus_one(), n);
        let b = self.b_submodule(level, r.minus_one(), n);
        let cell = Arc::new(subquotient(&z, &below.hstack(&b))?);
        Ok(self.cell_cache.lock().expect("cache poisoned").entry(key).or_insert(cell).clone())
    }

    /// `∂^{ℓ,r}_n : E^{ℓ,r}_n → E^{ℓ-r,r}_{n-1}`.
    pub fn page_differential(&self, level: i64, r: i64, n: i64) -> Result<InducedMap> {
        let src = self.page_cell(level, Page::Finite(r), n)?;
        let tgt = self.page_cell(level - r, Page::Finite(r), n - 1)?;
        let images = self.boundary(n).mul(&src.lifts);
        let mut cols = Vec::with_capacity(images.cols());
        for j in 0..images.cols() {
            cols.push(tgt.reduce(&images.column(j)).map_err(|_| {
                Error::Inconsistent(format!(
                    "page {r} differential at ({level}, {n}): boundary of generator {j} leaves Z^({},{r})",
                    level - r
                ))
            })?);
        }
        Ok(InducedMap::new(
            src.shape(),
            tgt.shape(),
            IntMatrix::from_columns(tgt.generator_count(), &cols),
        ))
    }

    /// Homology of page `r` at `(ℓ, n)`, computed from the page differentials.
    pub fn page_homology(&self, level: i64, r: i64, n: i64) -> Result<Subquotient> {
        let out = self.page_differential(level, r, n)?;
        let incoming = self.page_differential(level + r, r, n + 1)?;
        homology_at(&incoming, &out)
    }

    /// `E^{ℓ,∞}_n` together with the first finite `r` whose page cell is
    /// built from the same three lattices.
    pub fn stabilized_page(&self, level: i64, n: i64) -> Result<(Arc<Subquotient>, i64)> {
        let limit = self.page_cell(level, Page::Infinity, n)?;
        let z = self.z_submodule(level, Page::Infinity, n);
        let z_below = self.z_submodule(level - 1, Page::Infinity, n);
        let b = self.b_submodule(level, Page::Infinity, n);
        let bound = (level + 3).max(self.l_max - level + 2).max(1);
        for r in 0..=bound {
            if same_lattice(&self.z_submodule(level, Page::Finite(r), n), &z)
                && same_lattice(&self.z_submodule(level - 1, Page::Finite(r - 1), n), &z_below)
                && same_lattice(&self.b_submodule(level, Page::Finite(r - 1), n), &b)
            {
                return Ok((limit, r));
            }
        }
        Err(Error::Inconsistent(format!(
            "page at ({level}, {n}) did not stabilize by r = {bound}"
        )))
    }

    /// The map `E^{ℓ,r}_n(G) → E^{ℓ,r}_n(H)` induced by `f : G → H`.
    pub fn page_map(&self, f: &DigraphMap, target: &FilteredComplex, level: i64, r: Page, n: i64) -> Result<InducedMap> {
        if **f.source() != *self.graph || **f.target() != *target.graph {
            return Err(Error::MismatchedMaps);
        }
        f.validate()?;
        let src = self.page_cell(level, r, n)?;
        let tgt = target.page_cell(level, r, n)?;
        let (Some(a), Some(b)) = (self.basis(n), target.basis(n)) else {
            return Err(Error::DimensionMismatch(format!("degree {n} out of range")));
        };
        let push = pushforward_matrix(f, a, b);
        let images = push.mul(&src.lifts);
        let mut cols = Vec::with_capacity(images.cols());
        for j in 0..images.cols() {
            cols.push(tgt.reduce(&images.column(j)).map_err(|_| {
                Error::Inconsistent(format!("page map at ({level}, {n}): image of generator {j} leaves Z"))
            })?);
        }
        Ok(InducedMap::new(
            src.shape(),
            tgt.shape(),
            IntMatrix::from_columns(tgt.generator_count(), &cols),
        ))
    }

    /// Page `r` for `0 ≤ n ≤ n_max` and `-1 ≤ ℓ ≤ level cap`, in `(ℓ, n)` order.
    pub fn page(&self, r: Page) -> Result<SpectralPage> {
        let mut cells = Vec::new();
        for n in -1..=self.n_max {
            for level in -1..=self.l_max {
                cells.push(((level, n), self.page_cell(level, r, n)?.shape()));
            }
        }
        cells.sort_by_key(|&(k, _)| k);
        Ok(SpectralPage { r, cells })
    }
}

/// Isomorphism types of every cell of one page.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralPage {
    pub r: Page,
    pub cells: Vec<((i64, i64), GroupShape)>,
}

/// Equal column spans, by mutual containment.
pub fn same_lattice(a: &IntMatrix, b: &IntMatrix) -> bool {
    let (a, b) = (image_basis(a), image_basis(b));
    if a.cols() != b.cols() {
        return false;
    }
    let contains = |outer: &IntMatrix, inner: &IntMatrix| {
        let c = Coordinatizer::new(outer).expect("image bases are independent");
        (0..inner.cols()).all(|j| c.contains(&inner.column(j)))
    };
    contains(&a, &b) && contains(&b, &a)
}
