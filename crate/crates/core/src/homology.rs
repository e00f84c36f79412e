//! Magnitude homology `MH^ℓ_k`, the differential `∂'` it inherits, its
//! homology `dMH^ℓ_k`, reduced path homology `H̃_k`, homology of the
//! unfiltered complex `R_*`, and maps induced by digraph maps.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::chains::{enumerate_mc, enumerate_upto, face_matrix, pushforward_matrix, GeneratorBasis};
use crate::digraph::{Digraph, DigraphMap};
use crate::error::{Error, Result};
use crate::int::Int;
use crate::linalg::{kernel_basis, smith_normal_form, subquotient, IntMatrix, Subquotient};

/// Isomorphism type `ℤ^free_rank ⊕ ⊕ ℤ/torsion[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupShape {
    pub free_rank: usize,
    pub torsion: Vec<Int>,
}

impl GroupShape {
    pub fn zero() -> Self {
        GroupShape {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        GroupShape {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn generator_count(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn is_zero(&self) -> bool {
        self.generator_count() == 0
    }

    /// Columns `t_i e_i`, one per torsion factor.
    pub fn relations(&self) -> IntMatrix {
        let mut rel = IntMatrix::zeros(self.generator_count(), self.torsion.len());
        for (i, t) in self.torsion.iter().enumerate() {
            rel.set(self.free_rank + i, i, t.clone());
        }
        rel
    }

    /// Reduces torsion coordinates of every column into `[0, t)`.
    pub fn normalize_columns(&self, m: &mut IntMatrix) {
        for (i, t) in self.torsion.iter().enumerate() {
            let r = self.free_rank + i;
            for c in 0..m.cols() {
                let v = m.get(r, c).mod_floor(t);
                m.set(r, c, v);
            }
        }
    }
}

impl fmt::Display for GroupShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::linalg::describe_group(self.free_rank, &self.torsion))
    }
}

impl Subquotient {
    pub fn shape(&self) -> GroupShape {
        GroupShape {
            free_rank: self.free_rank,
            torsion: self.torsion.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    MH,
    DMH,
    PathHomology,
    RHomology,
    Page,
}

/// Where the vectors presented by a [`HomologyGroup`] live.
#[derive(Clone, Debug)]
pub enum Ambient {
    /// Coordinates in `basis`.
    Chains,
    /// Group coordinates of another homology group (`dMH` lives in `MH`).
    GroupOf(Arc<HomologyGroup>),
}

#[derive(Clone, Debug)]
pub struct HomologyGroup {
    pub kind: GroupKind,
    pub level: Option<i64>,
    pub degree: i64,
    /// Chain basis underneath; for [`Ambient::GroupOf`] this is the parent's basis.
    pub basis: Arc<GeneratorBasis>,
    pub ambient: Ambient,
    pub group: Subquotient,
}

impl HomologyGroup {
    pub fn shape(&self) -> GroupShape {
        self.group.shape()
    }

    pub fn is_zero(&self) -> bool {
        self.group.is_zero()
    }

    /// Chain-level representative (in `basis` coordinates) of generator `j`.
    pub fn chain_lift(&self, j: usize) -> Vec<Int> {
        let lift = self.group.lift(j);
        match &self.ambient {
            Ambient::Chains => lift,
            Ambient::GroupOf(parent) => parent.group.lifts.mul_vec(&lift),
        }
    }

    /// Group coordinates of the class of a chain given in `basis` coordinates.
    pub fn reduce_chain(&self, x: &[Int]) -> Result<Vec<Int>> {
        match &self.ambient {
            Ambient::Chains => self.group.reduce(x),
            Ambient::GroupOf(parent) => self.group.reduce(&parent.reduce_chain(x)?),
        }
    }
}

/// A homomorphism between presented groups, in group coordinates with
/// torsion entries of the target normalized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedMap {
    pub source: GroupShape,
    pub target: GroupShape,
    pub matrix: IntMatrix,
}

impl InducedMap {
    pub fn new(source: GroupShape, target: GroupShape, mut matrix: IntMatrix) -> Self {
        assert_eq!(matrix.rows(), target.generator_count());
        assert_eq!(matrix.cols(), source.generator_count());
        target.normalize_columns(&mut matrix);
        InducedMap { source, target, matrix }
    }

    pub fn identity(shape: GroupShape) -> Self {
        let n = shape.generator_count();
        InducedMap::new(shape.clone(), shape, IntMatrix::identity(n))
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &InducedMap) -> Result<InducedMap> {
        if self.target != next.source {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose a map into {} with a map out of {}",
                self.target, next.source
            )));
        }
        Ok(InducedMap::new(
            self.source.clone(),
            next.target.clone(),
            next.matrix.mul(&self.matrix),
        ))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Generators (in source coordinates) of the kernel, including the
    /// source's own torsion relations.
    pub fn kernel_generators(&self) -> IntMatrix {
        map_kernel(&self.matrix, &self.target)
    }

    pub fn is_surjective(&self) -> bool {
        let m = self.target.generator_count();
        let stacked = self.matrix.hstack(&self.target.relations());
        let snf = smith_normal_form(&stacked);
        snf.rank() == m && snf.diag.iter().all(Int::is_one)
    }

    pub fn is_injective(&self) -> bool {
        let k = self.kernel_generators();
        match subquotient(&k, &self.source.relations()) {
            Ok(q) => q.is_zero(),
            Err(_) => false,
        }
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

/// `Ker(out) / Im(incoming)` in the group coordinates of the middle group.
pub fn homology_at(incoming: &InducedMap, out: &InducedMap) -> Result<Subquotient> {
    if incoming.target != out.source {
        return Err(Error::DimensionMismatch(format!(
            "maps meet at {} and {}",
            incoming.target, out.source
        )));
    }
    let kernel = out.kernel_generators();
    let boundaries = incoming.matrix.hstack(&out.source.relations());
    subquotient(&kernel, &boundaries)
}

/// Kernel of `ℤ^n → ℤ^m / span(target.relations())` given by `m`.
fn map_kernel(m: &IntMatrix, target: &GroupShape) -> IntMatrix {
    let n = m.cols();
    let stacked = m.hstack(&target.relations());
    let k = kernel_basis(&stacked);
    let rows: Vec<usize> = (0..n).collect();
    k.select_rows(&rows)
}

/// Reduces ambient vectors (columns of `images`) into `target` and returns
/// the matrix of group coordinates.
fn reduce_columns(target: &HomologyGroup, images: &IntMatrix, what: &str) -> Result<IntMatrix> {
    let mut cols = Vec::with_capacity(images.cols());
    for j in 0..images.cols() {
        match target.reduce_chain(&images.column(j)) {
            Ok(c) => cols.push(c),
            Err(Error::NotInKernel) => {
                return Err(Error::Inconsistent(format!(
                    "{what}: image of generator {j} is not a cycle"
                )))
            }
            Err(e) => return Err(e),
        }
    }
    Ok(IntMatrix::from_columns(target.group.generator_count(), &cols))
}

/// Nonzero off-diagonal groups found inside a box.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalReport {
    pub lmax: i64,
    pub kmax: i64,
    pub witnesses: Vec<(i64, i64, GroupShape)>,
}

impl DiagonalReport {
    pub fn is_diagonal_within_bounds(&self) -> bool {
        self.witnesses.is_empty()
    }
}

type Cache<V> = Mutex<HashMap<(i64, i64), Arc<V>>>;

fn cached<V>(cache: &Cache<V>, key: (i64, i64), make: impl FnOnce() -> Result<V>) -> Result<Arc<V>> {
    if let Some(v) = cache.lock().expect("cache poisoned").get(&key) {
        return Ok(v.clone());
    }
    let v = Arc::new(make()?);
    Ok(cache.lock().expect("cache poisoned").entry(key).or_insert(v).clone())
}

/// All homology computations for one digraph, memoized per `(ℓ, k)`.
///
/// Safe to share between threads; concurrent misses may compute the same
/// cell twice but store one result.
pub struct HomologyEngine {
    graph: Arc<Digraph>,
    mc: Cache<GeneratorBasis>,
    mh: Cache<HomologyGroup>,
    dmh_diff: Cache<InducedMap>,
    dmh: Cache<HomologyGroup>,
}

impl HomologyEngine {
    pub fn new(graph: Arc<Digraph>) -> Self {
        HomologyEngine {
            graph,
            mc: Mutex::default(),
            mh: Mutex::default(),
            dmh_diff: Mutex::default(),
            dmh: Mutex::default(),
        }
    }

    pub fn graph(&self) -> &Arc<Digraph> {
        &self.graph
    }

    /// Basis of `MC^ℓ_k`.
    pub fn mc(&self, level: i64, k: i64) -> Arc<GeneratorBasis> {
        cached(&self.mc, (level, k), || Ok(enumerate_mc(&self.graph, level, k))).expect("enumeration cannot fail")
    }

    /// `MH^ℓ_k = Ker ∂^ℓ_k / Im ∂^ℓ_{k+1}`.
    pub fn magnitude_homology(&self, level: i64, k: i64) -> Result<Arc<HomologyGroup>> {
        cached(&self.mh, (level, k), || {
            let here = self.mc(level, k);
            let cycles = kernel_basis(&face_matrix(&here, &self.mc(level, k - 1)));
            let boundaries = face_matrix(&self.mc(level, k + 1), &here);
            let group = subquotient(&cycles, &boundaries)?;
            Ok(HomologyGroup {
                kind: GroupKind::MH,
                level: Some(level),
                degree: k,
                basis: here,
                ambient: Ambient::Chains,
                group,
            })
        })
    }

    /// `∂'^ℓ_k : MH^ℓ_k → MH^{ℓ-1}_{k-1}`, computed on cycle lifts.
    pub fn dmh_differential(&self, level: i64, k: i64) -> Result<Arc<InducedMap>> {
        cached(&self.dmh_diff, (level, k), || {
            let src = self.magnitude_homology(level, k)?;
            let tgt = self.magnitude_homology(level - 1, k - 1)?;
            let drop = face_matrix(&src.basis, &tgt.basis);
            let images = drop.mul(&src.group.lifts);
            let m = reduce_columns(&tgt, &images, "drop-one differential")?;
            Ok(InducedMap::new(src.shape(), tgt.shape(), m))
        })
    }

    /// `dMH^ℓ_k`, presented in the group coordinates of `MH^ℓ_k`.
    pub fn dmh(&self, level: i64, k: i64) -> Result<Arc<HomologyGroup>> {
        cached(&self.dmh, (level, k), || {
            let mh = self.magnitude_homology(level, k)?;
            let out = self.dmh_differential(level, k)?;
            let incoming = self.dmh_differential(level + 1, k + 1)?;
            let group = homology_at(&incoming, &out)?;
            Ok(HomologyGroup {
                kind: GroupKind::DMH,
                level: Some(level),
                degree: k,
                basis: mh.basis.clone(),
                ambient: Ambient::GroupOf(mh),
                group,
            })
        })
    }

    /// Lattice basis of `Ω_k = Ker ∂^k_k` in coordinates of `A_k = MC^k_k`.
    pub fn path_complex_basis(&self, k: i64) -> IntMatrix {
        kernel_basis(&face_matrix(&self.mc(k, k), &self.mc(k, k - 1)))
    }

    /// `H̃_k` as the homology of `(Ω_*, ∂)`, independent of the `MH` groups.
    pub fn reduced_path_homology(&self, k: i64) -> Result<HomologyGroup> {
        let a_k = self.mc(k, k);
        let omega = self.path_complex_basis(k);
        // ∂ of an element of Ω_k lies entirely in A_{k-1}.
        let d = face_matrix(&a_k, &self.mc(k - 1, k - 1)).mul(&omega);
        let cycles = omega.mul(&kernel_basis(&d));
        let omega_up = self.path_complex_basis(k + 1);
        let boundaries = face_matrix(&self.mc(k + 1, k + 1), &a_k).mul(&omega_up);
        let group = subquotient(&cycles, &boundaries)?;
        Ok(HomologyGroup {
            kind: GroupKind::PathHomology,
            level: None,
            degree: k,
            basis: a_k,
            ambient: Ambient::Chains,
            group,
        })
    }

    /// `H_k(R_*)` using every tuple with `L ≤ cap`; needs `cap ≥ (k+1)·diam`.
    pub fn r_homology(&self, k: i64, cap: i64) -> Result<HomologyGroup> {
        let diam = self.graph.finite_diameter()?;
        let required = (k + 1).max(0) * diam;
        if cap < required {
            return Err(Error::LevelCapTooSmall {
                cap,
                required,
                degree: k,
            });
        }
        let here = Arc::new(enumerate_upto(&self.graph, cap, k));
        let cycles = kernel_basis(&face_matrix(&here, &enumerate_upto(&self.graph, cap, k - 1)));
        let boundaries = face_matrix(&enumerate_upto(&self.graph, cap, k + 1), &here);
        let group = subquotient(&cycles, &boundaries)?;
        Ok(HomologyGroup {
            kind: GroupKind::RHomology,
            level: None,
            degree: k,
            basis: here,
            ambient: Ambient::Chains,
            group,
        })
    }

    /// Every nonzero `MH^ℓ_k` with `ℓ ≠ k` and `-1 ≤ ℓ ≤ lmax`, `-1 ≤ k ≤ kmax`.
    pub fn is_diagonal(&self, lmax: i64, kmax: i64) -> Result<DiagonalReport> {
        let mut witnesses = Vec::new();
        for level in -1..=lmax {
            for k in -1..=kmax {
                if level == k {
                    continue;
                }
                let g = self.magnitude_homology(level, k)?;
                if !g.is_zero() {
                    witnesses.push((level, k, g.shape()));
                }
            }
        }
        Ok(DiagonalReport { lmax, kmax, witnesses })
    }

    /// Positions `j` in `-1..=lmax` where `MH^{j+1}_{j+1} → MH^j_j → MH^{j-1}_{j-1}`
    /// fails to be exact, with the defect `dMH^j_j`.
    pub fn diagonal_exactness_defects(&self, lmax: i64) -> Result<Vec<(i64, GroupShape)>> {
        let mut defects = Vec::new();
        for j in -1..=lmax {
            let d = self.dmh(j, j)?;
            if !d.is_zero() {
                defects.push((j, d.shape()));
            }
        }
        Ok(defects)
    }
}

pub fn magnitude_homology(g: &Arc<Digraph>, level: i64, k: i64) -> Result<Arc<HomologyGroup>> {
    HomologyEngine::new(g.clone()).magnitude_homology(level, k)
}

pub fn dmh(g: &Arc<Digraph>, level: i64, k: i64) -> Result<Arc<HomologyGroup>> {
    HomologyEngine::new(g.clone()).dmh(level, k)
}

pub fn reduced_path_homology(g: &Arc<Digraph>, k: i64) -> Result<HomologyGroup> {
    HomologyEngine::new(g.clone()).reduced_path_homology(k)
}

pub fn r_homology(g: &Arc<Digraph>, k: i64, cap: i64) -> Result<HomologyGroup> {
    HomologyEngine::new(g.clone()).r_homology(k, cap)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    MH,
    DMH,
}

/// `(f_*)^ℓ_k` on `MH`: push lifts forward and reduce in the target.
pub fn induced_mh_map(
    f: &DigraphMap,
    src: &HomologyEngine,
    tgt: &HomologyEngine,
    level: i64,
    k: i64,
) -> Result<InducedMap> {
    check_engines(f, src, tgt)?;
    let a = src.magnitude_homology(level, k)?;
    let b = tgt.magnitude_homology(level, k)?;
    let push = pushforward_matrix(f, &a.basis, &b.basis);
    push_lifts(&push, &a.group.lifts, &a, &b)
}

/// Reduces `push · lifts` into `target`; exposed for lift-perturbation checks.
pub fn push_lifts(push: &IntMatrix, lifts: &IntMatrix, source: &HomologyGroup, target: &HomologyGroup) -> Result<InducedMap> {
    let m = reduce_columns(target, &push.mul(lifts), "pushforward")?;
    Ok(InducedMap::new(source.shape(), target.shape(), m))
}

/// `(f¹_*)^ℓ_k` on `dMH`, checked to commute with `∂'` on both sides.
pub fn induced_dmh_map(
    f: &DigraphMap,
    src: &HomologyEngine,
    tgt: &HomologyEngine,
    level: i64,
    k: i64,
) -> Result<InducedMap> {
    let on_mh = induced_mh_map(f, src, tgt, level, k)?;
    let below = induced_mh_map(f, src, tgt, level - 1, k - 1)?;
    let left = on_mh.then(&*tgt.dmh_differential(level, k)?)?;
    let right = src.dmh_differential(level, k)?.then(&below)?;
    if left != right {
        return Err(Error::Inconsistent(format!(
            "induced map does not commute with the drop-one differential at ({level}, {k})"
        )));
    }
    let a = src.dmh(level, k)?;
    let b = tgt.dmh(level, k)?;
    let mut images = on_mh.matrix.mul(&a.group.lifts);
    on_mh.target.normalize_columns(&mut images);
    let mut cols = Vec::with_capacity(images.cols());
    for j in 0..images.cols() {
        cols.push(b.group.reduce(&images.column(j)).map_err(|_| {
            Error::Inconsistent(format!("induced dMH map: image of generator {j} is not a ∂'-cycle"))
        })?);
    }
    let m = IntMatrix::from_columns(b.group.generator_count(), &cols);
    Ok(InducedMap::new(a.shape(), b.shape(), m))
}

/// Convenience wrapper building fresh engines for source and target.
pub fn induced_map(f: &DigraphMap, level: i64, k: i64, kind: MapKind) -> Result<InducedMap> {
    let src = HomologyEngine::new(f.source().clone());
    let tgt = HomologyEngine::new(f.target().clone());
    match kind {
        MapKind::MH => induced_mh_map(f, &src, &tgt, level, k),
        MapKind::DMH => induced_dmh_map(f, &src, &tgt, level, k),
    }
}

fn check_engines(f: &DigraphMap, src: &HomologyEngine, tgt: &HomologyEngine) -> Result<()> {
    if **f.source() != *src.graph || **f.target() != *tgt.graph {
        return Err(Error::MismatchedMaps);
    }
    f.validate()
}
