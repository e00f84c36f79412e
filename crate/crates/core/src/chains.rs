//! The reduced chain complex `R_*(G)` on non-degenerate tuples, its length
//! filtration `MC^ℓ_k(G)`, and the chain-level operators: boundaries,
//! truncations, join, prism and pushforward.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Deref, Neg, Sub};

use crate::digraph::{Digraph, DigraphMap, ExtInt};
use crate::error::{Error, Result};
use crate::int::Int;
use crate::linalg::IntMatrix;

/// A vertex tuple `(x_0, ..., x_k)` of degree `k`; `()` has degree `-1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Tuple(Vec<usize>);

impl Tuple {
    pub fn new(vertices: Vec<usize>) -> Self {
        Tuple(vertices)
    }

    pub fn empty() -> Self {
        Tuple(Vec::new())
    }

    pub fn degree(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    pub fn is_degenerate(&self) -> bool {
        self.0.windows(2).any(|w| w[0] == w[1])
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vertices(self) -> Vec<usize> {
        self.0
    }

    /// Signed faces `(sign, face)` that survive in `R_{k-1}`: faces whose two
    /// new neighbours coincide are dropped.
    pub fn faces(&self) -> impl Iterator<Item = (i64, Tuple)> + '_ {
        let v = &self.0;
        (0..v.len()).filter_map(move |i| {
            if i > 0 && i + 1 < v.len() && v[i - 1] == v[i + 1] {
                return None;
            }
            let mut face = Vec::with_capacity(v.len() - 1);
            face.extend_from_slice(&v[..i]);
            face.extend_from_slice(&v[i + 1..]);
            Some((if i % 2 == 0 { 1 } else { -1 }, Tuple(face)))
        })
    }

    /// `self • other`, or `None` when the junction repeats a vertex.
    pub fn join(&self, other: &Tuple) -> Option<Tuple> {
        if let (Some(a), Some(b)) = (self.0.last(), other.0.first()) {
            if a == b {
                return None;
            }
        }
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Some(Tuple(v))
    }

    pub fn display<'a>(&'a self, g: &'a Digraph) -> impl fmt::Display + 'a {
        struct Named<'a>(&'a Tuple, &'a Digraph);
        impl fmt::Display for Named<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let names: Vec<&str> = self.0 .0.iter().map(|&v| self.1.name(v)).collect();
                write!(f, "({})", names.join(","))
            }
        }
        Named(self, g)
    }
}

impl Deref for Tuple {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for Tuple {
    fn from(v: Vec<usize>) -> Self {
        Tuple(v)
    }
}

impl<const N: usize> From<[usize; N]> for Tuple {
    fn from(v: [usize; N]) -> Self {
        Tuple(v.to_vec())
    }
}

impl fmt::Debug for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `L(x_0, ..., x_k) = Σ d(x_i, x_{i+1})`, and `L(()) = -1`.
pub fn length_of(t: &[usize], g: &Digraph) -> ExtInt {
    if t.is_empty() {
        return ExtInt::Finite(-1);
    }
    t.windows(2)
        .map(|w| g.dist(w[0], w[1]))
        .fold(ExtInt::Finite(0), |a, b| a + b)
}

fn finite_length(t: &[usize], g: &Digraph) -> Option<i64> {
    length_of(t, g).finite()
}

/// Which lengths a [`GeneratorBasis`] covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Level {
    /// `MC^ℓ_k`.
    Exact(i64),
    /// `⊕_{ℓ' ≤ ℓ} MC^{ℓ'}_k`, ordered by level, then lexicographically.
    AtMost(i64),
}

/// An ordered list of non-degenerate tuples of one degree, the coordinate
/// frame of every matrix.
#[derive(Clone, Debug)]
pub struct GeneratorBasis {
    degree: i64,
    level: Level,
    tuples: Vec<Tuple>,
    lengths: Vec<i64>,
    index: HashMap<Tuple, usize>,
}

impl GeneratorBasis {
    fn from_tuples(degree: i64, level: Level, tuples: Vec<Tuple>, lengths: Vec<i64>) -> Self {
        let index = tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        GeneratorBasis {
            degree,
            level,
            tuples,
            lengths,
            index,
        }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> &[Tuple] {
        &self.tuples
    }

    pub fn tuple(&self, i: usize) -> &Tuple {
        &self.tuples[i]
    }

    /// `L` of the `i`-th tuple.
    pub fn length(&self, i: usize) -> i64 {
        self.lengths[i]
    }

    pub fn position(&self, t: &Tuple) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// Number of leading tuples with `L ≤ ℓ` (meaningful for [`Level::AtMost`]).
    pub fn prefix_len(&self, level: i64) -> usize {
        self.lengths.partition_point(|&l| l <= level)
    }

    /// Coordinates of `c`, or `None` when it has a term outside the basis.
    pub fn coordinates(&self, c: &Chain) -> Option<Vec<Int>> {
        let mut v = vec![Int::zero(); self.len()];
        for (t, coef) in c.terms() {
            v[self.position(t)?] += coef;
        }
        Some(v)
    }

    pub fn chain(&self, coords: &[Int]) -> Chain {
        assert_eq!(coords.len(), self.len(), "coordinate vector has the wrong length");
        let mut c = Chain::zero();
        for (t, a) in self.tuples.iter().zip(coords) {
            c.add_term(t.clone(), a.clone());
        }
        c
    }
}

/// Depth-first enumeration of non-degenerate `(k+1)`-tuples, lexicographic,
/// with length in `[lo, hi]`.
fn enumerate_range(g: &Digraph, k: i64, lo: i64, hi: i64) -> Vec<Tuple> {
    if k < -1 || hi < lo {
        return Vec::new();
    }
    if k == -1 {
        return if lo <= -1 && -1 <= hi { vec![Tuple::empty()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(k as usize + 1);
    fn extend(g: &Digraph, k: usize, lo: i64, hi: i64, used: i64, stack: &mut Vec<usize>, out: &mut Vec<Tuple>) {
        if stack.len() == k + 1 {
            if (lo..=hi).contains(&used) {
                out.push(Tuple(stack.clone()));
            }
            return;
        }
        let steps_after = (k + 1 - stack.len() - 1) as i64;
        let x = *stack.last().expect("stack starts with a vertex");
        for y in 0..g.vertex_count() {
            let Some(d) = g.dist(x, y).finite() else { continue };
            if d == 0 || used + d + steps_after > hi {
                continue;
            }
            stack.push(y);
            extend(g, k, lo, hi, used + d, stack, out);
            stack.pop();
        }
    }
    for x in 0..g.vertex_count() {
        stack.clear();
        stack.push(x);
        extend(g, k as usize, lo, hi, 0, &mut stack, &mut out);
    }
    out
}

/// Basis of `MC^ℓ_k(G)`: non-degenerate tuples of degree `k` with `L = ℓ`.
pub fn enumerate_mc(g: &Digraph, level: i64, k: i64) -> GeneratorBasis {
    let tuples = enumerate_range(g, k, level, level);
    let lengths = vec![level; tuples.len()];
    GeneratorBasis::from_tuples(k, Level::Exact(level), tuples, lengths)
}

/// Basis of `R^ℓ_k(G) = (R_k(G))^{≤ℓ}`, grouped by level in increasing order.
pub fn enumerate_upto(g: &Digraph, cap: i64, k: i64) -> GeneratorBasis {
    let mut tuples = enumerate_range(g, k, -1, cap);
    tuples.sort_by_cached_key(|t| (finite_length(t, g).expect("enumerated tuples are finite"), t.clone()));
    let lengths = tuples.iter().map(|t| finite_length(t, g).unwrap()).collect();
    GeneratorBasis::from_tuples(k, Level::AtMost(cap), tuples, lengths)
}

/// A finite `ℤ`-combination of non-degenerate tuples.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Chain {
    terms: BTreeMap<Tuple, Int>,
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(t, a)| format!("{a}·{t:?}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Chain {
    pub fn zero() -> Self {
        Chain::default()
    }

    /// The generator `t`, or `0` if `t` is degenerate.
    pub fn tuple(t: impl Into<Tuple>) -> Self {
        let mut c = Chain::zero();
        c.add_term(t.into(), Int::one());
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Tuple, &Int)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, t: &Tuple) -> Int {
        self.terms.get(t).cloned().unwrap_or_default()
    }

    /// Adds `coef · t`, ignoring degenerate tuples.
    pub fn add_term(&mut self, t: Tuple, coef: Int) {
        if coef.is_zero() || t.is_degenerate() {
            return;
        }
        match self.terms.entry(t) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &coef;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, a: &Int) -> Chain {
        let mut c = Chain::zero();
        for (t, b) in &self.terms {
            c.add_term(t.clone(), a * b);
        }
        c
    }

    /// `∂` on `R_*`.
    pub fn boundary(&self) -> Chain {
        let mut c = Chain::zero();
        for (t, a) in &self.terms {
            for (s, face) in t.faces() {
                c.add_term(face, if s > 0 { a.clone() } else { -a });
            }
        }
        c
    }

    fn filter(&self, keep: impl Fn(ExtInt) -> bool, g: &Digraph) -> Chain {
        Chain {
            terms: self
                .terms
                .iter()
                .filter(|(t, _)| keep(length_of(t, g)))
                .map(|(t, a)| (t.clone(), a.clone()))
                .collect(),
        }
    }

    /// `x^ℓ`: the terms with `L = ℓ`.
    pub fn level_part(&self, g: &Digraph, level: i64) -> Chain {
        self.filter(|l| l == ExtInt::Finite(level), g)
    }

    /// `x^{≤ℓ}`.
    pub fn at_most(&self, g: &Digraph, level: i64) -> Chain {
        self.filter(|l| l <= ExtInt::Finite(level), g)
    }

    /// `x^{≥ℓ}`.
    #[cfg(test)]
    fn at_least(&self, g: &Digraph, level: i64) -> Chain {
        self.filter(|l| l >= ExtInt::Finite(level), g)
    }

    /// Bilinear extension of [`Tuple::join`].
    pub fn join(&self, other: &Chain) -> Chain {
        let mut c = Chain::zero();
        for (x, a) in &self.terms {
            for (y, b) in &other.terms {
                if let Some(xy) = x.join(y) {
                    c.add_term(xy, a * b);
                }
            }
        }
        c
    }

    /// Includes a chain of `G` into `G × I` at height `0` (`x ↦ x`).
    pub fn bottom(&self) -> Chain {
        self.relabel(|v| 2 * v)
    }

    /// Includes a chain of `G` into `G × I` at height `1` (`x ↦ x'`).
    pub fn top(&self) -> Chain {
        self.relabel(|v| 2 * v + 1)
    }

    fn relabel(&self, f: impl Fn(usize) -> usize) -> Chain {
        let mut c = Chain::zero();
        for (t, a) in &self.terms {
            c.add_term(Tuple(t.iter().map(|&v| f(v)).collect()), a.clone());
        }
        c
    }

    /// The prism `∧x` in `G × I`, where `G × I` is
    /// [`cartesian_product`](crate::digraph::cartesian_product)`(G, I)` so that
    /// `v` has id `2v` and `v'` has id `2v + 1`.
    pub fn prism(&self) -> Chain {
        let mut c = Chain::zero();
        for (t, a) in &self.terms {
            for i in 0..t.len() {
                let mut v: Vec<usize> = t[..=i].iter().map(|&x| 2 * x).collect();
                v.extend(t[i..].iter().map(|&x| 2 * x + 1));
                c.add_term(Tuple(v), if i % 2 == 0 { a.clone() } else { -a });
            }
        }
        c
    }

    /// `(f_#)(x)`: images of tuples, degenerate images dropped.
    pub fn pushforward(&self, f: &DigraphMap) -> Chain {
        self.relabel(|v| f.apply(v))
    }
}

impl Add for &Chain {
    type Output = Chain;

    fn add(self, rhs: &Chain) -> Chain {
        let mut c = self.clone();
        for (t, a) in &rhs.terms {
            c.add_term(t.clone(), a.clone());
        }
        c
    }
}

impl Sub for &Chain {
    type Output = Chain;

    fn sub(self, rhs: &Chain) -> Chain {
        self + &(-rhs)
    }
}

impl Neg for &Chain {
    type Output = Chain;

    fn neg(self) -> Chain {
        self.scale(&Int::from(-1))
    }
}

/// How a boundary matrix truncates faces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryMode {
    /// `∂^ℓ_k : MC^ℓ_k → MC^ℓ_{k-1}`.
    SameLevel,
    /// Chain-level `∂'^ℓ_k : MC^ℓ_k → MC^{ℓ-1}_{k-1}`.
    DropOne,
    /// `∂_k` into the union of levels `≤ ℓ`.
    Full,
}

/// Matrix of `∂` from `src` to `target`, keeping only faces present in `target`.
///
/// `mode` states which truncation `target` is supposed to realize and is
/// checked against the degrees and levels of both bases.
pub fn boundary_matrix(src: &GeneratorBasis, target: &GeneratorBasis, mode: BoundaryMode) -> Result<IntMatrix> {
    if target.degree != src.degree - 1 {
        return Err(Error::DimensionMismatch(format!(
            "boundary from degree {} cannot land in degree {}",
            src.degree, target.degree
        )));
    }
    let ok = match (mode, src.level, target.level) {
        (BoundaryMode::SameLevel, Level::Exact(a), Level::Exact(b)) => a == b,
        (BoundaryMode::DropOne, Level::Exact(a), Level::Exact(b)) => b == a - 1,
        (BoundaryMode::Full, Level::Exact(a) | Level::AtMost(a), Level::AtMost(b)) => b >= a,
        _ => false,
    };
    if !ok {
        return Err(Error::DimensionMismatch(format!(
            "{mode:?} boundary from {:?} into {:?}",
            src.level, target.level
        )));
    }
    Ok(face_matrix(src, target))
}

/// Matrix of `∂` restricted to faces that appear in `target`.
pub fn face_matrix(src: &GeneratorBasis, target: &GeneratorBasis) -> IntMatrix {
    let mut m = IntMatrix::zeros(target.len(), src.len());
    for (j, t) in src.tuples.iter().enumerate() {
        for (s, face) in t.faces() {
            if let Some(i) = target.position(&face) {
                *m.get_mut(i, j) += &Int::from(s);
            }
        }
    }
    m
}

/// Matrix of `(f_#)`: each source tuple goes to its image if the image is
/// non-degenerate and lies in `target`.
pub fn pushforward_matrix(f: &DigraphMap, src: &GeneratorBasis, target: &GeneratorBasis) -> IntMatrix {
    let mut m = IntMatrix::zeros(target.len(), src.len());
    for (j, t) in src.tuples.iter().enumerate() {
        let image = Tuple(t.iter().map(|&v| f.apply(v)).collect());
        if image.is_degenerate() {
            continue;
        }
        if let Some(i) = target.position(&image) {
            m.set(i, j, Int::one());
        }
    }
    m
}

/// Matrix of `(f_#)^ℓ_k` on `MC^ℓ_k`.
pub fn pushforward_level_matrix(f: &DigraphMap, level: i64, k: i64) -> IntMatrix {
    let src = enumerate_mc(f.source(), level, k);
    let target = enumerate_mc(f.target(), level, k);
    pushforward_matrix(f, &src, &target)
}
