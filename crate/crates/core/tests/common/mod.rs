//! Brute-force reference computations shared by the integration tests.
//!
//! Nothing here calls into the library's chain or linear-algebra code: tuples
//! are enumerated exhaustively, distances come from Floyd–Warshall, and ranks
//! are taken over a prime field (or over `Q` by fraction-free elimination).

#![allow(dead_code)]

use std::collections::HashMap;

use magpath::Digraph;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const P: u64 = 1_000_000_007;
const INF: i64 = i64::MAX / 4;

/// Directed distances by Floyd–Warshall; unreachable pairs are `INF`.
pub fn distances(g: &Digraph) -> Vec<Vec<i64>> {
    let n = g.vertex_count();
    let mut d = vec![vec![INF; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for (u, v) in g.edges() {
        d[u][v] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

pub struct Oracle {
    pub n: usize,
    pub dist: Vec<Vec<i64>>,
    adj: Vec<Vec<bool>>,
    cache: HashMap<i64, Vec<Vec<usize>>>,
}

impl Oracle {
    pub fn new(g: &Digraph) -> Self {
        let n = g.vertex_count();
        let mut adj = vec![vec![false; n]; n];
        for (u, v) in g.edges() {
            adj[u][v] = true;
        }
        Oracle { n, dist: distances(g), adj, cache: HashMap::new() }
    }

    pub fn length(&self, t: &[usize]) -> i64 {
        if t.is_empty() {
            return -1;
        }
        t.windows(2).map(|w| self.dist[w[0]][w[1]]).fold(0, |a, b| (a + b).min(INF))
    }

    /// Every non-degenerate tuple of degree `k` (that is, `k + 1` entries).
    pub fn tuples(&mut self, k: i64) -> Vec<Vec<usize>> {
        if k < -1 {
            return Vec::new();
        }
        if let Some(t) = self.cache.get(&k) {
            return t.clone();
        }
        let mut out = vec![Vec::new()];
        for _ in 0..=k {
            let mut next = Vec::new();
            for t in &out {
                for v in 0..self.n {
                    if t.last() != Some(&v) {
                        let mut s: Vec<usize> = t.clone();
                        s.push(v);
                        next.push(s);
                    }
                }
            }
            out = next;
        }
        self.cache.insert(k, out.clone());
        out
    }

    /// Basis of `MC^ℓ_k`.
    pub fn mc(&mut self, level: i64, k: i64) -> Vec<Vec<usize>> {
        let ts = self.tuples(k);
        ts.into_iter().filter(|t| self.length(t) == level).collect()
    }

    /// Tuples of degree `k` with `L ≤ cap`.
    pub fn upto(&mut self, cap: i64, k: i64) -> Vec<Vec<usize>> {
        let ts = self.tuples(k);
        ts.into_iter().filter(|t| self.length(t) <= cap).collect()
    }

    /// Allowed paths of degree `k`: every step is an edge.
    pub fn allowed(&mut self, k: i64) -> Vec<Vec<usize>> {
        let ts = self.tuples(k);
        ts.into_iter()
            .filter(|t| t.windows(2).all(|w| self.adj[w[0]][w[1]]))
            .collect()
    }
}

/// `Σ (-1)^i d_i t`, dropping faces with a repeated neighbour.
pub fn faces(t: &[usize]) -> Vec<(i64, Vec<usize>)> {
    let mut out = Vec::new();
    for i in 0..t.len() {
        let mut f = t.to_vec();
        f.remove(i);
        if f.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        out.push((if i % 2 == 0 { 1 } else { -1 }, f));
    }
    out
}

/// Matrix (rows = target) of the full boundary restricted to `src → tgt`,
/// entries mod `P`.
pub fn boundary_mod_p(src: &[Vec<usize>], tgt: &[Vec<usize>]) -> Vec<Vec<u64>> {
    let index: HashMap<&Vec<usize>, usize> = tgt.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut m = vec![vec![0u64; src.len()]; tgt.len()];
    for (j, t) in src.iter().enumerate() {
        for (s, f) in faces(t) {
            if let Some(&i) = index.get(&f) {
                m[i][j] = (m[i][j] + if s > 0 { 1 } else { P - 1 }) % P;
            }
        }
    }
    m
}

fn inv(a: u64) -> u64 {
    let (mut r, mut b, mut e) = (1u64, a % P, P - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    r
}

/// Reduced row echelon form mod `P`; returns the pivot columns.
fn rref(m: &mut [Vec<u64>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        let s = inv(m[r][c]);
        for x in m[r].iter_mut() {
            *x = *x * s % P;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + P - f * y % P) % P;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank_mod_p(m: &[Vec<u64>]) -> usize {
    rref(&mut m.to_vec()).len()
}

/// Kernel basis mod `P`, as columns of a `cols × dim` matrix.
pub fn kernel_mod_p(m: &[Vec<u64>], cols: usize) -> Vec<Vec<u64>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut k = vec![vec![0u64; free.len()]; cols];
    for (j, &f) in free.iter().enumerate() {
        k[f][j] = 1;
        for (r, &p) in pivots.iter().enumerate() {
            k[p][j] = (P - a[r][f]) % P;
        }
    }
    k
}

pub fn mul_mod_p(a: &[Vec<u64>], b: &[Vec<u64>], inner: usize) -> Vec<Vec<u64>> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(0, |s, t| (s + row[t] * b[t][j]) % P))
                .collect()
        })
        .collect()
}

pub fn hstack(a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    a.iter().zip(b).map(|(x, y)| x.iter().chain(y).copied().collect()).collect()
}

/// Same-level boundary `MC^ℓ_k → MC^ℓ_{k-1}`.
fn same_level(o: &mut Oracle, level: i64, k: i64) -> Vec<Vec<u64>> {
    let (src, tgt) = (o.mc(level, k), o.mc(level, k - 1));
    boundary_mod_p(&src, &tgt)
}

/// Rational dimension of `MH^ℓ_k`.
pub fn mh_dim(o: &mut Oracle, level: i64, k: i64) -> usize {
    let n = o.mc(level, k).len();
    n - rank_mod_p(&same_level(o, level, k)) - rank_mod_p(&same_level(o, level, k + 1))
}

/// Rank of `∂' : MH^ℓ_k → MH^{ℓ-1}_{k-1}` over `Q`.
fn drop_one_rank(o: &mut Oracle, level: i64, k: i64) -> usize {
    let src = o.mc(level, k);
    let cycles = kernel_mod_p(&same_level(o, level, k), src.len());
    let below = o.mc(level - 1, k - 1);
    let drop = boundary_mod_p(&src, &below);
    let image = mul_mod_p(&drop, &cycles, src.len());
    let bounds = same_level(o, level - 1, k);
    if below.is_empty() {
        return 0;
    }
    rank_mod_p(&hstack(&image, &bounds)) - rank_mod_p(&bounds)
}

/// Rational dimension of `dMH^ℓ_k`.
pub fn dmh_dim(o: &mut Oracle, level: i64, k: i64) -> usize {
    mh_dim(o, level, k) - drop_one_rank(o, level, k) - drop_one_rank(o, level + 1, k + 1)
}

/// Rational dimension of reduced path homology, from the regular path complex
/// `Ω_k = {x ∈ A_k : ∂x ∈ A_{k-1}}`.
pub fn path_dim(o: &mut Oracle, k: i64) -> usize {
    let omega = |o: &mut Oracle, k: i64| -> (Vec<Vec<usize>>, Vec<Vec<u64>>) {
        let a = o.allowed(k);
        let allowed_below = o.allowed(k - 1);
        let everything = o.tuples(k - 1);
        let outside: Vec<Vec<usize>> = everything.into_iter().filter(|t| !allowed_below.contains(t)).collect();
        let basis = kernel_mod_p(&boundary_mod_p(&a, &outside), a.len());
        (a, basis)
    };
    let d_rank = |o: &mut Oracle, k: i64| -> usize {
        let (a, om) = omega(o, k);
        let below = o.allowed(k - 1);
        if below.is_empty() || a.is_empty() {
            return 0;
        }
        rank_mod_p(&mul_mod_p(&boundary_mod_p(&a, &below), &om, a.len()))
    };
    let (_, om) = omega(o, k);
    let dim = om.first().map_or(0, Vec::len);
    dim - d_rank(o, k) - d_rank(o, k + 1)
}

/// Rational dimension of `H_k` of all tuples with `L ≤ cap`.
pub fn r_dim(o: &mut Oracle, k: i64, cap: i64) -> usize {
    let here = o.upto(cap, k);
    let d_out = boundary_mod_p(&here, &o.upto(cap, k - 1));
    let d_in = boundary_mod_p(&o.upto(cap, k + 1), &here);
    here.len() - rank_mod_p(&d_out) - rank_mod_p(&d_in)
}

/// Exact rank and determinant over `Q` by Bareiss elimination.
pub fn bareiss(m: &[Vec<i64>]) -> (usize, i128) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let (mut r, mut prev, mut sign) = (0usize, 1i128, 1i128);
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| a[i][c] != 0) else { continue };
        if p != r {
            a.swap(p, r);
            sign = -sign;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        r += 1;
        if r == rows {
            break;
        }
    }
    let det = if rows == cols && r == rows { sign * prev } else { 0 };
    (r, det)
}

/// A random digraph on `n` vertices; each ordered pair is an edge with
/// probability `p`.
pub fn random_digraph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Digraph {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| u != v)
        .filter(|_| rng.gen_bool(p))
        .collect();
    Digraph::from_edges(n, edges).expect("no self-loops")
}
