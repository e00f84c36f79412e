//! Finite digraphs, the directed path metric, products, line graphs, digraph
//! maps and one-step homotopies.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::ops::Add;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `ℕ ∪ {∞}` (and `-1`, the length of the empty tuple) with absorbing `∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ExtInt {
    Finite(i64),
    Infinite,
}

impl ExtInt {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtInt::Finite(_))
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            ExtInt::Finite(v) => Some(v),
            ExtInt::Infinite => None,
        }
    }
}

impl Add for ExtInt {
    type Output = ExtInt;

    fn add(self, rhs: ExtInt) -> ExtInt {
        match (self, rhs) {
            (ExtInt::Finite(a), ExtInt::Finite(b)) => ExtInt::Finite(a + b),
            _ => ExtInt::Infinite,
        }
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::Finite(v) => write!(f, "{v}"),
            ExtInt::Infinite => f.write_str("inf"),
        }
    }
}

/// A finite digraph with dense vertex ids `0..n` and its directed path metric.
///
/// Immutable once built; the distance matrix is computed at construction.
#[derive(Clone)]
pub struct Digraph {
    names: Vec<String>,
    edges: BTreeSet<(usize, usize)>,
    out: Vec<Vec<usize>>,
    dist: Vec<ExtInt>,
}

impl PartialEq for Digraph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.edges == other.edges
    }
}

impl Eq for Digraph {}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph")
            .field("names", &self.names)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Digraph {
    pub fn new<I>(names: Vec<String>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let n = names.len();
        let mut seen = BTreeSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateVertex(name.clone()));
            }
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            for index in [u, v] {
                if index >= n {
                    return Err(Error::VertexOutOfRange { index, count: n });
                }
            }
            if u == v {
                return Err(Error::SelfLoopEdge(u));
            }
            set.insert((u, v));
        }
        let mut out = vec![Vec::new(); n];
        for &(u, v) in &set {
            out[u].push(v);
        }
        let dist = bfs_distances(&out);
        Ok(Digraph {
            names,
            edges: set,
            out,
            dist,
        })
    }

    /// Vertices named `"0"`, `"1"`, ...
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Digraph::new((0..n).map(|i| i.to_string()).collect(), edges)
    }

    /// Orients each pair in both directions.
    pub fn undirected<I>(names: Vec<String>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let both: Vec<_> = edges.into_iter().flat_map(|(u, v)| [(u, v), (v, u)]).collect();
        Digraph::new(names, both)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u, v))
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    #[inline]
    pub fn dist(&self, u: usize, v: usize) -> ExtInt {
        self.dist[u * self.vertex_count() + v]
    }

    pub fn distance_matrix(&self) -> Vec<Vec<ExtInt>> {
        let n = self.vertex_count();
        (0..n).map(|u| (0..n).map(|v| self.dist(u, v)).collect()).collect()
    }

    /// First ordered pair `(u, v)` with no directed path from `u` to `v`.
    pub fn first_infinite_pair(&self) -> Option<(usize, usize)> {
        let n = self.vertex_count();
        (0..n * n)
            .find(|&i| !self.dist[i].is_finite())
            .map(|i| (i / n, i % n))
    }

    /// Largest finite distance, or `∞` when some pair is unreachable.
    pub fn diameter(&self) -> ExtInt {
        self.dist.iter().copied().max().unwrap_or(ExtInt::Finite(0))
    }

    /// The diameter, or [`Error::UnboundedFiltration`] naming an unreachable pair.
    pub fn finite_diameter(&self) -> Result<i64> {
        match self.first_infinite_pair() {
            Some((u, v)) => Err(Error::UnboundedFiltration {
                from: self.names[u].clone(),
                to: self.names[v].clone(),
            }),
            None => Ok(self.diameter().finite().unwrap_or(0)),
        }
    }

    /// Edges `{u, v}` with both orientations present, as `u < v` pairs.
    pub fn symmetric_pairs(&self) -> BTreeSet<(usize, usize)> {
        self.edges
            .iter()
            .filter(|&&(u, v)| u < v && self.has_edge(v, u))
            .copied()
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.edges.iter().all(|&(u, v)| self.has_edge(v, u))
    }

    /// Edge-list text that [`parse_digraph`] reads back to an equal digraph.
    /// Vertices are declared first so ids survive the round trip.
    pub fn to_edge_list(&self) -> String {
        let mut text = String::new();
        for name in &self.names {
            text.push_str(name);
            text.push('\n');
        }
        for &(u, v) in &self.edges {
            text.push_str(&format!("{} {}\n", self.names[u], self.names[v]));
        }
        text
    }
}

fn bfs_distances(out: &[Vec<usize>]) -> Vec<ExtInt> {
    let n = out.len();
    let mut dist = vec![ExtInt::Infinite; n * n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        let row = &mut dist[s * n..(s + 1) * n];
        row[s] = ExtInt::Finite(0);
        queue.clear();
        queue.push_back((s, 0i64));
        while let Some((u, d)) = queue.pop_front() {
            for &v in &out[u] {
                if row[v] == ExtInt::Infinite {
                    row[v] = ExtInt::Finite(d + 1);
                    queue.push_back((v, d + 1));
                }
            }
        }
    }
    dist
}

/// Reads the edge-list format.
///
/// `#` starts a comment, `%undirected` orients every edge both ways, a line
/// `u v` is an edge and a line `u` an isolated vertex. Vertex ids follow first
/// appearance; duplicate edges are merged.
pub fn parse_digraph(text: &str, undirected: bool) -> Result<Digraph> {
    let mut undirected = undirected;
    let mut names: Vec<String> = Vec::new();
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut seen_content = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(directive) = content.strip_prefix('%') {
            match directive.trim() {
                "undirected" if !seen_content => undirected = true,
                "undirected" => {
                    return Err(Error::Parse {
                        line,
                        message: "%undirected must precede all edges".into(),
                    })
                }
                other => {
                    return Err(Error::Parse {
                        line,
                        message: format!("unknown directive `%{other}`"),
                    })
                }
            }
            continue;
        }
        seen_content = true;
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() > 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected `u v` or `u`, found {} tokens", tokens.len()),
            });
        }
        let mut vid = |label: &str| -> Result<usize> {
            if label.contains('|') {
                return Err(Error::Parse {
                    line,
                    message: format!("vertex label `{label}` contains the reserved character `|`"),
                });
            }
            Ok(*ids.entry(label.to_string()).or_insert_with(|| {
                names.push(label.to_string());
                names.len() - 1
            }))
        };
        let u = vid(tokens[0])?;
        if let Some(&second) = tokens.get(1) {
            if second == tokens[0] {
                return Err(Error::SelfLoop {
                    line,
                    vertex: second.to_string(),
                });
            }
            let v = vid(second)?;
            edges.push((u, v));
        }
    }
    if undirected {
        Digraph::undirected(names, edges)
    } else {
        Digraph::new(names, edges)
    }
}

/// `G × H`: vertex `(g, h)` has id `g · |H| + h` and name `"g|h"`.
pub fn cartesian_product(g: &Digraph, h: &Digraph) -> Digraph {
    let nh = h.vertex_count();
    let names = g
        .names
        .iter()
        .flat_map(|a| h.names.iter().map(move |b| format!("{a}|{b}")))
        .collect();
    let mut edges = Vec::new();
    for v in 0..g.vertex_count() {
        for (a, b) in h.edges() {
            edges.push((v * nh + a, v * nh + b));
        }
    }
    for (a, b) in g.edges() {
        for w in 0..nh {
            edges.push((a * nh + w, b * nh + w));
        }
    }
    Digraph::new(names, edges).expect("product of valid digraphs is valid")
}

/// A line graph on `{0, ..., n}`: `orientations[i]` is true for the edge
/// `(i, i+1)` and false for `(i+1, i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineGraphSpec {
    pub orientations: Vec<bool>,
}

impl LineGraphSpec {
    pub fn new(orientations: Vec<bool>) -> Self {
        LineGraphSpec { orientations }
    }

    pub fn len(&self) -> usize {
        self.orientations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orientations.is_empty()
    }
}

pub fn line_graph(spec: &LineGraphSpec) -> Digraph {
    let edges = spec
        .orientations
        .iter()
        .enumerate()
        .map(|(i, &fwd)| if fwd { (i, i + 1) } else { (i + 1, i) });
    Digraph::from_edges(spec.len() + 1, edges).expect("line graphs are valid")
}

/// The interval `I` with the single edge `0 → 1`.
pub fn interval() -> Digraph {
    line_graph(&LineGraphSpec::new(vec![true]))
}

/// A vertex assignment `V(source) → V(target)`. Construction checks shapes
/// only; [`DigraphMap::is_digraph_map`] checks the edge condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigraphMap {
    source: Arc<Digraph>,
    target: Arc<Digraph>,
    assignment: Vec<usize>,
}

impl DigraphMap {
    pub fn new(source: Arc<Digraph>, target: Arc<Digraph>, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != source.vertex_count() {
            return Err(Error::InvalidMap(format!(
                "assignment has {} entries for {} source vertices",
                assignment.len(),
                source.vertex_count()
            )));
        }
        if let Some(&index) = assignment.iter().find(|&&v| v >= target.vertex_count()) {
            return Err(Error::VertexOutOfRange {
                index,
                count: target.vertex_count(),
            });
        }
        Ok(DigraphMap {
            source,
            target,
            assignment,
        })
    }

    /// Like [`DigraphMap::new`], additionally rejecting non-digraph maps.
    pub fn checked(source: Arc<Digraph>, target: Arc<Digraph>, assignment: Vec<usize>) -> Result<Self> {
        let f = DigraphMap::new(source, target, assignment)?;
        f.validate()?;
        Ok(f)
    }

    pub fn identity(g: Arc<Digraph>) -> Self {
        let n = g.vertex_count();
        DigraphMap {
            source: g.clone(),
            target: g,
            assignment: (0..n).collect(),
        }
    }

    pub fn constant(source: Arc<Digraph>, target: Arc<Digraph>, v: usize) -> Result<Self> {
        let n = source.vertex_count();
        DigraphMap::new(source, target, vec![v; n])
    }

    pub fn source(&self) -> &Arc<Digraph> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Digraph> {
        &self.target
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    #[inline]
    pub fn apply(&self, v: usize) -> usize {
        self.assignment[v]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &DigraphMap) -> Result<DigraphMap> {
        if *self.target != *other.source {
            return Err(Error::MismatchedMaps);
        }
        Ok(DigraphMap {
            source: self.source.clone(),
            target: other.target.clone(),
            assignment: self.assignment.iter().map(|&v| other.assignment[v]).collect(),
        })
    }

    pub fn is_digraph_map(&self) -> bool {
        self.validate().is_ok()
    }

    pub fn validate(&self) -> Result<()> {
        for (u, v) in self.source.edges() {
            let (a, b) = (self.apply(u), self.apply(v));
            if a != b && !self.target.has_edge(a, b) {
                return Err(Error::NotADigraphMap {
                    from: u,
                    to: v,
                    image_from: a,
                    image_to: b,
                });
            }
        }
        Ok(())
    }

    fn same_ends(&self, other: &DigraphMap) -> bool {
        *self.source == *other.source && *self.target == *other.target
    }
}

/// `f(x) ⇒= g(x)` for every `x`, or `g(x) ⇒= f(x)` for every `x`, where
/// `a ⇒= b` means `a = b` or `(a, b)` is an edge.
pub fn one_step_homotopic(f: &DigraphMap, g: &DigraphMap) -> Result<bool> {
    if !f.same_ends(g) {
        return Err(Error::MismatchedMaps);
    }
    let t = &f.target;
    let forward = |a: &DigraphMap, b: &DigraphMap| {
        a.assignment
            .iter()
            .zip(&b.assignment)
            .all(|(&x, &y)| x == y || t.has_edge(x, y))
    };
    Ok(forward(f, g) || forward(g, f))
}

/// True iff each consecutive pair in the chain is one-step homotopic.
pub fn homotopy_along_chain(maps: &[DigraphMap]) -> Result<bool> {
    let first = maps.first().ok_or(Error::EmptyChain)?;
    if maps.iter().any(|m| !m.same_ends(first)) {
        return Err(Error::MismatchedMaps);
    }
    for pair in maps.windows(2) {
        if !one_step_homotopic(&pair[0], &pair[1])? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Named families, all doubled: `path_n` (n vertices), `cycle_n`,
/// `complete_n`, `star_n` (a center and n leaves), and `figure1`.
pub mod builtins {
    use super::Digraph;

    fn numbered(n: usize, pairs: Vec<(usize, usize)>) -> Digraph {
        Digraph::undirected((0..n).map(|i| i.to_string()).collect(), pairs).expect("builtin is valid")
    }

    pub fn path(n: usize) -> Digraph {
        numbered(n, (1..n).map(|i| (i - 1, i)).collect())
    }

    pub fn cycle(n: usize) -> Digraph {
        assert!(n >= 3, "cycles need at least three vertices");
        numbered(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
    }

    pub fn complete(n: usize) -> Digraph {
        numbered(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect())
    }

    pub fn star(leaves: usize) -> Digraph {
        numbered(leaves + 1, (1..=leaves).map(|i| (0, i)).collect())
    }

    /// Six vertices `0 1 2 0' 1' 2'` (ids 0..5): a hexagon
    /// `1-0-0'-2'-2-1` with a hub `1'` joined to `1`, `0'` and `2'`.
    pub fn figure1() -> Digraph {
        let names = ["0", "1", "2", "0'", "1'", "2'"].map(String::from).to_vec();
        let (z, o, t, zp, op, tp) = (0, 1, 2, 3, 4, 5);
        let pairs = vec![(o, z), (z, zp), (zp, tp), (tp, t), (t, o), (o, op), (zp, op), (tp, op)];
        Digraph::undirected(names, pairs).expect("builtin is valid")
    }

    /// The retraction `i ↦ i'`, `i' ↦ i'` of [`figure1`] onto the vertices `0' 1' 2'`,
    /// composed with the inclusion back, as an assignment on ids.
    pub fn figure1_retraction() -> Vec<usize> {
        vec![3, 4, 5, 3, 4, 5]
    }

    /// Resolves `path_4`, `cycle_5`, `complete_3`, `star_3`, `figure1`.
    pub fn by_name(name: &str) -> Option<Digraph> {
        if name == "figure1" {
            return Some(figure1());
        }
        let (family, n) = name.rsplit_once('_')?;
        let n: usize = n.parse().ok()?;
        match family {
            "path" if n >= 1 => Some(path(n)),
            "cycle" if n >= 3 => Some(cycle(n)),
            "complete" if n >= 1 => Some(complete(n)),
            "star" => Some(star(n)),
            _ => None,
        }
    }
}
