//! Simple undirected graphs on bitset adjacency, strong products, and exact
//! independence / clique-cover numbers.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::channel::{AlphabetPair, ZeroPattern};

/// Default vertex limit for the exact searches.
pub const DEFAULT_VERTEX_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("graph has {vertices} vertices, above the limit of {limit}")]
    TooLarge { vertices: usize, limit: usize },
    #[error("edge ({0}, {1}) is a self-loop or references a missing vertex")]
    BadEdge(usize, usize),
    #[error("malformed graph text: {0}")]
    Parse(String),
}

/// Fixed-capacity vertex set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        Self { words: vec![0; n.div_ceil(64)] }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    pub fn insert(&mut self, v: usize) {
        self.words[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        self.words[v / 64] &= !(1 << (v % 64));
    }

    pub fn contains(&self, v: usize) -> bool {
        self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + bit)
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    adj: Vec<VertexSet>,
}

impl Graph {
    /// Edgeless graph on vertices labelled `0..n`.
    pub fn empty(n: usize) -> Self {
        Self::with_labels((0..n).map(|i| i.to_string()).collect())
    }

    pub fn with_labels(labels: Vec<String>) -> Self {
        let n = labels.len();
        Self { labels, adj: vec![VertexSet::empty(n); n] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            g.add_edge(u, (u + 1) % n);
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            if u == v || u >= n || v >= n {
                return Err(GraphError::BadEdge(u, v));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "self-loops are not allowed");
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.vertex_count()).flat_map(|u| self.adj[u].iter().filter(move |&v| v > u).map(move |v| (u, v))).collect()
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(i, &u)| set[i + 1..].iter().all(|&v| u != v && !self.has_edge(u, v)))
    }

    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(i, &u)| set[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    pub fn complement(&self) -> Graph {
        let n = self.vertex_count();
        let mut g = Self::with_labels(self.labels.clone());
        for u in 0..n {
            for v in u + 1..n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Adjacency-list JSON form.
    pub fn to_adjacency(&self) -> AdjacencyList {
        AdjacencyList {
            vertices: self.labels.clone(),
            adjacency: self.adj.iter().map(|s| s.iter().collect()).collect(),
        }
    }

    pub fn from_adjacency(list: &AdjacencyList) -> Result<Self, GraphError> {
        let n = list.vertices.len();
        if list.adjacency.len() != n {
            return Err(GraphError::Parse("adjacency length differs from vertex count".into()));
        }
        let mut g = Self::with_labels(list.vertices.clone());
        for (u, nbrs) in list.adjacency.iter().enumerate() {
            for &v in nbrs {
                if u == v || v >= n {
                    return Err(GraphError::BadEdge(u, v));
                }
                g.add_edge(u, v);
            }
        }
        Ok(g)
    }

    /// DIMACS edge format with 1-based vertices.
    pub fn to_dimacs(&self) -> String {
        let edges = self.edges();
        let mut out = format!("p edge {} {}\n", self.vertex_count(), edges.len());
        for (u, v) in edges {
            writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
        }
        out
    }

    pub fn from_dimacs(text: &str) -> Result<Self, GraphError> {
        let mut graph: Option<Graph> = None;
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('c')) {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| s.parse::<usize>().map_err(|_| GraphError::Parse(line.to_string()));
            match fields.as_slice() {
                ["p", "edge" | "col", n, _] => graph = Some(Graph::empty(num(n)?)),
                ["e", u, v] => {
                    let g = graph.as_mut().ok_or_else(|| GraphError::Parse("edge before header".into()))?;
                    let (u, v) = (num(u)?, num(v)?);
                    if u == 0 || v == 0 || u == v || u > g.vertex_count() || v > g.vertex_count() {
                        return Err(GraphError::BadEdge(u, v));
                    }
                    g.add_edge(u - 1, v - 1);
                }
                _ => return Err(GraphError::Parse(line.to_string())),
            }
        }
        graph.ok_or_else(|| GraphError::Parse("missing header".into()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjacencyList {
    pub vertices: Vec<String>,
    pub adjacency: Vec<Vec<usize>>,
}

/// The confusability graph of any channel in `W₀(Ω)`: inputs `u ≠ v` are
/// adjacent iff some output is reachable from both.
pub fn confusability_graph(pattern: &ZeroPattern, alphabets: &AlphabetPair) -> Graph {
    let (nx, ny) = pattern.sizes();
    assert_eq!((nx, ny), alphabets.sizes(), "pattern and alphabets differ");
    let mut g = Graph::with_labels(alphabets.inputs().symbols().to_vec());
    for u in 0..nx {
        for v in u + 1..nx {
            if (0..ny).any(|y| pattern.reachable(u, y) && pattern.reachable(v, y)) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// `G ⊠ H`. Vertex `(u, v)` gets index `u * |H| + v`.
pub fn strong_product(g: &Graph, h: &Graph) -> Graph {
    let (ng, nh) = (g.vertex_count(), h.vertex_count());
    let labels = g.labels.iter().flat_map(|a| h.labels.iter().map(move |b| format!("{a},{b}"))).collect();
    let mut p = Graph::with_labels(labels);
    let close = |gr: &Graph, a: usize, b: usize| a == b || gr.has_edge(a, b);
    for u1 in 0..ng {
        for u2 in 0..nh {
            let a = u1 * nh + u2;
            for v1 in u1..ng {
                if !close(g, u1, v1) {
                    continue;
                }
                for v2 in 0..nh {
                    let b = v1 * nh + v2;
                    if b > a && close(h, u2, v2) {
                        p.add_edge(a, b);
                    }
                }
            }
        }
    }
    p
}

/// `G^⊠n` for `n >= 1`. Vertex index `i` is the base-`|V|` word of its coordinates.
pub fn strong_power(g: &Graph, n: u32) -> Graph {
    assert!(n >= 1, "strong power needs n >= 1");
    (1..n).fold(g.clone(), |acc, _| strong_product(&acc, g))
}

/// A maximum independent set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependentSet {
    pub size: usize,
    pub witness: Vec<usize>,
}

fn check_limit(g: &Graph, limit: usize) -> Result<(), GraphError> {
    if g.vertex_count() > limit {
        return Err(GraphError::TooLarge { vertices: g.vertex_count(), limit });
    }
    Ok(())
}

/// Exact α(G) by branch and bound.
///
/// Branches on a maximum-degree vertex of the remaining subgraph (lowest index
/// on ties); vertices of degree at most one are taken without branching. The
/// bound is a greedy clique cover of the remaining vertices.
pub fn independence_number(g: &Graph, limit: usize) -> Result<IndependentSet, GraphError> {
    check_limit(g, limit)?;
    let n = g.vertex_count();
    let mut search = MisSearch { g, best: Vec::new(), chosen: Vec::new() };
    search.run(VertexSet::full(n));
    let mut witness = search.best;
    witness.sort_unstable();
    Ok(IndependentSet { size: witness.len(), witness })
}

struct MisSearch<'a> {
    g: &'a Graph,
    best: Vec<usize>,
    chosen: Vec<usize>,
}

impl MisSearch<'_> {
    fn run(&mut self, mut cand: VertexSet) {
        let mark = self.chosen.len();
        // Degree <= 1 vertices belong to some maximum independent set.
        loop {
            let forced = cand.iter().find(|&v| self.g.adj[v].intersection_len(&cand) <= 1);
            match forced {
                Some(v) => {
                    self.chosen.push(v);
                    cand.remove(v);
                    cand.difference_with(&self.g.adj[v]);
                }
                None => break,
            }
        }
        if cand.is_empty() {
            if self.chosen.len() > self.best.len() {
                self.best = self.chosen.clone();
            }
        } else if self.chosen.len() + greedy_clique_cover_size(self.g, &cand) > self.best.len() {
            let v = cand
                .iter()
                .map(|v| (self.g.adj[v].intersection_len(&cand), v))
                .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
                .map(|(_, v)| v)
                .unwrap();
            let mut with_v = cand.clone();
            with_v.remove(v);
            with_v.difference_with(&self.g.adj[v]);
            self.chosen.push(v);
            self.run(with_v);
            self.chosen.pop();

            let mut without_v = cand;
            without_v.remove(v);
            self.run(without_v);
        }
        self.chosen.truncate(mark);
    }
}

/// Number of cliques in a greedy cover of `cand` (an upper bound on α of the
/// induced subgraph).
fn greedy_clique_cover_size(g: &Graph, cand: &VertexSet) -> usize {
    let mut commons: Vec<VertexSet> = Vec::new();
    for v in cand.iter() {
        match commons.iter_mut().find(|c| c.contains(v)) {
            Some(c) => c.intersect_with(&g.adj[v]),
            None => {
                let mut c = g.adj[v].clone();
                c.intersect_with(cand);
                commons.push(c);
            }
        }
    }
    commons.len()
}

/// A minimum partition of the vertices into cliques.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueCover {
    pub count: usize,
    pub cliques: Vec<Vec<usize>>,
}

/// Exact clique-cover number θ(G) (the chromatic number of the complement),
/// by DSATUR-style backtracking.
pub fn clique_cover_number(g: &Graph, limit: usize) -> Result<CliqueCover, GraphError> {
    check_limit(g, limit)?;
    let n = g.vertex_count();
    if n == 0 {
        return Ok(CliqueCover { count: 0, cliques: Vec::new() });
    }
    let lower = independence_number(g, limit)?.size;
    let mut search = CoverSearch {
        g,
        assignment: vec![usize::MAX; n],
        cliques: Vec::new(),
        best: greedy_cover(g),
        lower,
    };
    search.run(0);
    let mut cliques = search.best;
    for c in &mut cliques {
        c.sort_unstable();
    }
    cliques.sort();
    Ok(CliqueCover { count: cliques.len(), cliques })
}

fn greedy_cover(g: &Graph) -> Vec<Vec<usize>> {
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    for v in 0..g.vertex_count() {
        match cliques.iter_mut().find(|c| c.iter().all(|&u| g.has_edge(u, v))) {
            Some(c) => c.push(v),
            None => cliques.push(vec![v]),
        }
    }
    cliques
}

struct CoverSearch<'a> {
    g: &'a Graph,
    assignment: Vec<usize>,
    cliques: Vec<Vec<usize>>,
    best: Vec<Vec<usize>>,
    lower: usize,
}

impl CoverSearch<'_> {
    fn joinable(&self, v: usize, k: usize) -> bool {
        self.cliques[k].iter().all(|&u| self.g.has_edge(u, v))
    }

    fn run(&mut self, placed: usize) {
        if self.best.len() <= self.lower || self.cliques.len() >= self.best.len() {
            return;
        }
        let n = self.g.vertex_count();
        if placed == n {
            self.best = self.cliques.clone();
            return;
        }
        // most constrained vertex: fewest joinable cliques, then lowest index
        let v = (0..n)
            .filter(|&v| self.assignment[v] == usize::MAX)
            .min_by_key(|&v| ((0..self.cliques.len()).filter(|&k| self.joinable(v, k)).count(), v))
            .unwrap();
        for k in 0..self.cliques.len() {
            if self.joinable(v, k) {
                self.cliques[k].push(v);
                self.assignment[v] = k;
                self.run(placed + 1);
                self.assignment[v] = usize::MAX;
                self.cliques[k].pop();
            }
        }
        if self.cliques.len() + 1 < self.best.len() {
            self.cliques.push(vec![v]);
            self.assignment[v] = self.cliques.len() - 1;
            self.run(placed + 1);
            self.assignment[v] = usize::MAX;
            self.cliques.pop();
        }
    }
}

/// Vertex limit for canonical forms.
pub const CANONICAL_LIMIT: usize = 10;

/// An isomorphism-invariant form of a small graph: vertex count plus the
/// upper triangle (column by column) of the lexicographically least adjacency
/// matrix over all vertex orders compatible with degree refinement.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub vertices: usize,
    pub bits: String,
}

impl CanonicalForm {
    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::empty(self.vertices);
        let mut bits = self.bits.chars();
        for j in 1..self.vertices {
            for i in 0..j {
                if bits.next() == Some('1') {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }
}

/// Canonical form of a graph with at most [`CANONICAL_LIMIT`] vertices.
pub fn canonical_form(g: &Graph) -> Result<CanonicalForm, GraphError> {
    check_limit(g, CANONICAL_LIMIT)?;
    let n = g.vertex_count();
    let colors = refine_colors(g);
    let mut slots: Vec<usize> = colors.clone();
    slots.sort_unstable();
    let mut search = CanonSearch { g, colors, slots, order: Vec::new(), used: vec![false; n], code: Vec::new(), best: None };
    search.run(false);
    let best = search.best.unwrap_or_default();
    Ok(CanonicalForm { vertices: n, bits: best.iter().map(|&b| if b { '1' } else { '0' }).collect() })
}

/// Iterated degree refinement; colors are ranks of invariant signatures.
fn refine_colors(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut colors = vec![0usize; n];
    let mut classes = 1;
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = g.adj[v].iter().map(|u| colors[u]).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let ranks: BTreeMap<&(usize, Vec<usize>), usize> =
            sigs.iter().collect::<std::collections::BTreeSet<_>>().into_iter().enumerate().map(|(i, s)| (s, i)).collect();
        let next: Vec<usize> = sigs.iter().map(|s| ranks[s]).collect();
        let count = ranks.len();
        colors = next;
        if count == classes {
            return colors;
        }
        classes = count;
    }
}

struct CanonSearch<'a> {
    g: &'a Graph,
    colors: Vec<usize>,
    slots: Vec<usize>,
    order: Vec<usize>,
    used: Vec<bool>,
    code: Vec<bool>,
    best: Option<Vec<bool>>,
}

impl CanonSearch<'_> {
    fn twins(&self, u: usize, v: usize) -> bool {
        (0..self.g.vertex_count()).all(|w| w == u || w == v || self.g.has_edge(u, w) == self.g.has_edge(v, w))
    }

    fn run(&mut self, already_smaller: bool) {
        let k = self.order.len();
        if k == self.g.vertex_count() {
            self.best = Some(self.code.clone());
            return;
        }
        let mut tried: Vec<usize> = Vec::new();
        for v in 0..self.g.vertex_count() {
            if self.used[v] || self.colors[v] != self.slots[k] || tried.iter().any(|&u| self.twins(u, v)) {
                continue;
            }
            tried.push(v);
            let start = self.code.len();
            self.code.extend(self.order.iter().map(|&u| self.g.has_edge(u, v)));
            let smaller = match (&self.best, already_smaller) {
                (_, true) | (None, _) => Some(true),
                (Some(best), false) => match self.code[start..].cmp(&best[start..self.code.len()]) {
                    std::cmp::Ordering::Less => Some(true),
                    std::cmp::Ordering::Equal => Some(false),
                    std::cmp::Ordering::Greater => None,
                },
            };
            if let Some(smaller) = smaller {
                self.order.push(v);
                self.used[v] = true;
                self.run(smaller);
                self.used[v] = false;
                self.order.pop();
            }
            self.code.truncate(start);
        }
    }
}
