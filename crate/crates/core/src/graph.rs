//! Graph model: bipartite inputs, simple graphs, squares and half-squares.
//!
//! Vertices of a [`BipartiteGraph`] are addressed by side and index. Whenever
//! a bipartite graph is flattened into a [`SimpleGraph`] (its square, or the
//! graph itself) the global order is `A_0..A_{n_a-1}, B_0..B_{n_b-1}`.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::A => f.write_str("a"),
            Side::B => f.write_str("b"),
        }
    }
}

/// A vertex of a bipartite graph, addressed as `(side, index)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexRef {
    pub side: Side,
    pub index: usize,
}

impl VertexRef {
    pub fn a(index: usize) -> Self {
        VertexRef { side: Side::A, index }
    }

    pub fn b(index: usize) -> Self {
        VertexRef { side: Side::B, index }
    }
}

impl fmt::Display for VertexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.side, self.index)
    }
}

impl std::str::FromStr for VertexRef {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (side, rest) = match s.as_bytes().first() {
            Some(b'a') | Some(b'A') => (Side::A, &s[1..]),
            Some(b'b') | Some(b'B') => (Side::B, &s[1..]),
            _ => return Err(format!("bad vertex `{s}`")),
        };
        let index = rest.parse().map_err(|_| format!("bad vertex `{s}`"))?;
        Ok(VertexRef { side, index })
    }
}

/// Bipartite graph with sides `A` and `B`; edges only join `A` to `B`.
///
/// Neighbor lists are kept strictly sorted and duplicate-free for both sides.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BipartiteGraph {
    n_a: usize,
    n_b: usize,
    adj: Vec<Vec<usize>>,
    b_adj: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    /// Builds a graph from `(a, b)` pairs. Duplicate edges are merged.
    pub fn new(n_a: usize, n_b: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n_a];
        for &(a, b) in edges {
            if a >= n_a {
                return Err(Error::IndexOutOfRange { side: Side::A, index: a, len: n_a });
            }
            if b >= n_b {
                return Err(Error::IndexOutOfRange { side: Side::B, index: b, len: n_b });
            }
            adj[a].push(b);
        }
        Ok(Self::from_adjacency_unchecked(n_b, adj))
    }

    /// Builds a graph from per-`A` neighbor lists (any order, duplicates allowed).
    pub fn from_neighborhoods(n_b: usize, neighborhoods: Vec<Vec<usize>>) -> Result<Self> {
        for (a, row) in neighborhoods.iter().enumerate() {
            if let Some(&b) = row.iter().find(|&&b| b >= n_b) {
                let _ = a;
                return Err(Error::IndexOutOfRange { side: Side::B, index: b, len: n_b });
            }
        }
        Ok(Self::from_adjacency_unchecked(n_b, neighborhoods))
    }

    fn from_adjacency_unchecked(n_b: usize, mut adj: Vec<Vec<usize>>) -> Self {
        let n_a = adj.len();
        let mut b_adj = vec![Vec::new(); n_b];
        for (a, row) in adj.iter_mut().enumerate() {
            row.sort_unstable();
            row.dedup();
            for &b in row.iter() {
                b_adj[b].push(a);
            }
        }
        BipartiteGraph { n_a, n_b, adj, b_adj }
    }

    /// `K_{n,m}`.
    pub fn complete(n_a: usize, n_b: usize) -> Self {
        Self::from_adjacency_unchecked(n_b, vec![(0..n_b).collect(); n_a])
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }

    pub fn side_len(&self, side: Side) -> usize {
        match side {
            Side::A => self.n_a,
            Side::B => self.n_b,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.n_a + self.n_b
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    /// Sorted `B`-neighbors of `A`-vertex `a`.
    pub fn neighbors_a(&self, a: usize) -> &[usize] {
        &self.adj[a]
    }

    /// Sorted `A`-neighbors of `B`-vertex `b`.
    pub fn neighbors_b(&self, b: usize) -> &[usize] {
        &self.b_adj[b]
    }

    pub fn neighbors(&self, v: VertexRef) -> &[usize] {
        match v.side {
            Side::A => &self.adj[v.index],
            Side::B => &self.b_adj[v.index],
        }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj.get(a).is_some_and(|row| row.binary_search(&b).is_ok())
    }

    /// All edges as `(a, b)`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, row)| row.iter().map(move |&b| (a, b)))
    }

    pub fn max_degree(&self) -> usize {
        let da = self.adj.iter().map(Vec::len).max().unwrap_or(0);
        let db = self.b_adj.iter().map(Vec::len).max().unwrap_or(0);
        da.max(db)
    }

    /// Position of `v` in the global order `A.., B..`.
    pub fn global_index(&self, v: VertexRef) -> usize {
        match v.side {
            Side::A => v.index,
            Side::B => self.n_a + v.index,
        }
    }

    pub fn vertex_ref(&self, global: usize) -> VertexRef {
        if global < self.n_a {
            VertexRef::a(global)
        } else {
            VertexRef::b(global - self.n_a)
        }
    }

    /// Swaps the roles of the two sides.
    pub fn transpose(&self) -> BipartiteGraph {
        BipartiteGraph {
            n_a: self.n_b,
            n_b: self.n_a,
            adj: self.b_adj.clone(),
            b_adj: self.adj.clone(),
        }
    }

    /// Relabels `B`: old vertex `b` becomes `perm[b]`.
    pub fn permute_b(&self, perm: &[usize]) -> BipartiteGraph {
        assert_eq!(perm.len(), self.n_b);
        let adj = self
            .adj
            .iter()
            .map(|row| row.iter().map(|&b| perm[b]).collect())
            .collect();
        Self::from_adjacency_unchecked(self.n_b, adj)
    }

    /// Relabels `A`: old vertex `a` becomes `perm[a]`.
    pub fn permute_a(&self, perm: &[usize]) -> BipartiteGraph {
        assert_eq!(perm.len(), self.n_a);
        let mut adj = vec![Vec::new(); self.n_a];
        for (a, row) in self.adj.iter().enumerate() {
            adj[perm[a]] = row.clone();
        }
        Self::from_adjacency_unchecked(self.n_b, adj)
    }

    /// The graph itself as a simple graph in global order.
    pub fn to_simple(&self) -> SimpleGraph {
        let edges: Vec<_> = self.edges().map(|(a, b)| (a, self.n_a + b)).collect();
        SimpleGraph::from_edges_unchecked(self.num_vertices(), &edges)
    }
}

/// Simple undirected graph: symmetric, irreflexive adjacency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<Vec<usize>>,
    rows: Vec<BitSet>,
}

impl SimpleGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::InvalidParameter(format!(
                        "vertex {w} out of range for graph on {n} vertices"
                    )));
                }
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at {u}")));
            }
        }
        Ok(Self::from_edges_unchecked(n, edges))
    }

    pub fn empty(n: usize) -> Self {
        Self::from_edges_unchecked(n, &[])
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Self::from_edges_unchecked(n, &edges)
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges_unchecked(n, &edges)
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges_unchecked(n, &edges)
    }

    pub(crate) fn from_edges_unchecked(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut rows = vec![BitSet::new(n); n];
        for &(u, v) in edges {
            if u != v {
                rows[u].insert(v);
                rows[v].insert(u);
            }
        }
        Self::from_rows(rows)
    }

    pub(crate) fn from_rows(rows: Vec<BitSet>) -> Self {
        let adj = rows.iter().map(|r| r.iter().collect()).collect();
        SimpleGraph { adj, rows }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn row(&self, v: usize) -> &BitSet {
        &self.rows[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &u)| vertices[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    pub fn complement(&self) -> SimpleGraph {
        let n = self.n();
        let rows = (0..n)
            .map(|v| {
                let mut r = BitSet::full(n);
                r.difference_with(&self.rows[v]);
                r.remove(v);
                r
            })
            .collect();
        Self::from_rows(rows)
    }

    /// Subgraph induced by `vertices`; vertex `i` of the result is `vertices[i]`
    /// of `self`, and the returned mapping records exactly that.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> (SimpleGraph, Vec<usize>) {
        let k = vertices.len();
        let mut rows = vec![BitSet::new(k); k];
        for i in 0..k {
            for j in i + 1..k {
                if self.has_edge(vertices[i], vertices[j]) {
                    rows[i].insert(j);
                    rows[j].insert(i);
                }
            }
        }
        (Self::from_rows(rows), vertices.to_vec())
    }

    pub fn girth(&self) -> Girth {
        girth(self)
    }
}

/// Length of a shortest cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    pub fn at_least(self, k: usize) -> bool {
        match self {
            Girth::Finite(g) => g >= k,
            Girth::Infinite => true,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => f.write_str("inf"),
        }
    }
}

/// Exact girth by a BFS from every vertex.
pub fn girth(h: &SimpleGraph) -> Girth {
    let n = h.n();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[root] = 0;
        parent[root] = usize::MAX;
        queue.clear();
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            if 2 * dist[u] + 1 >= best {
                break;
            }
            for &w in h.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    best = best.min(dist[u] + dist[w] + 1);
                }
            }
        }
    }
    if best == usize::MAX {
        Girth::Infinite
    } else {
        Girth::Finite(best)
    }
}

/// The square `G²` on `A ⊎ B` in global order: `u ~ v` iff `1 <= d_G(u, v) <= 2`.
///
/// Cross-side pairs are adjacent in the square exactly when they are adjacent in
/// `g`, since no `A`-`B` pair of a bipartite graph sits at distance two.
pub fn square(g: &BipartiteGraph) -> SimpleGraph {
    let n_a = g.n_a();
    let n = g.num_vertices();
    let mut rows = vec![BitSet::new(n); n];
    for a in 0..n_a {
        for &b in g.neighbors_a(a) {
            rows[a].insert(n_a + b);
            rows[n_a + b].insert(a);
        }
    }
    for a in 0..n_a {
        let nb = g.neighbors_a(a);
        for (i, &b1) in nb.iter().enumerate() {
            for &b2 in &nb[i + 1..] {
                rows[n_a + b1].insert(n_a + b2);
                rows[n_a + b2].insert(n_a + b1);
            }
        }
    }
    for b in 0..g.n_b() {
        let na = g.neighbors_b(b);
        for (i, &a1) in na.iter().enumerate() {
            for &a2 in &na[i + 1..] {
                rows[a1].insert(a2);
                rows[a2].insert(a1);
            }
        }
    }
    SimpleGraph::from_rows(rows)
}

/// `G²[side]`, indexed by position within the side.
pub fn half_square(g: &BipartiteGraph, side: Side) -> SimpleGraph {
    let (n, other) = match side {
        Side::A => (g.n_a(), g.n_b()),
        Side::B => (g.n_b(), g.n_a()),
    };
    let mut rows = vec![BitSet::new(n); n];
    for w in 0..other {
        let nb = match side {
            Side::A => g.neighbors_b(w),
            Side::B => g.neighbors_a(w),
        };
        for (i, &u) in nb.iter().enumerate() {
            for &v in &nb[i + 1..] {
                rows[u].insert(v);
                rows[v].insert(u);
            }
        }
    }
    SimpleGraph::from_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn not_perfect() -> BipartiteGraph {
        // A = {a, v1, v2, v3}, B = {v5, b1, b2, v4}
        BipartiteGraph::new(
            4,
            4,
            &[(0, 0), (0, 1), (0, 2), (0, 3), (1, 0), (1, 1), (2, 1), (2, 2), (3, 2), (3, 3)],
        )
        .unwrap()
    }

    #[test]
    fn build_dedups_and_checks_range() {
        let g = BipartiteGraph::new(1, 1, &[(0, 0)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        let g = BipartiteGraph::new(2, 2, &[(0, 0), (0, 0)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.neighbors_b(0), &[0]);
        assert_eq!(not_perfect().edge_count(), 10);
        assert!(matches!(
            BipartiteGraph::new(1, 1, &[(0, 1)]),
            Err(Error::IndexOutOfRange { side: Side::B, index: 1, len: 1 })
        ));
        assert!(matches!(
            BipartiteGraph::new(1, 1, &[(2, 0)]),
            Err(Error::IndexOutOfRange { side: Side::A, .. })
        ));
    }

    #[test]
    fn square_small_cases() {
        let k11 = BipartiteGraph::complete(1, 1);
        assert_eq!(square(&k11), SimpleGraph::complete(2));
        let k33 = BipartiteGraph::complete(3, 3);
        assert_eq!(square(&k33), SimpleGraph::complete(6));
        // a0 - b0 - a1
        let p = BipartiteGraph::new(2, 1, &[(0, 0), (1, 0)]).unwrap();
        assert_eq!(square(&p), SimpleGraph::complete(3));
    }

    #[test]
    fn half_square_cases() {
        let star = BipartiteGraph::complete(1, 4);
        assert_eq!(half_square(&star, Side::B), SimpleGraph::complete(4));
        let iso = BipartiteGraph::new(3, 2, &[]).unwrap();
        assert_eq!(half_square(&iso, Side::B).edge_count(), 0);

        let hs = half_square(&not_perfect(), Side::A);
        // a adjacent to all; v1-v2, v2-v3; v1-v3 absent
        let expected = SimpleGraph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)]).unwrap();
        assert_eq!(hs, expected);
        assert!(hs.is_clique(&[0, 1, 2]));
    }

    #[test]
    fn girth_cases() {
        assert_eq!(girth(&SimpleGraph::cycle(7)), Girth::Finite(7));
        assert_eq!(girth(&SimpleGraph::path(6)), Girth::Infinite);
        assert_eq!(girth(&SimpleGraph::complete(4)), Girth::Finite(3));
        assert_eq!(girth(&not_perfect().to_simple()), Girth::Finite(4));
        assert_eq!(girth(&SimpleGraph::empty(0)), Girth::Infinite);
    }

    #[test]
    fn degree_and_induced() {
        assert_eq!(BipartiteGraph::complete(3, 3).max_degree(), 3);
        let (k2, map) = SimpleGraph::complete(4).induced_subgraph(&[0, 1]);
        assert_eq!(k2, SimpleGraph::complete(2));
        assert_eq!(map, vec![0, 1]);
        let (p4, map) = SimpleGraph::cycle(5).induced_subgraph(&[1, 2, 3, 4]);
        assert_eq!(p4, SimpleGraph::path(4));
        assert_eq!(map, vec![1, 2, 3, 4]);
    }

    #[test]
    fn complement_of_c5_is_c5() {
        let c = SimpleGraph::cycle(5).complement();
        assert_eq!(c.edge_count(), 5);
        assert!(c.neighbors(0) == [2, 3]);
    }

    #[test]
    fn vertex_ref_roundtrip() {
        let v: VertexRef = "b12".parse().unwrap();
        assert_eq!(v, VertexRef::b(12));
        assert_eq!(v.to_string(), "b12");
        assert!("c1".parse::<VertexRef>().is_err());
    }
}
