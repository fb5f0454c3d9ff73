//! Splitting a graph `G` into the bipartite graph `B_G`: each vertex `u`
//! becomes `u'` in `A` and `u''` in `B`, and `u'v''` is an edge iff `u = v`
//! or `uv` is an edge of `G`.

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{half_square, square, BipartiteGraph, Side, SimpleGraph};
use crate::oracle;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitMap {
    /// `u -> u'`, an index into `A`.
    pub to_prime: Vec<usize>,
    /// `u -> u''`, an index into `B`.
    pub to_double_prime: Vec<usize>,
}

pub fn split_reduction(g: &SimpleGraph) -> (BipartiteGraph, SplitMap) {
    let n = g.n();
    let nbhd = (0..n)
        .map(|u| {
            let mut row: Vec<usize> = g.neighbors(u).to_vec();
            row.push(u);
            row.sort_unstable();
            row
        })
        .collect();
    let b_g = BipartiteGraph::from_neighborhoods(n, nbhd).expect("split neighborhoods are in range");
    let map = SplitMap {
        to_prime: (0..n).collect(),
        to_double_prime: (0..n).collect(),
    };
    (b_g, map)
}

/// The square of a general graph.
pub fn square_of(g: &SimpleGraph) -> SimpleGraph {
    let n = g.n();
    let mut rows: Vec<BitSet> = (0..n).map(|u| g.row(u).clone()).collect();
    for (u, row) in rows.iter_mut().enumerate() {
        for &w in g.neighbors(u) {
            for &x in g.neighbors(w) {
                if x != u {
                    row.insert(x);
                }
            }
        }
    }
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| rows[u].iter().filter(move |&v| v > u).map(move |v| (u, v)))
        .collect();
    SimpleGraph::new(n, &edges).expect("square edges are valid")
}

/// Checks `uv in E(G²)` iff `u'v' in E(B_G²[A])` iff `u''v'' in E(B_G²[B])`
/// through the given bijections.
pub fn check_halfsquare_iso(g: &SimpleGraph, b_g: &BipartiteGraph, map: &SplitMap) -> bool {
    let n = g.n();
    if b_g.n_a() != n || b_g.n_b() != n || map.to_prime.len() != n || map.to_double_prime.len() != n {
        return false;
    }
    let g2 = square_of(g);
    let ha = half_square(b_g, Side::A);
    let hb = half_square(b_g, Side::B);
    (0..n).all(|u| {
        (u + 1..n).all(|v| {
            let e = g2.has_edge(u, v);
            e == ha.has_edge(map.to_prime[u], map.to_prime[v])
                && e == hb.has_edge(map.to_double_prime[u], map.to_double_prime[v])
        })
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sandwich {
    pub omega_g: usize,
    pub omega_bg: usize,
    pub chi_g: usize,
    pub chi_bg: usize,
}

impl Sandwich {
    pub fn holds(&self) -> bool {
        self.omega_g <= self.omega_bg
            && self.omega_bg <= 2 * self.omega_g
            && self.chi_g <= self.chi_bg
            && self.chi_bg <= 2 * self.chi_g
    }
}

/// Exact `omega` and `chi` of `G²` and `B_G²`.
pub fn sandwich_values(g: &SimpleGraph, b_g: &BipartiteGraph, budget: u64) -> Result<Sandwich> {
    let s = oracle::exact_stats(&square_of(g), budget)?;
    let t = oracle::exact_stats(&square(b_g), budget)?;
    Ok(Sandwich { omega_g: s.omega, omega_bg: t.omega, chi_g: s.chi, chi_bg: t.chi })
}

/// `omega(G²) <= omega(B_G²) <= 2 omega(G²)`, and the same for `chi`.
pub fn check_sandwich(g: &SimpleGraph, b_g: &BipartiteGraph, budget: u64) -> Result<bool> {
    sandwich_values(g, b_g, budget).map(|s| s.holds())
}

/// For girth at least 7, `omega(G²) = Delta + 1`.
pub fn check_omega_delta_girth(g: &SimpleGraph, budget: u64) -> Result<bool> {
    if g.n() == 0 || !g.girth().at_least(7) {
        return Err(Error::PreconditionFailed(format!(
            "girth {} on {} vertices; need a nonempty graph of girth at least 7",
            g.girth(),
            g.n()
        )));
    }
    Ok(oracle::exact_clique(&square_of(g), budget)? == g.max_degree() + 1)
}
