//! Exact solvers used as ground truth: maximum clique, chromatic number,
//! induced-cycle enumeration and small-graph perfection tests.

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

/// Default node budget for the exact searches.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactStats {
    pub chi: usize,
    pub omega: usize,
    pub node_budget_used: u64,
}

struct CliqueSearch<'a> {
    rows: &'a [BitSet],
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
    aborted: bool,
}

impl CliqueSearch<'_> {
    /// Greedy sequential coloring of `cand`; returns vertices in color-class
    /// order with the color number of each as an upper bound.
    fn color_sort(&self, cand: &BitSet) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::with_capacity(cand.count());
        let mut bounds = Vec::with_capacity(order.capacity());
        let mut uncolored = cand.clone();
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut avail = uncolored.clone();
            while let Some(v) = avail.first() {
                avail.remove(v);
                avail.difference_with(&self.rows[v]);
                uncolored.remove(v);
                order.push(v);
                bounds.push(color);
            }
        }
        (order, bounds)
    }

    fn expand(&mut self, mut cand: BitSet, current: &mut Vec<usize>) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return;
        }
        let (order, bounds) = self.color_sort(&cand);
        for idx in (0..order.len()).rev() {
            if current.len() + bounds[idx] <= self.best.len() || self.aborted {
                return;
            }
            let v = order[idx];
            let next = cand.intersection(&self.rows[v]);
            current.push(v);
            if next.is_empty() {
                if current.len() > self.best.len() {
                    self.best = current.clone();
                }
            } else {
                self.expand(next, current);
            }
            current.pop();
            cand.remove(v);
        }
    }
}

/// A maximum clique of `h` (vertices sorted) found by branch and bound with
/// greedy-coloring bounds.
pub fn maximum_clique(h: &SimpleGraph, budget: u64) -> Result<(Vec<usize>, u64)> {
    let n = h.n();
    // relabel by non-increasing degree so that bitset scans see hubs first
    let mut perm: Vec<usize> = (0..n).collect();
    perm.sort_by_key(|&v| (std::cmp::Reverse(h.degree(v)), v));
    let mut rank = vec![0; n];
    for (i, &v) in perm.iter().enumerate() {
        rank[v] = i;
    }
    let rows: Vec<BitSet> = perm
        .iter()
        .map(|&v| {
            let mut r = BitSet::new(n);
            h.neighbors(v).iter().for_each(|&w| r.insert(rank[w]));
            r
        })
        .collect();
    let mut search = CliqueSearch {
        rows: &rows,
        best: Vec::new(),
        nodes: 0,
        budget,
        aborted: false,
    };
    if n > 0 {
        search.expand(BitSet::full(n), &mut Vec::new());
    }
    if search.aborted {
        return Err(Error::BudgetExceeded {
            budget,
            lower: search.best.len(),
            upper: n,
        });
    }
    let mut clique: Vec<usize> = search.best.iter().map(|&i| perm[i]).collect();
    clique.sort_unstable();
    Ok((clique, search.nodes))
}

/// Exact clique number.
pub fn exact_clique(h: &SimpleGraph, budget: u64) -> Result<usize> {
    maximum_clique(h, budget).map(|(c, _)| c.len())
}

/// All maximal cliques (Bron-Kerbosch with pivoting), each sorted.
pub fn maximal_cliques(h: &SimpleGraph) -> Vec<Vec<usize>> {
    fn bk(h: &SimpleGraph, r: &mut Vec<usize>, mut p: BitSet, mut x: BitSet, out: &mut Vec<Vec<usize>>) {
        if p.is_empty() && x.is_empty() {
            let mut c = r.clone();
            c.sort_unstable();
            out.push(c);
            return;
        }
        let pivot = p
            .iter()
            .chain(x.iter())
            .max_by_key(|&u| p.intersection(h.row(u)).count())
            .unwrap();
        let mut cand = p.clone();
        cand.difference_with(h.row(pivot));
        for v in cand.iter() {
            r.push(v);
            bk(h, r, p.intersection(h.row(v)), x.intersection(h.row(v)), out);
            r.pop();
            p.remove(v);
            x.insert(v);
        }
    }
    let mut out = Vec::new();
    if h.n() > 0 {
        bk(h, &mut Vec::new(), BitSet::full(h.n()), BitSet::new(h.n()), &mut out);
    }
    out.sort();
    out
}

struct ColorSearch<'a> {
    h: &'a SimpleGraph,
    colors: Vec<usize>,
    /// `sat[v][c]`: number of neighbors of `v` currently colored `c`.
    sat: Vec<Vec<u32>>,
    sat_deg: Vec<usize>,
    best: usize,
    best_coloring: Vec<usize>,
    lower: usize,
    nodes: u64,
    budget: u64,
    aborted: bool,
}

impl ColorSearch<'_> {
    fn assign(&mut self, v: usize, c: usize) {
        self.colors[v] = c;
        for &w in self.h.neighbors(v) {
            if self.sat[w][c] == 0 {
                self.sat_deg[w] += 1;
            }
            self.sat[w][c] += 1;
        }
    }

    fn unassign(&mut self, v: usize) {
        let c = self.colors[v];
        self.colors[v] = 0;
        for &w in self.h.neighbors(v) {
            self.sat[w][c] -= 1;
            if self.sat[w][c] == 0 {
                self.sat_deg[w] -= 1;
            }
        }
    }

    fn pick(&self) -> Option<usize> {
        (0..self.colors.len())
            .filter(|&v| self.colors[v] == 0)
            .max_by_key(|&v| {
                let free_deg = self.h.neighbors(v).iter().filter(|&&w| self.colors[w] == 0).count();
                (self.sat_deg[v], free_deg, std::cmp::Reverse(v))
            })
    }

    fn search(&mut self, used: usize) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return;
        }
        let Some(v) = self.pick() else {
            if used < self.best {
                self.best = used;
                self.best_coloring = self.colors.clone();
            }
            return;
        };
        let limit = (used + 1).min(self.best - 1);
        for c in 1..=limit {
            if self.sat[v][c] != 0 {
                continue;
            }
            self.assign(v, c);
            self.search(used.max(c));
            self.unassign(v);
            if self.aborted || self.best <= self.lower {
                return;
            }
        }
    }
}

/// DSATUR coloring used as the initial upper bound; returns colors `1..`.
pub fn dsatur_coloring(h: &SimpleGraph) -> Vec<usize> {
    let n = h.n();
    let mut colors = vec![0usize; n];
    let mut seen: Vec<BitSet> = vec![BitSet::new(n + 2); n];
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| colors[v] == 0)
            .max_by_key(|&v| (seen[v].count(), h.degree(v), std::cmp::Reverse(v)))
            .unwrap();
        let c = (1..).find(|&c| !seen[v].contains(c)).unwrap();
        colors[v] = c;
        for &w in h.neighbors(v) {
            seen[w].insert(c);
        }
    }
    colors
}

/// Exact chromatic number with an optimal coloring (colors `1..=chi`).
///
/// Branch and bound in saturation order; a maximum clique is precolored
/// `1..=omega`, which also serves as the lower bound.
pub fn optimal_coloring(h: &SimpleGraph, budget: u64) -> Result<(Vec<usize>, ExactStats)> {
    let n = h.n();
    if n == 0 {
        return Ok((Vec::new(), ExactStats { chi: 0, omega: 0, node_budget_used: 0 }));
    }
    let (clique, clique_nodes) = maximum_clique(h, budget)?;
    let omega = clique.len();
    let heuristic = dsatur_coloring(h);
    let upper = heuristic.iter().copied().max().unwrap_or(0);
    if upper == omega {
        return Ok((heuristic, ExactStats { chi: omega, omega, node_budget_used: clique_nodes }));
    }
    let mut s = ColorSearch {
        h,
        colors: vec![0; n],
        sat: vec![vec![0; upper + 2]; n],
        sat_deg: vec![0; n],
        best: upper,
        best_coloring: heuristic,
        lower: omega,
        nodes: clique_nodes,
        budget,
        aborted: false,
    };
    for (i, &v) in clique.iter().enumerate() {
        s.assign(v, i + 1);
    }
    s.search(omega);
    if s.aborted {
        return Err(Error::BudgetExceeded { budget, lower: omega, upper: s.best });
    }
    Ok((
        s.best_coloring,
        ExactStats { chi: s.best, omega, node_budget_used: s.nodes },
    ))
}

/// Exact chromatic number.
pub fn exact_chromatic(h: &SimpleGraph, budget: u64) -> Result<usize> {
    optimal_coloring(h, budget).map(|(_, s)| s.chi)
}

/// Exact `chi` and `omega` together.
pub fn exact_stats(h: &SimpleGraph, budget: u64) -> Result<ExactStats> {
    optimal_coloring(h, budget).map(|(_, s)| s)
}

/// Walks every induced cycle once, in canonical form: the smallest vertex
/// first, and its smaller cycle-neighbor second. `visit` returns `false` to stop.
fn walk_induced_cycles(
    h: &SimpleGraph,
    min_len: usize,
    max_len: usize,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    fn extend(
        h: &SimpleGraph,
        path: &mut Vec<usize>,
        blocked: &mut [u32],
        min_len: usize,
        max_len: usize,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let s = path[0];
        let last = *path.last().unwrap();
        for &w in h.neighbors(last) {
            if w <= s || blocked[w] > 0 {
                continue;
            }
            if path.len() >= 2 && h.has_edge(w, s) {
                let len = path.len() + 1;
                if path[1] < w && len >= min_len && len <= max_len {
                    path.push(w);
                    let go_on = visit(path);
                    path.pop();
                    if !go_on {
                        return false;
                    }
                }
                continue;
            }
            if path.len() + 2 > max_len {
                continue;
            }
            // once `last` is interior, its neighbors may not join the path
            let interior = path.len() >= 2;
            if interior {
                h.neighbors(last).iter().for_each(|&x| blocked[x] += 1);
            }
            blocked[w] += 1;
            path.push(w);
            let ok = extend(h, path, blocked, min_len, max_len, visit);
            path.pop();
            blocked[w] -= 1;
            if interior {
                h.neighbors(last).iter().for_each(|&x| blocked[x] -= 1);
            }
            if !ok {
                return false;
            }
        }
        true
    }

    if max_len < 3 {
        return true;
    }
    let mut blocked = vec![0u32; h.n()];
    for s in 0..h.n() {
        if !extend(h, &mut vec![s], &mut blocked, min_len, max_len, visit) {
            return false;
        }
    }
    true
}

/// All induced cycles with `min_len <= length <= max_len`, each once, in
/// canonical form (lexicographically least rotation/reflection).
pub fn find_induced_cycles(h: &SimpleGraph, min_len: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    walk_induced_cycles(h, min_len.max(3), max_len, &mut |c| {
        out.push(c.to_vec());
        true
    });
    out.sort();
    out
}

/// First induced cycle whose length satisfies `pred`, if any.
pub fn find_induced_cycle_where(
    h: &SimpleGraph,
    min_len: usize,
    max_len: usize,
    pred: impl Fn(usize) -> bool,
) -> Option<Vec<usize>> {
    let mut found = None;
    walk_induced_cycles(h, min_len.max(3), max_len, &mut |c| {
        if pred(c.len()) {
            found = Some(c.to_vec());
            false
        } else {
            true
        }
    });
    found
}

/// Some odd hole (induced odd cycle of length at least 5).
pub fn find_odd_hole(h: &SimpleGraph) -> Option<Vec<usize>> {
    find_induced_cycle_where(h, 5, h.n(), |k| k % 2 == 1)
}

/// `true` iff the complement has an induced odd cycle of length at least 7.
pub fn has_odd_antihole_gt5(h: &SimpleGraph) -> bool {
    find_induced_cycle_where(&h.complement(), 7, h.n(), |k| k % 2 == 1).is_some()
}

/// Some antihole of length exactly `k`, given as the cyclic order of its complement.
pub fn find_antihole(h: &SimpleGraph, k: usize) -> Option<Vec<usize>> {
    find_induced_cycle_where(&h.complement(), k, k, |_| true)
}

/// Perfection via forbidden odd holes and odd antiholes; exponential, small `n` only.
pub fn is_perfect_small(h: &SimpleGraph) -> bool {
    find_odd_hole(h).is_none() && find_odd_hole(&h.complement()).is_none()
}

/// No hole of any length.
pub fn is_chordal_small(h: &SimpleGraph) -> bool {
    find_induced_cycle_where(h, 4, h.n(), |_| true).is_none()
}

/// `true` iff `h` has no induced cycle of exactly length `k`.
pub fn is_ck_free(h: &SimpleGraph, k: usize) -> bool {
    find_induced_cycle_where(h, k, k, |_| true).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn petersen() -> SimpleGraph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        SimpleGraph::new(10, &e).unwrap()
    }

    /// Naive checker: every vertex subset inducing a connected 2-regular graph.
    fn naive_induced_cycles(h: &SimpleGraph, min_len: usize, max_len: usize) -> Vec<Vec<usize>> {
        let n = h.n();
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            let vs: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            if vs.len() < min_len.max(3) || vs.len() > max_len {
                continue;
            }
            let deg_ok = vs
                .iter()
                .all(|&v| vs.iter().filter(|&&w| h.has_edge(v, w)).count() == 2);
            if !deg_ok {
                continue;
            }
            // walk the cycle from the smallest vertex, towards its smaller neighbor
            let s = vs[0];
            let nb: Vec<usize> = vs.iter().copied().filter(|&w| h.has_edge(s, w)).collect();
            let mut cyc = vec![s, nb[0]];
            while cyc.len() < vs.len() {
                let last = cyc[cyc.len() - 1];
                let prev = cyc[cyc.len() - 2];
                let next = vs
                    .iter()
                    .copied()
                    .find(|&w| w != prev && h.has_edge(last, w))
                    .unwrap();
                if next == s {
                    break;
                }
                cyc.push(next);
            }
            if cyc.len() == vs.len() {
                out.push(cyc);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn clique_examples() {
        assert_eq!(exact_clique(&SimpleGraph::empty(4), DEFAULT_BUDGET).unwrap(), 1);
        assert_eq!(exact_clique(&SimpleGraph::empty(0), DEFAULT_BUDGET).unwrap(), 0);
        assert_eq!(exact_clique(&SimpleGraph::complete(6), DEFAULT_BUDGET).unwrap(), 6);
        assert_eq!(exact_clique(&petersen(), DEFAULT_BUDGET).unwrap(), 2);
        let (c, _) = maximum_clique(&SimpleGraph::cycle(3), DEFAULT_BUDGET).unwrap();
        assert_eq!(c, vec![0, 1, 2]);
    }

    #[test]
    fn maximal_clique_examples() {
        assert_eq!(maximal_cliques(&SimpleGraph::cycle(4)), vec![vec![0, 1], vec![0, 3], vec![1, 2], vec![2, 3]]);
        assert_eq!(maximal_cliques(&SimpleGraph::complete(3)), vec![vec![0, 1, 2]]);
        assert_eq!(maximal_cliques(&SimpleGraph::empty(2)), vec![vec![0], vec![1]]);
        assert_eq!(maximal_cliques(&petersen()).len(), 15);
    }

    #[test]
    fn chromatic_examples() {
        assert_eq!(exact_chromatic(&SimpleGraph::cycle(5), DEFAULT_BUDGET).unwrap(), 3);
        assert_eq!(exact_chromatic(&SimpleGraph::cycle(6), DEFAULT_BUDGET).unwrap(), 2);
        assert_eq!(exact_chromatic(&petersen(), DEFAULT_BUDGET).unwrap(), 3);
        assert_eq!(exact_chromatic(&SimpleGraph::complete(5), DEFAULT_BUDGET).unwrap(), 5);
        assert_eq!(exact_chromatic(&SimpleGraph::empty(0), DEFAULT_BUDGET).unwrap(), 0);
        // complement of C7 needs 4 colors while its clique number is 3
        let s = exact_stats(&SimpleGraph::cycle(7).complement(), DEFAULT_BUDGET).unwrap();
        assert_eq!((s.omega, s.chi), (3, 4));
    }

    #[test]
    fn optimal_coloring_is_proper() {
        let h = SimpleGraph::cycle(7).complement();
        let (c, stats) = optimal_coloring(&h, DEFAULT_BUDGET).unwrap();
        assert!(h.edges().all(|(u, v)| c[u] != c[v]));
        assert_eq!(c.iter().copied().max().unwrap(), stats.chi);
    }

    #[test]
    fn budget_is_enforced() {
        let h = SimpleGraph::cycle(7).complement();
        assert!(matches!(exact_chromatic(&h, 2), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn cycle_enumeration_examples() {
        assert_eq!(find_induced_cycles(&SimpleGraph::cycle(6), 3, 10), vec![vec![0, 1, 2, 3, 4, 5]]);
        assert!(find_induced_cycles(&SimpleGraph::complete(5), 4, 5).is_empty());
        assert_eq!(find_induced_cycles(&SimpleGraph::complete(4), 3, 3).len(), 4);
        assert!(find_induced_cycles(&SimpleGraph::path(5), 3, 5).is_empty());
    }

    #[test]
    fn cycle_enumeration_matches_naive() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut graphs = vec![petersen(), SimpleGraph::cycle(7).complement()];
        for _ in 0..40 {
            let n = rng.gen_range(3..=10);
            let p = rng.gen_range(0.2..0.7);
            let mut e = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        e.push((u, v));
                    }
                }
            }
            graphs.push(SimpleGraph::new(n, &e).unwrap());
        }
        for h in &graphs {
            assert_eq!(find_induced_cycles(h, 3, h.n()), naive_induced_cycles(h, 3, h.n()));
            assert_eq!(find_induced_cycles(h, 5, 6), naive_induced_cycles(h, 5, 6));
        }
    }

    #[test]
    fn perfection_examples() {
        assert!(!is_perfect_small(&SimpleGraph::cycle(5)));
        assert!(is_perfect_small(&SimpleGraph::cycle(6)));
        assert!(!is_perfect_small(&SimpleGraph::cycle(7).complement()));
        assert!(has_odd_antihole_gt5(&SimpleGraph::cycle(7).complement()));
        assert!(!has_odd_antihole_gt5(&SimpleGraph::cycle(7)));
        assert!(is_chordal_small(&SimpleGraph::complete(4)));
        assert!(!is_chordal_small(&SimpleGraph::cycle(4)));
        assert!(find_antihole(&SimpleGraph::cycle(6).complement(), 6).is_some());
    }

    #[test]
    fn bipartite_graphs_are_perfect() {
        let g = crate::graph::BipartiteGraph::new(3, 4, &[(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 3), (2, 0)])
            .unwrap();
        assert!(is_perfect_small(&g.to_simple()));
    }
}
