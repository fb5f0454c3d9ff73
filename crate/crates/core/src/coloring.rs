//! Coloring the square of a convex bipartite graph with at most
//! `floor(3 omega / 2)` colors.
//!
//! Phase I colors the interval graph `G²[A]` greedily. Phase II absorbs the
//! `B` vertices from the last position to the first; whenever the new vertex
//! sees every palette color, a pivot vertex of `A` is recolored, either
//! directly or through a two-color Kempe swap, until a color frees up.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::convexity::ConvexLayout;
use crate::error::{invariant, Error, Result};
use crate::graph::{square, BipartiteGraph, SimpleGraph};
use crate::oracle::{self, DEFAULT_BUDGET};

/// A coloring of a graph with colors `1..=palette`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub colors: Vec<usize>,
    pub palette: usize,
}

impl Coloring {
    /// Relabels the colors in use to `1..=K`, keeping their relative order.
    pub fn compacted(colors: Vec<usize>) -> Coloring {
        let mut used: Vec<usize> = colors.iter().copied().filter(|&c| c > 0).collect();
        used.sort_unstable();
        used.dedup();
        let colors = colors
            .into_iter()
            .map(|c| used.binary_search(&c).map_or(0, |i| i + 1))
            .collect();
        Coloring { colors, palette: used.len() }
    }
}

/// `true` iff every vertex of `h` has a color in `1..=palette` and no edge is monochromatic.
pub fn verify_coloring(h: &SimpleGraph, c: &Coloring) -> bool {
    c.colors.len() == h.n()
        && c.colors.iter().all(|&x| (1..=c.palette).contains(&x))
        && h.edges().all(|(u, v)| c.colors[u] != c.colors[v])
}

/// Greedy coloring of an interval family in left-endpoint order.
///
/// Missing intervals (isolated vertices) get color 1. The result uses exactly
/// as many colors as the largest set of pairwise intersecting intervals.
pub fn greedy_interval_coloring(intervals: &[Option<(usize, usize)>]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..intervals.len()).filter(|&i| intervals[i].is_some()).collect();
    order.sort_by_key(|&i| (intervals[i].unwrap().0, i));
    let mut colors = vec![1; intervals.len()];
    let mut active: BinaryHeap<Reverse<(usize, usize)>> = BinaryHeap::new();
    let mut free: BinaryHeap<Reverse<usize>> = BinaryHeap::new();
    let mut next = 1;
    for i in order {
        let (l, r) = intervals[i].unwrap();
        while let Some(&Reverse((end, c))) = active.peek() {
            if end >= l {
                break;
            }
            active.pop();
            free.push(Reverse(c));
        }
        let c = match free.pop() {
            Some(Reverse(c)) => c,
            None => {
                next += 1;
                next - 1
            }
        };
        colors[i] = c;
        active.push(Reverse((r, c)));
    }
    colors
}

/// Largest number of intervals sharing a point.
pub fn max_interval_overlap(intervals: &[Option<(usize, usize)>]) -> usize {
    let mut events: Vec<(usize, i32)> = Vec::new();
    for &(l, r) in intervals.iter().flatten() {
        events.push((l, 1));
        events.push((r + 1, -1));
    }
    events.sort();
    let (mut cur, mut best) = (0i32, 0i32);
    for (_, d) in events {
        cur += d;
        best = best.max(cur);
    }
    best as usize
}

/// Exact clique number of `G²`.
pub fn clique_number_square(g: &BipartiteGraph, budget: u64) -> Result<usize> {
    oracle::exact_clique(&square(g), budget)
}

/// `floor(3 omega / 2)`.
pub fn palette_bound(omega: usize) -> usize {
    3 * omega / 2
}

#[derive(Debug, Clone, Copy)]
pub struct ColorOptions {
    /// Use this clique number instead of computing it.
    pub omega: Option<usize>,
    pub check_invariants: bool,
    pub trace: bool,
    pub budget: u64,
}

impl Default for ColorOptions {
    fn default() -> Self {
        ColorOptions {
            omega: None,
            check_invariants: true,
            trace: false,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Vertices in trace events are local indices on their side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TraceEvent {
    Free { b: usize, color: usize },
    Pivot { b: usize, pivot: usize, color: usize },
    Recolor { pivot: usize, from: usize, to: usize },
    Partner { pivot: usize, color: usize, a_prime: usize },
    Swap { x: usize, y: usize, component: Vec<usize>, layers: Vec<usize> },
    Assign { b: usize, color: usize },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorStats {
    /// Vertices colored directly with a free color.
    pub free_steps: usize,
    /// Rounds resolved by recoloring the pivot alone.
    pub pivot_recolors: usize,
    pub kempe_swaps: usize,
    pub max_pivot_rounds: usize,
    pub largest_component: usize,
    /// Swaps after which `a'` was outside `N(b_j)` but the pivot color was still blocked.
    pub partner_outside_blocked: usize,
    /// Swaps after which the next pivot was not `a'`.
    pub next_pivot_not_partner: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ColorReport {
    pub coloring: Coloring,
    pub omega: usize,
    pub bound: usize,
    pub stats: ColorStats,
    pub trace: Vec<TraceEvent>,
}

/// Partial coloring of `H_{j+1}` plus the vertex `b_j` being absorbed.
///
/// Vertices use the global numbering of [`square`]; color 0 means "not yet in
/// the subgraph", so `H_{j+1}` is exactly the set of colored vertices.
pub struct ExtensionState<'a> {
    g: &'a BipartiteGraph,
    layout: &'a ConvexLayout,
    sq: &'a SimpleGraph,
    pub colors: Vec<usize>,
    pub palette: usize,
    position: usize,
    check: bool,
}

impl<'a> ExtensionState<'a> {
    /// State for absorbing the `B` vertex at `position` of the layout.
    pub fn new(
        g: &'a BipartiteGraph,
        layout: &'a ConvexLayout,
        sq: &'a SimpleGraph,
        colors: Vec<usize>,
        palette: usize,
        position: usize,
    ) -> Self {
        ExtensionState { g, layout, sq, colors, palette, position, check: true }
    }

    fn rank(&self, a: usize) -> usize {
        self.layout.a_rank(a)
    }

    /// Global index of `b_j`.
    pub fn current(&self) -> usize {
        self.g.n_a() + self.layout.b_order()[self.position]
    }

    /// `(A_j, B_j)` as global indices.
    pub fn neighborhood(&self) -> (Vec<usize>, Vec<usize>) {
        let n_a = self.g.n_a();
        self.sq
            .neighbors(self.current())
            .iter()
            .filter(|&&v| self.colors[v] > 0)
            .partition(|&&v| v < n_a)
    }

    fn lowest_free(&self, vertices: impl Iterator<Item = usize>, also_skip: usize) -> Option<usize> {
        let mut used = vec![false; self.palette + 1];
        for v in vertices {
            if let Some(u) = used.get_mut(self.colors[v]) {
                *u = true;
            }
        }
        (1..=self.palette).find(|&c| !used[c] && c != also_skip)
    }

    /// Lowest palette color absent from `N_{H_j}(b_j)`.
    pub fn free_color(&self) -> Option<usize> {
        let (a_j, b_j) = self.neighborhood();
        self.lowest_free(a_j.into_iter().chain(b_j), 0)
    }

    /// The `<_A`-least vertex of `A_j` whose color occurs once in `A_j ∪ B_j`.
    pub fn find_pivot(&self) -> Result<usize> {
        let (a_j, b_j) = self.neighborhood();
        let mut count = vec![0usize; self.palette + 1];
        for &v in a_j.iter().chain(&b_j) {
            count[self.colors[v]] += 1;
        }
        a_j.iter()
            .copied()
            .filter(|&a| count[self.colors[a]] == 1)
            .min_by_key(|&a| self.rank(a))
            .ok_or_else(|| invariant(format!("no pivot for b{}", self.current() - self.g.n_a())))
    }

    /// Lowest color free in the closed neighborhood of `pivot` within `H_{j+1}`.
    pub fn pivot_free_color(&self, pivot: usize) -> Option<usize> {
        let nb = self.sq.neighbors(pivot).iter().copied().filter(|&v| self.colors[v] > 0);
        self.lowest_free(nb, self.colors[pivot])
    }

    /// Partner color `y` and the `<_A`-least backward neighbor `a'` holding it.
    pub fn partner_color(&self, pivot: usize) -> Result<(usize, usize)> {
        let n_a = self.g.n_a();
        let x = self.colors[pivot];
        let r = self.rank(pivot);
        let mut in_s = vec![false; self.palette + 1];
        let mut holder: Vec<Option<usize>> = vec![None; self.palette + 1];
        for &v in self.sq.neighbors(pivot) {
            let c = self.colors[v];
            if c == 0 {
                continue;
            }
            if v >= n_a || self.rank(v) > r {
                in_s[c] = true;
            } else if holder[c].is_none_or(|h| self.rank(v) < self.rank(h)) {
                holder[c] = Some(v);
            }
        }
        (1..=self.palette)
            .find(|&c| c != x && !in_s[c] && holder[c].is_some())
            .map(|y| (y, holder[y].unwrap()))
            .ok_or_else(|| invariant(format!("no partner color for pivot a{pivot}")))
    }

    /// Swaps `x` and `y` on the Kempe component of `pivot` in `H_{j+1}`.
    ///
    /// Returns the component in BFS order with the layer of each vertex.
    pub fn kempe_swap(&mut self, pivot: usize, x: usize, y: usize) -> Result<(Vec<usize>, Vec<usize>)> {
        let n = self.colors.len();
        let mut layer = vec![usize::MAX; n];
        let mut order = vec![pivot];
        layer[pivot] = 0;
        let mut queue = VecDeque::from([pivot]);
        while let Some(u) = queue.pop_front() {
            for &w in self.sq.neighbors(u) {
                let c = self.colors[w];
                if (c == x || c == y) && layer[w] == usize::MAX {
                    layer[w] = layer[u] + 1;
                    order.push(w);
                    queue.push_back(w);
                }
            }
        }
        if self.check {
            self.check_component(&order, &layer)?;
        }
        for &v in &order {
            self.colors[v] = if self.colors[v] == x { y } else { x };
        }
        let layers = order.iter().map(|&v| layer[v]).collect();
        Ok((order, layers))
    }

    fn check_component(&self, order: &[usize], layer: &[usize]) -> Result<()> {
        let n_a = self.g.n_a();
        for &v in order {
            if v >= n_a {
                return Err(invariant(format!(
                    "Kempe component reaches b{}",
                    v - n_a
                )));
            }
            for &w in self.sq.neighbors(v) {
                if layer[w] == layer[v] + 1 && self.rank(w) >= self.rank(v) {
                    return Err(invariant(format!(
                        "Kempe layer {} vertex a{w} not below a{v}",
                        layer[w]
                    )));
                }
            }
            if layer[v] >= 2
                && self
                    .g
                    .neighbors_a(v)
                    .iter()
                    .any(|&b| self.layout.b_position(b) >= self.position)
            {
                return Err(invariant(format!(
                    "Kempe layer {} vertex a{v} has a neighbor in B",
                    layer[v]
                )));
            }
        }
        Ok(())
    }

    fn assign(&mut self, color: usize) -> Result<()> {
        let b = self.current();
        if self.check {
            if let Some(&w) = self.sq.neighbors(b).iter().find(|&&w| self.colors[w] == color) {
                return Err(invariant(format!("b{} and vertex {w} share color {color}", b - self.g.n_a())));
            }
        }
        self.colors[b] = color;
        Ok(())
    }

    /// Colors `b_j`, recoloring `H_{j+1}` as needed.
    pub fn absorb(&mut self, stats: &mut ColorStats, trace: &mut Option<Vec<TraceEvent>>) -> Result<()> {
        let n_a = self.g.n_a();
        let b_local = self.current() - n_a;
        let mut emit = |e: TraceEvent| {
            if let Some(t) = trace.as_mut() {
                t.push(e)
            }
        };
        if let Some(c) = self.free_color() {
            stats.free_steps += 1;
            emit(TraceEvent::Free { b: b_local, color: c });
            return self.assign(c);
        }
        let (a_j, _) = self.neighborhood();
        let mut pivot = self.find_pivot()?;
        let mut rounds = 0;
        loop {
            rounds += 1;
            stats.max_pivot_rounds = stats.max_pivot_rounds.max(rounds);
            if rounds > a_j.len() + 1 {
                return Err(invariant(format!("pivot loop for b{b_local} did not terminate")));
            }
            let x = self.colors[pivot];
            emit(TraceEvent::Pivot { b: b_local, pivot, color: x });
            if let Some(z) = self.pivot_free_color(pivot) {
                self.colors[pivot] = z;
                stats.pivot_recolors += 1;
                emit(TraceEvent::Recolor { pivot, from: x, to: z });
                emit(TraceEvent::Assign { b: b_local, color: x });
                return self.assign(x);
            }
            let (y, a_prime) = self.partner_color(pivot)?;
            emit(TraceEvent::Partner { pivot, color: y, a_prime });
            let (component, layers) = self.kempe_swap(pivot, x, y)?;
            stats.kempe_swaps += 1;
            stats.largest_component = stats.largest_component.max(component.len());
            emit(TraceEvent::Swap { x, y, component, layers });
            let partner_inside = a_j.contains(&a_prime);
            if let Some(c) = self.free_color() {
                if self.check && c != x {
                    return Err(invariant(format!("unexpected free color {c} after swap")));
                }
                emit(TraceEvent::Assign { b: b_local, color: c });
                return self.assign(c);
            }
            if !partner_inside {
                stats.partner_outside_blocked += 1;
            }
            let next = self.find_pivot()?;
            if self.check && self.rank(next) >= self.rank(pivot) {
                return Err(invariant(format!(
                    "pivot did not decrease: a{next} after a{pivot}"
                )));
            }
            if next != a_prime {
                stats.next_pivot_not_partner += 1;
            }
            pivot = next;
        }
    }
}

/// Colors `G²` with at most `floor(3 omega / 2)` colors.
///
/// The returned palette counts the colors actually used.
pub fn color_square_convex(
    g: &BipartiteGraph,
    layout: &ConvexLayout,
    opts: &ColorOptions,
) -> Result<ColorReport> {
    if layout.b_order().len() != g.n_b() || layout.a_order().len() != g.n_a() {
        return Err(Error::LayoutMismatch("layout sizes differ from the graph".into()));
    }
    let sq = square(g);
    let omega = match opts.omega {
        Some(w) => w,
        None => oracle::exact_clique(&sq, opts.budget)?,
    };
    let bound = palette_bound(omega);
    let n_a = g.n_a();
    let mut colors = vec![0; g.num_vertices()];
    let phase_one = greedy_interval_coloring(layout.intervals());
    colors[..n_a].copy_from_slice(&phase_one);
    let used = phase_one.iter().copied().max().unwrap_or(0);
    if opts.check_invariants && n_a > 0 {
        let clique_a = max_interval_overlap(layout.intervals()).max(1);
        if used != clique_a || used > omega.max(1) {
            return Err(invariant(format!(
                "phase I used {used} colors for an interval clique of {clique_a} (omega {omega})"
            )));
        }
    }
    let mut stats = ColorStats::default();
    let mut trace = opts.trace.then(Vec::new);
    let mut state = ExtensionState {
        g,
        layout,
        sq: &sq,
        colors,
        palette: bound.max(used),
        position: 0,
        check: opts.check_invariants,
    };
    for p in (0..g.n_b()).rev() {
        state.position = p;
        if opts.check_invariants {
            let (a_j, b_j) = state.neighborhood();
            if a_j.len() + 1 > omega || !b_j.is_empty() && b_j.len() + 2 > omega {
                return Err(invariant(format!(
                    "|A_j| = {}, |B_j| = {} exceed the clique bounds for omega {omega}",
                    a_j.len(),
                    b_j.len()
                )));
            }
        }
        state.absorb(&mut stats, &mut trace)?;
    }
    let coloring = Coloring::compacted(state.colors);
    if opts.check_invariants && (coloring.palette > bound.max(1) && g.num_vertices() > 0 || !verify_coloring(&sq, &coloring)) {
        return Err(invariant(format!(
            "final coloring uses {} colors or is improper (bound {bound})",
            coloring.palette
        )));
    }
    Ok(ColorReport {
        coloring,
        omega,
        bound,
        stats,
        trace: trace.unwrap_or_default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convexity::recognize_convex;

    fn layout(g: &BipartiteGraph) -> ConvexLayout {
        ConvexLayout::from_b_order(g, (0..g.n_b()).collect()).unwrap()
    }

    #[test]
    fn greedy_examples() {
        assert_eq!(greedy_interval_coloring(&[Some((0, 0)), Some((1, 1)), Some((2, 2))]), vec![1, 1, 1]);
        assert_eq!(greedy_interval_coloring(&[Some((0, 5)), Some((1, 4)), Some((2, 3))]), vec![1, 2, 3]);
        // A side of the imperfect figure: a spans everything, v1..v3 overlap pairwise in a chain
        let fig = [Some((0, 3)), Some((0, 1)), Some((1, 2)), Some((2, 3))];
        let c = greedy_interval_coloring(&fig);
        assert_eq!(c.iter().max(), Some(&3));
        assert_eq!(max_interval_overlap(&fig), 3);
        assert_eq!(greedy_interval_coloring(&[None, Some((0, 0))]), vec![1, 1]);
    }

    #[test]
    fn compaction_and_verification() {
        let c = Coloring::compacted(vec![5, 2, 5, 9]);
        assert_eq!(c, Coloring { colors: vec![2, 1, 2, 3], palette: 3 });
        let c4 = SimpleGraph::cycle(4);
        assert!(verify_coloring(&c4, &Coloring { colors: vec![1, 2, 1, 2], palette: 2 }));
        assert!(!verify_coloring(&c4, &Coloring { colors: vec![1, 1, 2, 2], palette: 2 }));
        assert!(!verify_coloring(&c4, &Coloring { colors: vec![1, 2, 1, 3], palette: 2 }));
    }

    #[test]
    fn complete_bipartite_uses_clique_size() {
        let g = BipartiteGraph::complete(4, 4);
        let r = color_square_convex(&g, &layout(&g), &ColorOptions::default()).unwrap();
        assert_eq!((r.omega, r.coloring.palette), (8, 8));
    }

    #[test]
    fn single_edge_and_empty() {
        let g = BipartiteGraph::new(1, 1, &[(0, 0)]).unwrap();
        let r = color_square_convex(&g, &layout(&g), &ColorOptions::default()).unwrap();
        assert_eq!((r.omega, r.coloring.palette), (2, 2));
        let g = BipartiteGraph::new(2, 3, &[]).unwrap();
        let r = color_square_convex(&g, &layout(&g), &ColorOptions::default()).unwrap();
        assert_eq!(r.coloring.palette, 1);
        let g = BipartiteGraph::new(0, 0, &[]).unwrap();
        let r = color_square_convex(&g, &layout(&g), &ColorOptions::default()).unwrap();
        assert_eq!(r.coloring.palette, 0);
    }

    #[test]
    fn pivot_is_the_unique_color() {
        let g = BipartiteGraph::complete(3, 3);
        let l = layout(&g);
        let sq = square(&g);
        // b0 is absorbed; A colored 1,2,3 and the later B vertices 2,3
        let s = ExtensionState::new(&g, &l, &sq, vec![1, 2, 3, 0, 2, 3], 3, 0);
        assert_eq!(s.free_color(), None);
        assert_eq!(s.find_pivot().unwrap(), 0);
        // two unique colors: the earlier vertex wins
        let s = ExtensionState::new(&g, &l, &sq, vec![2, 1, 3, 0, 3, 0], 3, 0);
        assert_eq!(s.find_pivot().unwrap(), 0);
        let s = ExtensionState::new(&g, &l, &sq, vec![1, 1, 2, 0, 1, 2], 3, 0);
        assert!(matches!(s.find_pivot(), Err(Error::AlgorithmInvariantViolation(_))));
    }

    #[test]
    fn partner_color_skips_forward_colors() {
        // a0 < a1 < a2 by right endpoint; all share b1
        let g = BipartiteGraph::from_neighborhoods(3, vec![vec![0, 1], vec![1], vec![1, 2]]).unwrap();
        let l = layout(&g);
        assert_eq!(l.a_order(), &[0, 1, 2]);
        let sq = square(&g);
        // pivot a1 colored 2; backward a0 has 1, forward a2 has 3
        let s = ExtensionState::new(&g, &l, &sq, vec![1, 2, 3, 0, 0, 0], 3, 2);
        assert_eq!(s.partner_color(1).unwrap(), (1, 0));
        let s = ExtensionState::new(&g, &l, &sq, vec![3, 2, 3, 0, 0, 0], 3, 2);
        assert!(s.partner_color(1).is_err());
    }

    #[test]
    fn singleton_kempe_component() {
        let g = BipartiteGraph::from_neighborhoods(2, vec![vec![0], vec![1]]).unwrap();
        let l = layout(&g);
        let sq = square(&g);
        let mut s = ExtensionState::new(&g, &l, &sq, vec![1, 1, 0, 0], 3, 1);
        let (comp, layers) = s.kempe_swap(0, 1, 2).unwrap();
        assert_eq!((comp, layers), (vec![0], vec![0]));
        assert_eq!(s.colors, vec![2, 1, 0, 0]);
    }

    #[test]
    fn wrong_omega_is_reported() {
        let g = BipartiteGraph::complete(3, 3);
        let opts = ColorOptions { omega: Some(3), ..ColorOptions::default() };
        assert!(matches!(
            color_square_convex(&g, &layout(&g), &opts),
            Err(Error::AlgorithmInvariantViolation(_))
        ));
    }

    #[test]
    fn random_convex_graphs_stay_within_bound() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let n_a = rng.gen_range(1..12);
            let n_b = rng.gen_range(1..12);
            let nbhd: Vec<Vec<usize>> = (0..n_a)
                .map(|_| {
                    let len = rng.gen_range(1..=n_b.min(6));
                    let l = rng.gen_range(0..=n_b - len);
                    (l..l + len).collect()
                })
                .collect();
            let g = BipartiteGraph::from_neighborhoods(n_b, nbhd).unwrap();
            let l = recognize_convex(&g).unwrap();
            let r = color_square_convex(&g, &l, &ColorOptions::default()).unwrap();
            assert!(verify_coloring(&square(&g), &r.coloring));
            assert!(r.coloring.palette <= r.bound);
        }
    }
}
