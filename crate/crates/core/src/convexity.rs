//! Recognition of convex and biconvex bipartite graphs.
//!
//! A bipartite graph is convex when `B` can be ordered so that every
//! `A`-neighborhood is a contiguous run. The recognizer solves the underlying
//! consecutive-ones problem by partition refinement: rows that properly overlap
//! fix the relative order of their elements up to reversal, and the resulting
//! overlap components nest inside single blocks of one another.

use std::collections::VecDeque;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, SimpleGraph};

/// Orderings `<_B`, `<_A` and the compact interval representation of a convex graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexLayout {
    b_order: Vec<usize>,
    b_pos: Vec<usize>,
    intervals: Vec<Option<(usize, usize)>>,
    a_order: Vec<usize>,
    a_rank: Vec<usize>,
}

impl ConvexLayout {
    /// Builds the layout induced by a given order of `B` (listed left to right).
    ///
    /// Fails with [`Error::NotConvex`] if some neighborhood is not contiguous.
    pub fn from_b_order(g: &BipartiteGraph, b_order: Vec<usize>) -> Result<Self> {
        let b_pos = inverse_permutation(&b_order, g.n_b())
            .ok_or_else(|| Error::LayoutMismatch("b_order is not a permutation of B".into()))?;
        let mut intervals = Vec::with_capacity(g.n_a());
        for a in 0..g.n_a() {
            intervals.push(neighborhood_interval(g.neighbors_a(a), &b_pos).map_err(|_| Error::NotConvex)?);
        }
        let a_order = sort_by_interval(&intervals);
        let a_rank = inverse_permutation(&a_order, g.n_a()).expect("sorting yields a permutation");
        Ok(ConvexLayout { b_order, b_pos, intervals, a_order, a_rank })
    }

    /// `B`-vertices from left to right under `<_B`.
    pub fn b_order(&self) -> &[usize] {
        &self.b_order
    }

    /// Position of `B`-vertex `b` under `<_B`.
    pub fn b_position(&self, b: usize) -> usize {
        self.b_pos[b]
    }

    /// `A`-vertices in `<_A` order.
    pub fn a_order(&self) -> &[usize] {
        &self.a_order
    }

    /// Rank of `A`-vertex `a` under `<_A`.
    pub fn a_rank(&self, a: usize) -> usize {
        self.a_rank[a]
    }

    /// `[left, right]` in `B`-positions, `None` for isolated `A`-vertices.
    pub fn interval(&self, a: usize) -> Option<(usize, usize)> {
        self.intervals[a]
    }

    pub fn intervals(&self) -> &[Option<(usize, usize)>] {
        &self.intervals
    }

    /// Intersection graph of the intervals, on `A` (isolated vertices stay isolated).
    pub fn interval_graph(&self) -> SimpleGraph {
        let n = self.intervals.len();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if let (Some(x), Some(y)) = (self.intervals[u], self.intervals[v]) {
                    if x.0 <= y.1 && y.0 <= x.1 {
                        edges.push((u, v));
                    }
                }
            }
        }
        SimpleGraph::from_edges_unchecked(n, &edges)
    }
}

/// Certificate that a graph is not convex: under the best attempted order,
/// `violating_a` has neighbors at positions `gap.0` and `gap.2` but not `gap.1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonConvexWitness {
    pub b_order_attempted: Vec<usize>,
    pub violating_a: usize,
    /// `(b_p, b_q, b_r)` as `B`-vertices with `p < q < r`.
    pub gap: (usize, usize, usize),
}

/// A convex layout plus an independent order of `A` making every
/// `B`-neighborhood contiguous.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiconvexLayout {
    pub b_layout: ConvexLayout,
    pub a_order_prime: Vec<usize>,
}

fn inverse_permutation(order: &[usize], n: usize) -> Option<Vec<usize>> {
    if order.len() != n {
        return None;
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return None;
        }
        pos[v] = i;
    }
    Some(pos)
}

/// Interval of positions covered by `nb`, or `Err(gap position)` if not contiguous.
fn neighborhood_interval(nb: &[usize], pos: &[usize]) -> std::result::Result<Option<(usize, usize)>, ()> {
    if nb.is_empty() {
        return Ok(None);
    }
    let lo = nb.iter().map(|&b| pos[b]).min().unwrap();
    let hi = nb.iter().map(|&b| pos[b]).max().unwrap();
    if hi - lo + 1 == nb.len() {
        Ok(Some((lo, hi)))
    } else {
        Err(())
    }
}

/// Isolated vertices first by index, then by right end, left end, index.
fn sort_by_interval(intervals: &[Option<(usize, usize)>]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..intervals.len()).collect();
    order.sort_by_key(|&a| match intervals[a] {
        None => (0, 0, 0, a),
        Some((l, r)) => (1, r, l, a),
    });
    order
}

/// Recomputes `<_A` from the layout's intervals after checking them against `g`.
pub fn order_a(g: &BipartiteGraph, layout: &ConvexLayout) -> Result<Vec<usize>> {
    if layout.intervals.len() != g.n_a() || layout.b_pos.len() != g.n_b() {
        return Err(Error::LayoutMismatch("side sizes differ".into()));
    }
    for a in 0..g.n_a() {
        let actual = neighborhood_interval(g.neighbors_a(a), &layout.b_pos)
            .map_err(|_| Error::LayoutMismatch(format!("N(a{a}) is not contiguous")))?;
        if actual != layout.intervals[a] {
            return Err(Error::LayoutMismatch(format!(
                "interval of a{a} is {:?}, neighborhood spans {:?}",
                layout.intervals[a], actual
            )));
        }
    }
    Ok(sort_by_interval(&layout.intervals))
}

/// Ordered partition of one overlap component.
struct Component {
    rows: Vec<usize>,
    union: BitSet,
    blocks: Vec<BitSet>,
}

/// Adds row `r` to the ordered partition; `false` if it cannot be made contiguous.
fn refine(blocks: &mut Vec<BitSet>, union: &mut BitSet, r: &BitSet) -> bool {
    let touched: Vec<usize> = (0..blocks.len()).filter(|&k| blocks[k].intersects(r)).collect();
    let Some((&i, &j)) = touched.first().zip(touched.last()) else {
        return false;
    };
    if touched.len() != j - i + 1 {
        return false;
    }
    let full = |k: usize| blocks[k].intersection(r).count() == blocks[k].count();
    if (i + 1..j).any(|k| !full(k)) {
        return false;
    }
    let mut fresh = r.clone();
    fresh.difference_with(union);

    // splits block k into (part outside r, part inside r) in the given orientation
    let split = |blocks: &mut Vec<BitSet>, k: usize, inside_first: bool| {
        let inside = blocks[k].intersection(r);
        let mut outside = blocks[k].clone();
        outside.difference_with(r);
        if outside.is_empty() {
            return;
        }
        if inside_first {
            blocks[k] = inside;
            blocks.insert(k + 1, outside);
        } else {
            blocks[k] = outside;
            blocks.insert(k + 1, inside);
        }
    };

    if fresh.is_empty() {
        if i == j {
            // a row inside a single block cannot properly overlap a placed row
            return false;
        }
        split(blocks, j, true);
        split(blocks, i, false);
    } else {
        let last = blocks.len() - 1;
        let suffix_ok = j == last && (i + 1..=last).all(full);
        let prefix_ok = i == 0 && (0..j).all(full);
        if suffix_ok {
            split(blocks, i, false);
            blocks.push(fresh.clone());
        } else if prefix_ok {
            split(blocks, j, true);
            blocks.insert(0, fresh.clone());
        } else {
            return false;
        }
        for e in fresh.iter() {
            union.insert(e);
        }
    }
    true
}

fn overlaps(x: &BitSet, y: &BitSet) -> bool {
    if !x.intersects(y) {
        return false;
    }
    let common = x.intersection(y).count();
    common != x.count() && common != y.count()
}

/// Attempts a consecutive-ones order of `0..n` for `rows`.
///
/// Always returns a permutation; the flag reports whether every row was
/// absorbed without conflict. Rows that fail to fit are skipped, so the order
/// is still a reasonable "best attempt" for witness extraction.
fn consecutive_ones_attempt(n: usize, rows: &[Vec<usize>]) -> (Vec<usize>, bool) {
    let mut sets: Vec<BitSet> = Vec::new();
    for row in rows {
        if row.is_empty() {
            continue;
        }
        let mut s = BitSet::new(n);
        row.iter().for_each(|&e| s.insert(e));
        if !sets.contains(&s) {
            sets.push(s);
        }
    }
    let m = sets.len();
    let mut ok = true;

    let mut seen = vec![false; m];
    let mut comps: Vec<Component> = Vec::new();
    for start in 0..m {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut blocks = vec![sets[start].clone()];
        let mut union = sets[start].clone();
        let mut members = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(r) = queue.pop_front() {
            for s in 0..m {
                if !seen[s] && overlaps(&sets[r], &sets[s]) {
                    seen[s] = true;
                    if refine(&mut blocks, &mut union, &sets[s]) {
                        members.push(s);
                        queue.push_back(s);
                    } else {
                        ok = false;
                    }
                }
            }
        }
        comps.push(Component { rows: members, union, blocks });
    }

    // parent of each component: the smallest component having it inside one block
    let sizes: Vec<usize> = comps.iter().map(|c| c.union.count()).collect();
    let mut children: Vec<Vec<Vec<usize>>> = comps.iter().map(|c| vec![Vec::new(); c.blocks.len()]).collect();
    let mut is_root = vec![true; comps.len()];
    for c in 0..comps.len() {
        let candidate = (0..comps.len())
            .filter(|&p| p != c)
            .filter(|&p| {
                let inside = comps[c].union.intersection(&comps[p].union).count() == sizes[c];
                inside
                    && (sizes[p] > sizes[c] || (comps[p].rows.len() == 1 && comps[c].rows.len() > 1))
            })
            .min_by_key(|&p| (sizes[p], comps[p].rows.len() == 1));
        if let Some(p) = candidate {
            let block = comps[p]
                .blocks
                .iter()
                .position(|b| b.intersection(&comps[c].union).count() == sizes[c]);
            match block {
                Some(k) => {
                    children[p][k].push(c);
                    is_root[c] = false;
                }
                None => ok = false,
            }
        }
    }

    fn emit(
        c: usize,
        comps: &[Component],
        children: &[Vec<Vec<usize>>],
        emitted: &mut BitSet,
        out: &mut Vec<usize>,
    ) {
        for (k, block) in comps[c].blocks.iter().enumerate() {
            for &d in &children[c][k] {
                emit(d, comps, children, emitted, out);
            }
            for e in block.iter() {
                if !emitted.contains(e) {
                    emitted.insert(e);
                    out.push(e);
                }
            }
        }
    }

    let mut emitted = BitSet::new(n);
    let mut order = Vec::with_capacity(n);
    for c in 0..comps.len() {
        if is_root[c] {
            emit(c, &comps, &children, &mut emitted, &mut order);
        }
    }
    for e in 0..n {
        if !emitted.contains(e) {
            order.push(e);
        }
    }
    (order, ok)
}

fn find_gap(g: &BipartiteGraph, order: &[usize]) -> Option<(usize, (usize, usize, usize))> {
    let pos = inverse_permutation(order, g.n_b())?;
    for a in 0..g.n_a() {
        let nb = g.neighbors_a(a);
        if neighborhood_interval(nb, &pos).is_err() {
            let mut p: Vec<usize> = nb.iter().map(|&b| pos[b]).collect();
            p.sort_unstable();
            let q = p.windows(2).find(|w| w[1] != w[0] + 1).map(|w| w[0] + 1).unwrap();
            return Some((a, (order[p[0]], order[q], order[*p.last().unwrap()])));
        }
    }
    None
}

/// Recognizes convexity with `B` as the ordered side.
///
/// The identity order is returned whenever it already works, so graphs
/// generated in their natural order keep their labels.
pub fn recognize_convex(g: &BipartiteGraph) -> std::result::Result<ConvexLayout, NonConvexWitness> {
    let identity: Vec<usize> = (0..g.n_b()).collect();
    if let Ok(layout) = ConvexLayout::from_b_order(g, identity) {
        return Ok(layout);
    }
    let rows: Vec<Vec<usize>> = (0..g.n_a()).map(|a| g.neighbors_a(a).to_vec()).collect();
    let (order, _) = consecutive_ones_attempt(g.n_b(), &rows);
    match find_gap(g, &order) {
        None => Ok(ConvexLayout::from_b_order(g, order).expect("order verified contiguous")),
        Some((violating_a, gap)) => Err(NonConvexWitness {
            b_order_attempted: order,
            violating_a,
            gap,
        }),
    }
}

/// Succeeds iff both `B` and `A` admit orders making the opposite side's
/// neighborhoods contiguous.
pub fn recognize_biconvex(g: &BipartiteGraph) -> Option<BiconvexLayout> {
    let b_layout = recognize_convex(g).ok()?;
    let a_side = recognize_convex(&g.transpose()).ok()?;
    Some(BiconvexLayout {
        b_layout,
        a_order_prime: a_side.b_order().to_vec(),
    })
}

/// `true` iff for all `u < v < w` in `order` with `uw` an edge of `h`,
/// both `uv` and `vw` are edges. `order` lists the vertices of `h`.
pub fn check_proper_ordering(h: &SimpleGraph, order: &[usize]) -> bool {
    let Some(pos) = inverse_permutation(order, h.n()) else {
        return false;
    };
    for (p, &u) in order.iter().enumerate() {
        // right-neighbors must be exactly the next few vertices, and symmetrically on the left
        let right = h.neighbors(u).iter().filter(|&&w| pos[w] > p).count();
        if (p + 1..p + 1 + right).any(|q| q >= order.len() || !h.has_edge(u, order[q])) {
            return false;
        }
        let left = h.neighbors(u).iter().filter(|&&w| pos[w] < p).count();
        if (p - left..p).any(|q| !h.has_edge(u, order[q])) {
            return false;
        }
    }
    true
}
