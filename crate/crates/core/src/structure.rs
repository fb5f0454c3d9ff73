//! Checks of the structure of holes in squares of convex bipartite graphs,
//! and of which perfection properties can be read off the two half-squares.
//!
//! Cycles are given in the global numbering of [`square`].

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::convexity::{recognize_biconvex, ConvexLayout};
use crate::error::{invariant, Error, Result};
use crate::graph::{half_square, square, BipartiteGraph, Side, SimpleGraph, VertexRef};
use crate::oracle;

/// Pass flags for the clauses of the cycle-structure theorem.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseFlags {
    /// Some labeling makes `(v1..v_{k-2})` an `(A, v_k, v_{k-1})`-path.
    pub p1: bool,
    /// Private vertices `b_1..b_{k-3}` found in `(v_k, v_{k-1})` in increasing order.
    pub p2_private: bool,
    /// `v1 <_A v2 <_A ... <_A v_{k-2}`.
    pub p2_a_order: bool,
    /// One `A` vertex sees `v_k, b_1, ..., b_{k-3}, v_{k-1}`.
    pub p3: bool,
    /// No cycle vertex lies strictly between `v_k` and `v_{k-1}` in `<_B`.
    pub gap_empty: bool,
    /// Exactly two cycle vertices are in `B`.
    pub partite_count: bool,
}

impl ClauseFlags {
    pub fn all(&self) -> bool {
        self.p1 && self.p2_private && self.p2_a_order && self.p3 && self.gap_empty && self.partite_count
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    /// The cycle relabeled as `v1..vk`.
    pub cycle: Vec<VertexRef>,
    pub a_path: Vec<usize>,
    pub b_end_low: Option<usize>,
    pub b_end_high: Option<usize>,
    pub private_bs: Vec<usize>,
    pub common_a: Option<usize>,
    pub ok: ClauseFlags,
}

fn check_induced_cycle(sq: &SimpleGraph, cycle: &[usize]) -> Result<()> {
    let k = cycle.len();
    if k < 4 {
        return Err(Error::NotInducedCycle(format!("length {k} is below 4")));
    }
    if let Some(&v) = cycle.iter().find(|&&v| v >= sq.n()) {
        return Err(Error::NotInducedCycle(format!("vertex {v} is out of range")));
    }
    let distinct: BTreeSet<_> = cycle.iter().collect();
    if distinct.len() != k {
        return Err(Error::NotInducedCycle("repeated vertex".into()));
    }
    for i in 0..k {
        for j in i + 1..k {
            let consecutive = j == i + 1 || (i == 0 && j == k - 1);
            if sq.has_edge(cycle[i], cycle[j]) != consecutive {
                return Err(Error::NotInducedCycle(format!(
                    "positions {i} and {j} {}",
                    if consecutive { "are not adjacent" } else { "form a chord" }
                )));
            }
        }
    }
    Ok(())
}

/// The definition of an `(A, b, b')`-path, plus the consequences that
/// convexity forces on it: the ordering of `b, b'`, the position of the
/// `<_A`-least path vertex, interior neighborhoods inside `(b, b')` and full
/// coverage of `[b, b']`. Vertices are local indices.
pub fn is_ab_path(g: &BipartiteGraph, layout: &ConvexLayout, path: &[usize], b: usize, b_prime: usize) -> bool {
    let k = path.len();
    if k < 2 || b == b_prime || b >= g.n_b() || b_prime >= g.n_b() || path.iter().any(|&a| a >= g.n_a()) {
        return false;
    }
    let hs = half_square(g, Side::A);
    for i in 0..k {
        for j in i + 1..k {
            if hs.has_edge(path[i], path[j]) != (j == i + 1) {
                return false;
            }
        }
    }
    let private = |end: usize, x: usize| {
        path.iter().enumerate().all(|(i, &a)| g.has_edge(a, x) == (i == end))
    };
    if !private(0, b) || !private(k - 1, b_prime) {
        return false;
    }
    // orient so that the first vertex is the <_A-smaller end
    let (path, b, b_prime): (Vec<usize>, usize, usize) = if layout.a_rank(path[0]) < layout.a_rank(path[k - 1]) {
        (path.to_vec(), b, b_prime)
    } else {
        (path.iter().rev().copied().collect(), b_prime, b)
    };
    let (lo, hi) = (layout.b_position(b), layout.b_position(b_prime));
    if lo >= hi || path.iter().any(|&a| layout.a_rank(a) < layout.a_rank(path[0])) {
        return false;
    }
    let strictly_inside = |x: &usize| (lo + 1..hi).contains(&layout.b_position(*x));
    let interior_ok = if k == 2 {
        g.neighbors_a(path[0])
            .iter()
            .filter(|x| g.has_edge(path[1], **x))
            .all(strictly_inside)
    } else {
        path[1..k - 1].iter().all(|&a| g.neighbors_a(a).iter().all(strictly_inside))
    };
    let covered = (lo..=hi).all(|p| {
        let x = layout.b_order()[p];
        path.iter().any(|&a| g.has_edge(a, x))
    });
    interior_ok && covered
}

/// Number of cycle vertices on `side`.
pub fn partite_count(g: &BipartiteGraph, cycle: &[usize], side: Side) -> usize {
    cycle.iter().filter(|&&v| g.vertex_ref(v).side == side).count()
}

/// Exactly two cycle vertices lie in `B`.
pub fn check_partite_count(g: &BipartiteGraph, cycle: &[usize]) -> bool {
    partite_count(g, cycle, Side::B) == 2
}

/// The cycle meets both sides, and the `<_A`-least cycle vertex has exactly
/// one cycle neighbor in `A`.
pub fn check_cycle_neighbors(g: &BipartiteGraph, layout: &ConvexLayout, cycle: &[usize]) -> bool {
    let n_a = g.n_a();
    let k = cycle.len();
    let Some(i) = (0..k)
        .filter(|&i| cycle[i] < n_a)
        .min_by_key(|&i| layout.a_rank(cycle[i]))
    else {
        return false;
    };
    let prev = cycle[(i + k - 1) % k];
    let next = cycle[(i + 1) % k];
    let in_b = cycle.iter().any(|&v| v >= n_a);
    in_b && ((prev < n_a) != (next < n_a))
}

/// Runs every clause of the cycle-structure theorem and reports each one.
pub fn inspect_cycle_structure(g: &BipartiteGraph, layout: &ConvexLayout, cycle: &[usize]) -> Result<StructureReport> {
    let sq = square(g);
    check_induced_cycle(&sq, cycle)?;
    let n_a = g.n_a();
    let k = cycle.len();
    let mut report = StructureReport {
        cycle: cycle.iter().map(|&v| g.vertex_ref(v)).collect(),
        a_path: Vec::new(),
        b_end_low: None,
        b_end_high: None,
        private_bs: Vec::new(),
        common_a: None,
        ok: ClauseFlags { partite_count: check_partite_count(g, cycle), ..ClauseFlags::default() },
    };
    let labelings = (0..k).flat_map(|s| {
        [
            (0..k).map(|i| cycle[(s + i) % k]).collect::<Vec<_>>(),
            (0..k).map(|i| cycle[(s + k - i) % k]).collect::<Vec<_>>(),
        ]
    });
    let found = labelings.into_iter().find(|v| {
        let (p, vk, vk1) = (&v[..k - 2], v[k - 1], v[k - 2]);
        p.iter().all(|&a| a < n_a)
            && vk >= n_a
            && vk1 >= n_a
            && layout.a_rank(p[0]) < layout.a_rank(p[k - 3])
            && is_ab_path(g, layout, p, vk - n_a, vk1 - n_a)
    });
    let Some(v) = found else {
        return Ok(report);
    };
    report.ok.p1 = true;
    report.cycle = v.iter().map(|&x| g.vertex_ref(x)).collect();
    let path: Vec<usize> = v[..k - 2].to_vec();
    let (low, high) = (v[k - 1] - n_a, v[k - 2] - n_a);
    report.a_path = path.clone();
    report.b_end_low = Some(low);
    report.b_end_high = Some(high);
    report.ok.p2_a_order = path.windows(2).all(|w| layout.a_rank(w[0]) < layout.a_rank(w[1]));

    let high_pos = layout.b_position(high);
    let mut prev_pos = layout.b_position(low);
    for i in 0..k - 3 {
        let pick = (prev_pos + 1..high_pos).map(|p| layout.b_order()[p]).find(|&b| {
            path.iter()
                .enumerate()
                .all(|(j, &a)| g.has_edge(a, b) == (j == i || j == i + 1))
        });
        match pick {
            Some(b) => {
                report.private_bs.push(b);
                prev_pos = layout.b_position(b);
            }
            None => break,
        }
    }
    report.ok.p2_private = report.private_bs.len() == k - 3;

    let mut span = vec![low];
    span.extend(&report.private_bs);
    span.push(high);
    report.common_a = (0..n_a).find(|&a| span.iter().all(|&b| g.has_edge(a, b)));
    report.ok.p3 = report.common_a.is_some();

    let low_pos = layout.b_position(low);
    report.ok.gap_empty = v
        .iter()
        .filter(|&&x| x >= n_a)
        .all(|&x| !(low_pos + 1..high_pos).contains(&layout.b_position(x - n_a)));
    Ok(report)
}

/// Like [`inspect_cycle_structure`], but a failed clause is an error.
pub fn verify_cycle_structure(g: &BipartiteGraph, layout: &ConvexLayout, cycle: &[usize]) -> Result<StructureReport> {
    let report = inspect_cycle_structure(g, layout, cycle)?;
    if report.ok.all() {
        Ok(report)
    } else {
        Err(invariant(format!("cycle structure clauses failed: {:?}", report.ok)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spectrum {
    pub lengths: BTreeSet<usize>,
    pub contiguous: bool,
}

/// Lengths of induced cycles of length at least 4 in `G²`, and whether they
/// form a range starting at 4.
pub fn cycle_spectrum(g: &BipartiteGraph) -> Spectrum {
    let sq = square(g);
    let lengths: BTreeSet<usize> = oracle::find_induced_cycles(&sq, 4, sq.n())
        .iter()
        .map(Vec::len)
        .collect();
    let contiguous = lengths.iter().copied().eq(4..4 + lengths.len());
    Spectrum { lengths, contiguous }
}

pub fn cycle_spectrum_check(g: &BipartiteGraph) -> bool {
    cycle_spectrum(g).contiguous
}

/// For convex `g`: every maximal clique of `G²[A]` lies in some `N(b)` and every maximal
/// clique of `G²[B]` in some `N(a)`. Isolated vertices are skipped.
pub fn check_ab_cliques(g: &BipartiteGraph) -> bool {
    let side_ok = |side: Side| {
        oracle::maximal_cliques(&half_square(g, side)).iter().all(|c| {
            if c.len() == 1 && g.neighbors(VertexRef { side, index: c[0] }).is_empty() {
                return true;
            }
            (0..g.side_len(side.other())).any(|w| {
                let nb = g.neighbors(VertexRef { side: side.other(), index: w });
                c.iter().all(|x| nb.binary_search(x).is_ok())
            })
        })
    };
    side_ok(Side::A) && side_ok(Side::B)
}

/// If neither half-square has an odd antihole of length at least 7, neither
/// does `G²`. Returns whether the implication holds on `g`.
pub fn partite_testable_antihole_check(g: &BipartiteGraph) -> bool {
    let halves_free = !oracle::has_odd_antihole_gt5(&half_square(g, Side::A))
        && !oracle::has_odd_antihole_gt5(&half_square(g, Side::B));
    !halves_free || !oracle::has_odd_antihole_gt5(&square(g))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfectnessReport {
    pub c5_free: bool,
    pub c4_free: bool,
    pub perfect: bool,
    pub chordal: bool,
    pub biconvex: bool,
    /// `C5`-free implies perfect.
    pub c5_implication: bool,
    /// `C4`-free implies chordal.
    pub c4_implication: bool,
    /// Biconvex implies `C5`-free and perfect.
    pub biconvex_implication: bool,
}

impl PerfectnessReport {
    pub fn all_hold(&self) -> bool {
        self.c5_implication && self.c4_implication && self.biconvex_implication
    }
}

pub fn perfectness_partite_tests(g: &BipartiteGraph) -> PerfectnessReport {
    let sq = square(g);
    let c5_free = oracle::is_ck_free(&sq, 5);
    let c4_free = oracle::is_ck_free(&sq, 4);
    let perfect = oracle::is_perfect_small(&sq);
    let chordal = oracle::is_chordal_small(&sq);
    let biconvex = recognize_biconvex(g).is_some();
    PerfectnessReport {
        c5_free,
        c4_free,
        perfect,
        chordal,
        biconvex,
        c5_implication: !c5_free || perfect,
        c4_implication: !c4_free || chordal,
        biconvex_implication: !biconvex || (c5_free && perfect),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleSummary {
    pub cycles: usize,
    pub passed: usize,
    pub lengths: BTreeSet<usize>,
    pub spectrum_contiguous: bool,
    pub failures: Vec<String>,
}

/// Runs every per-cycle check on all holes of `G²` up to `max_len`.
pub fn analyze_square_cycles(g: &BipartiteGraph, layout: &ConvexLayout, max_len: usize) -> (Vec<StructureReport>, CycleSummary) {
    let sq = square(g);
    let mut reports = Vec::new();
    let mut summary = CycleSummary::default();
    for c in oracle::find_induced_cycles(&sq, 4, max_len) {
        summary.cycles += 1;
        summary.lengths.insert(c.len());
        let mut bad = Vec::new();
        match inspect_cycle_structure(g, layout, &c) {
            Ok(r) => {
                if !r.ok.all() {
                    bad.push(format!("{:?}", r.ok));
                }
                reports.push(r);
            }
            Err(e) => bad.push(e.to_string()),
        }
        if !check_cycle_neighbors(g, layout, &c) {
            bad.push("cycle neighbors".into());
        }
        if bad.is_empty() {
            summary.passed += 1;
        } else {
            let names: Vec<String> = c.iter().map(|&v| g.vertex_ref(v).to_string()).collect();
            summary.failures.push(format!("({}): {}", names.join(" "), bad.join("; ")));
        }
    }
    summary.spectrum_contiguous = summary.lengths.iter().copied().eq(4..4 + summary.lengths.len());
    (reports, summary)
}
