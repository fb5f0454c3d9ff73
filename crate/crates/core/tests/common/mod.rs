#![allow(dead_code)]

use proptest::prelude::*;
use sqchroma::{BipartiteGraph, SimpleGraph};

/// Convex graph in its natural `B` order: each `A` vertex gets a random interval.
pub fn convex_graph(max_a: usize, max_b: usize) -> impl Strategy<Value = BipartiteGraph> {
    (1..=max_a, 1..=max_b).prop_flat_map(|(n_a, n_b)| {
        prop::collection::vec((0..n_b, 0..n_b), n_a).prop_map(move |iv| {
            let nbhd = iv.into_iter().map(|(x, y)| (x.min(y)..=x.max(y)).collect()).collect();
            BipartiteGraph::from_neighborhoods(n_b, nbhd).unwrap()
        })
    })
}

/// A convex graph with `B` relabeled by a random permutation.
pub fn shuffled_convex_graph(max_a: usize, max_b: usize) -> impl Strategy<Value = BipartiteGraph> {
    convex_graph(max_a, max_b).prop_flat_map(|g| {
        let perm: Vec<usize> = (0..g.n_b()).collect();
        Just(perm).prop_shuffle().prop_map(move |p| g.permute_b(&p))
    })
}

/// Arbitrary bipartite graph, convex or not.
pub fn bipartite_graph(max_a: usize, max_b: usize) -> impl Strategy<Value = BipartiteGraph> {
    (1..=max_a, 1..=max_b).prop_flat_map(|(n_a, n_b)| {
        prop::collection::vec(any::<bool>(), n_a * n_b).prop_map(move |bits| {
            let edges: Vec<(usize, usize)> =
                (0..n_a * n_b).filter(|&i| bits[i]).map(|i| (i / n_b, i % n_b)).collect();
            BipartiteGraph::new(n_a, n_b, &edges).unwrap()
        })
    })
}

pub fn simple_graph(max_n: usize) -> impl Strategy<Value = SimpleGraph> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            SimpleGraph::new(n, &edges).unwrap()
        })
    })
}

/// All permutations of `0..n`, for brute-force oracles.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// A convex graph with a special coloring of `H_{j+1}` (B position 1 is
/// `b_j`) under which `b_j` sees every color and the pivot has no free color.
///
/// A: `t` intervals `[0,0]`, then (when `chained`) an interval `[0,1]` whose color
/// is repeated in `B_j`, then the pivot `[0,1]`, `k-1` intervals `[1,1]` and one
/// long interval `[1,R]`. The colors of `B_j` are repeated on the `[0,0]`
/// intervals, which leaves the pivot stuck. With `chained` the first swap moves
/// the pivot onto the earlier `[0,1]` interval, which is stuck again.
///
/// Returns `(g, colors, palette, omega)`.
pub fn blocked_instance(k: usize, chained: bool) -> (BipartiteGraph, Vec<usize>, usize, usize) {
    assert!(k >= 4);
    let extra = usize::from(chained);
    let omega = k + 2 + extra;
    let palette = 3 * omega / 2;
    let fresh = palette - k - 1 - extra; // colors only the left intervals and B_j hold
    let t = fresh;
    let r = k + 1 + extra;
    let n_b = r + 1;
    let mut nbhd: Vec<Vec<usize>> = vec![vec![0]; t];
    let mut colors: Vec<usize> = (0..fresh).map(|i| k + 2 + extra + i).collect();
    if chained {
        nbhd.push(vec![0, 1]);
        colors.push(k + 2);
    }
    nbhd.push(vec![0, 1]);
    colors.push(1);
    for i in 0..k - 1 {
        nbhd.push(vec![1]);
        colors.push(2 + i);
    }
    nbhd.push((1..=r).collect());
    colors.push(k + 1);
    let n_a = nbhd.len();
    let g = BipartiteGraph::from_neighborhoods(n_b, nbhd).unwrap();
    // b0, b1 uncolored; B_j = b2..b_R
    colors.extend([0, 0]);
    let mut b_colors: Vec<usize> = Vec::new();
    if chained {
        b_colors.push(k + 2);
    }
    b_colors.extend((0..fresh).map(|i| k + 2 + extra + i));
    let mut reuse = 2;
    while b_colors.len() < r - 1 {
        b_colors.push(reuse);
        reuse += 1;
    }
    colors.extend(b_colors);
    assert_eq!(colors.len(), n_a + n_b);
    (g, colors, palette, omega)
}

/// [`blocked_instance`] shifted right by `shift` positions, with up to `extras`
/// random intervals added on the left where they keep the clique number and
/// admit a free color. Returns `(g, colors, palette, position of b_j)`.
pub fn padded_blocked_instance(k: usize, chained: bool, shift: usize, extras: usize, seed: u64) -> (BipartiteGraph, Vec<usize>, usize, usize) {
    use rand::seq::SliceRandom;
    use rand::Rng;
    use sqchroma::oracle::{exact_clique, DEFAULT_BUDGET};

    let (g0, c0, palette, omega) = blocked_instance(k, chained);
    let n_b = g0.n_b() + shift;
    let mut nbhd: Vec<Vec<usize>> = (0..g0.n_a())
        .map(|a| {
            let row = g0.neighbors_a(a);
            (row[0] + shift..=row[row.len() - 1] + shift).collect()
        })
        .collect();
    let mut a_colors: Vec<usize> = c0[..g0.n_a()].to_vec();
    let b_colors: Vec<usize> = std::iter::repeat(0).take(shift).chain(c0[g0.n_a()..].iter().copied()).collect();
    let mut rng = sqchroma::generators::rng(seed);
    let build = |nbhd: &[Vec<usize>]| BipartiteGraph::from_neighborhoods(n_b, nbhd.to_vec()).unwrap();
    for _ in 0..extras {
        let l = rng.gen_range(0..=shift);
        let r = rng.gen_range(l..=shift);
        let mut trial = nbhd.clone();
        trial.push((l..=r).collect());
        let g = build(&trial);
        let sq = sqchroma::square(&g);
        if exact_clique(&sq, DEFAULT_BUDGET).unwrap() != omega {
            continue;
        }
        let v = trial.len() - 1;
        let mut colors: Vec<usize> = a_colors.clone();
        colors.push(0);
        colors.extend(&b_colors);
        let mut used = vec![false; palette + 1];
        for &u in sq.neighbors(v) {
            used[colors[u]] = true;
        }
        let free: Vec<usize> = (1..=palette).filter(|&c| !used[c]).collect();
        if let Some(&c) = free.choose(&mut rng) {
            nbhd = trial;
            a_colors.push(c);
        }
    }
    let g = build(&nbhd);
    let mut colors = a_colors;
    colors.extend(b_colors);
    (g, colors, palette, shift + 1)
}

/// Random walk over special colorings of a padded blocked instance that keep
/// `b_j` blocked and the pivot stuck; every `every` steps the extension step
/// is run from the current coloring. Each result is checked for properness.
pub fn stuck_walk(
    k: usize,
    chained: bool,
    steps: usize,
    every: usize,
    seed: u64,
) -> Vec<Result<sqchroma::coloring::ColorStats, String>> {
    use rand::seq::SliceRandom;
    use sqchroma::coloring::{ColorStats, ExtensionState};
    use sqchroma::convexity::ConvexLayout;

    let (g, mut colors, palette, pos) = padded_blocked_instance(k, chained, 4, 12, seed);
    let layout = ConvexLayout::from_b_order(&g, (0..g.n_b()).collect()).unwrap();
    let sq = sqchroma::square(&g);
    let stuck = |colors: &[usize]| {
        let st = ExtensionState::new(&g, &layout, &sq, colors.to_vec(), palette, pos);
        st.free_color().is_none() && st.find_pivot().is_ok_and(|p| st.pivot_free_color(p).is_none())
    };
    assert!(stuck(&colors));
    let verts: Vec<usize> = (0..g.num_vertices()).filter(|&v| colors[v] > 0).collect();
    let mut rng = sqchroma::generators::rng(seed);
    let mut out = Vec::new();
    for step in 0..steps {
        let v = *verts.choose(&mut rng).unwrap();
        let mut used = vec![false; palette + 1];
        for &u in sq.neighbors(v) {
            used[colors[u]] = true;
        }
        let avail: Vec<usize> = (1..=palette).filter(|&c| !used[c] && c != colors[v]).collect();
        if let Some(&c) = avail.choose(&mut rng) {
            let old = colors[v];
            colors[v] = c;
            if !stuck(&colors) {
                colors[v] = old;
            }
        }
        if step % every == 0 {
            let mut st = ExtensionState::new(&g, &layout, &sq, colors.clone(), palette, pos);
            let mut stats = ColorStats::default();
            let r = st.absorb(&mut stats, &mut None).map_err(|e| e.to_string()).and_then(|()| {
                let proper = sq.edges().all(|(u, w)| st.colors[u] == 0 || st.colors[w] == 0 || st.colors[u] != st.colors[w]);
                let b_j = g.n_a() + layout.b_order()[pos];
                if proper && st.colors[b_j] > 0 {
                    Ok(stats)
                } else {
                    Err("extension left an improper or partial coloring".to_string())
                }
            });
            out.push(r);
        }
    }
    out
}
