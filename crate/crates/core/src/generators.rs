//! Deterministic constructions and seeded random families.
//!
//! Randomness comes from `ChaCha8Rng::seed_from_u64`, so a seed fixes the
//! output on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, SimpleGraph};

/// The seeded generator used throughout.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Girth7Kind {
    /// `C_n`, `n >= 7`.
    LongCycle { n: usize },
    /// Complete `branching`-ary tree of the given depth.
    Tree { branching: usize, depth: usize },
    /// `G(n, p)` with every edge subdivided twice.
    SubdividedRandom { n: usize, p: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GenSpec {
    RandomConvex { n_a: usize, n_b: usize, max_len: usize, seed: u64 },
    RandomBiconvex { n_a: usize, n_b: usize, seed: u64 },
    LowerBoundH { q: usize },
    CompleteBipartite { n_a: usize, n_b: usize },
    NamedFigure { name: String },
    Girth7 { kind: Girth7Kind, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generated {
    Bipartite(BipartiteGraph),
    General(SimpleGraph),
}

pub fn generate(spec: &GenSpec) -> Result<Generated> {
    Ok(match spec {
        &GenSpec::RandomConvex { n_a, n_b, max_len, seed } => {
            Generated::Bipartite(gen_random_convex(n_a, n_b, max_len, seed)?)
        }
        &GenSpec::RandomBiconvex { n_a, n_b, seed } => {
            Generated::Bipartite(gen_random_biconvex(n_a, n_b, seed)?)
        }
        &GenSpec::LowerBoundH { q } => Generated::Bipartite(gen_lower_bound_h(q)?),
        &GenSpec::CompleteBipartite { n_a, n_b } => {
            Generated::Bipartite(BipartiteGraph::complete(n_a, n_b))
        }
        GenSpec::NamedFigure { name } => Generated::Bipartite(gen_named(name)?),
        &GenSpec::Girth7 { kind, seed } => Generated::General(gen_girth7(kind, seed)?),
    })
}

/// Each `A` vertex gets an interval of uniform length in `1..=max_len`
/// (capped at `n_b`) at a uniform offset; `B` keeps the interval order.
pub fn gen_random_convex(n_a: usize, n_b: usize, max_len: usize, seed: u64) -> Result<BipartiteGraph> {
    if n_a > 0 && (n_b == 0 || max_len == 0) {
        return Err(Error::InvalidParameter(
            "random convex graphs need n_b >= 1 and max_len >= 1".into(),
        ));
    }
    let mut rng = rng(seed);
    let nbhd = (0..n_a)
        .map(|_| {
            let len = rng.gen_range(1..=max_len.min(n_b));
            let left = rng.gen_range(0..=n_b - len);
            (left..left + len).collect()
        })
        .collect();
    BipartiteGraph::from_neighborhoods(n_b, nbhd)
}

/// Monotone staircase: left and right endpoints both non-decreasing along `A`.
pub fn gen_random_biconvex(n_a: usize, n_b: usize, seed: u64) -> Result<BipartiteGraph> {
    if n_a == 0 || n_b == 0 {
        return Err(Error::InvalidParameter("biconvex sizes must be at least 1".into()));
    }
    let mut rng = rng(seed);
    let mut lefts: Vec<usize> = (0..n_a).map(|_| rng.gen_range(0..n_b)).collect();
    let mut rights: Vec<usize> = (0..n_a).map(|_| rng.gen_range(0..n_b)).collect();
    lefts.sort_unstable();
    rights.sort_unstable();
    let nbhd = lefts
        .iter()
        .zip(&rights)
        .map(|(&l, &r)| (l..=r.max(l)).collect())
        .collect();
    BipartiteGraph::from_neighborhoods(n_b, nbhd)
}

/// The lower-bound graph `H` built from five cliques `Q1..Q5` of size `q`.
///
/// `A = Q1, Q5, Q4, z1` and `B = Q2, z2, z3, Q3`, each listed in index order,
/// so the identity order on `B` is convex.
pub fn gen_lower_bound_h(q: usize) -> Result<BipartiteGraph> {
    if q < 2 || q % 2 == 1 {
        return Err(Error::InvalidParameter(format!("q must be even and at least 2, got {q}")));
    }
    let (q1, q5, q4, z1) = (0..q, q..2 * q, 2 * q..3 * q, 3 * q);
    let (q2, z2, z3, q3) = (0..q, q, q + 1, q + 2..2 * q + 2);
    let mut e = Vec::new();
    e.extend((0..2 * q + 2).map(|b| (z1, b)));
    for a in q1 {
        e.extend(q2.clone().map(|b| (a, b)));
        e.push((a, z2));
    }
    for a in q5 {
        e.push((a, z2));
        e.push((a, z3));
    }
    for a in q4 {
        e.push((a, z3));
        e.extend(q3.clone().map(|b| (a, b)));
    }
    BipartiteGraph::new(3 * q + 1, 2 * q + 2, &e)
}

pub const NAMED: [&str; 4] = ["not_perfect", "antihole", "biconvex", "convex_c4free"];

/// Figure graphs by name, plus `complete(n)` for `K_{n,n}`.
pub fn gen_named(name: &str) -> Result<BipartiteGraph> {
    if let Some(n) = name.strip_prefix("complete(").and_then(|s| s.strip_suffix(')')) {
        let n = n.trim().parse().map_err(|_| Error::UnknownName(name.into()))?;
        return Ok(BipartiteGraph::complete(n, n));
    }
    let nbhd: Vec<Vec<usize>> = match name {
        "not_perfect" => vec![vec![0, 1, 2, 3], vec![0, 1], vec![1, 2], vec![2, 3]],
        "antihole" => vec![vec![1, 2, 3], vec![0, 2], vec![0, 3], vec![0, 1]],
        "biconvex" => vec![vec![0, 1], vec![0, 1, 2], vec![1, 2]],
        "convex_c4free" => vec![vec![0, 1, 2], vec![0], vec![1], vec![2]],
        _ => return Err(Error::UnknownName(name.into())),
    };
    let n_b = if name == "biconvex" || name == "convex_c4free" { 3 } else { 4 };
    BipartiteGraph::from_neighborhoods(n_b, nbhd)
}

/// Vertex labels as drawn in the figures, `(A labels, B labels)`.
pub fn named_labels(name: &str) -> Option<(Vec<&'static str>, Vec<&'static str>)> {
    Some(match name {
        "not_perfect" => (vec!["a", "v1", "v2", "v3"], vec!["v5", "b1", "b2", "v4"]),
        "antihole" => (vec!["a1", "a2", "a3", "a4"], vec!["b1", "b2", "b3", "b4"]),
        "biconvex" => (vec!["v1", "a", "v2"], vec!["v4", "b", "v3"]),
        "convex_c4free" => (vec!["a", "a1", "a2", "a3"], vec!["b1", "b2", "b3"]),
        _ => return None,
    })
}

const GIRTH_RETRIES: usize = 16;

/// Graphs of girth at least 7, verified after construction.
pub fn gen_girth7(kind: Girth7Kind, seed: u64) -> Result<SimpleGraph> {
    let mut rng = rng(seed);
    for _ in 0..GIRTH_RETRIES {
        let h = match kind {
            Girth7Kind::LongCycle { n } => {
                if n < 7 {
                    return Err(Error::InvalidParameter(format!("cycle length {n} is below 7")));
                }
                SimpleGraph::cycle(n)
            }
            Girth7Kind::Tree { branching, depth } => tree(branching, depth),
            Girth7Kind::SubdividedRandom { n, p } => {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::InvalidParameter(format!("edge probability {p}")));
                }
                subdivided_random(n, p, &mut rng)
            }
        };
        if h.girth().at_least(7) {
            return Ok(h);
        }
    }
    Err(Error::RetryExhausted(GIRTH_RETRIES))
}

fn tree(branching: usize, depth: usize) -> SimpleGraph {
    let mut edges = Vec::new();
    let mut level = vec![0];
    let mut n = 1;
    for _ in 0..depth {
        let mut next = Vec::new();
        for &parent in &level {
            for _ in 0..branching {
                edges.push((parent, n));
                next.push(n);
                n += 1;
            }
        }
        level = next;
    }
    SimpleGraph::new(n, &edges).expect("tree edges are valid")
}

fn subdivided_random(n: usize, p: f64, rng: &mut ChaCha8Rng) -> SimpleGraph {
    let mut edges = Vec::new();
    let mut next = n;
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.extend([(u, next), (next, next + 1), (next + 1, v)]);
                next += 2;
            }
        }
    }
    SimpleGraph::new(next, &edges).expect("subdivision edges are valid")
}
