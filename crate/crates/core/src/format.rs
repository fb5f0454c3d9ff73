//! Line-oriented text formats.
//!
//! Bipartite graphs:
//!
//! ```text
//! c optional comment
//! p bip <n_a> <n_b> <m>
//! e <a-index> <b-index>      (m lines, 0-based)
//! ```
//!
//! General graphs use `p gen <n> <m>` followed by `e <u> <v>` lines.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, SimpleGraph};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

struct Parsed {
    sizes: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

fn parse_lines(text: &str, expected_kind: &str, n_sizes: usize) -> Result<Parsed> {
    let mut header: Option<(Vec<usize>, usize)> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("p") => {
                if header.is_some() {
                    return Err(parse_err(lineno, "duplicate problem line"));
                }
                let kind = tok.next().ok_or_else(|| parse_err(lineno, "missing format kind"))?;
                if kind != expected_kind {
                    return Err(parse_err(
                        lineno,
                        format!("expected `p {expected_kind}`, found `p {kind}`"),
                    ));
                }
                let nums = tok
                    .map(|t| t.parse::<usize>().map_err(|_| parse_err(lineno, format!("bad integer `{t}`"))))
                    .collect::<Result<Vec<_>>>()?;
                if nums.len() != n_sizes + 1 {
                    return Err(parse_err(
                        lineno,
                        format!("`p {kind}` takes {} integers", n_sizes + 1),
                    ));
                }
                header = Some((nums[..n_sizes].to_vec(), nums[n_sizes]));
            }
            Some("e") => {
                if header.is_none() {
                    return Err(parse_err(lineno, "edge before problem line"));
                }
                let nums = tok
                    .map(|t| t.parse::<usize>().map_err(|_| parse_err(lineno, format!("bad integer `{t}`"))))
                    .collect::<Result<Vec<_>>>()?;
                if nums.len() != 2 {
                    return Err(parse_err(lineno, "edge line takes two integers"));
                }
                edges.push((nums[0], nums[1]));
            }
            Some(other) => return Err(parse_err(lineno, format!("unknown line type `{other}`"))),
            None => unreachable!(),
        }
    }
    let (sizes, declared_m) = header.ok_or_else(|| parse_err(0, "missing problem line"))?;
    if edges.len() != declared_m {
        return Err(parse_err(
            0,
            format!("header declares {declared_m} edges, found {}", edges.len()),
        ));
    }
    Ok(Parsed { sizes, edges })
}

pub fn parse_bipartite(text: &str) -> Result<BipartiteGraph> {
    let p = parse_lines(text, "bip", 2)?;
    BipartiteGraph::new(p.sizes[0], p.sizes[1], &p.edges)
}

pub fn write_bipartite(g: &BipartiteGraph) -> String {
    let mut out = String::new();
    writeln!(out, "p bip {} {} {}", g.n_a(), g.n_b(), g.edge_count()).unwrap();
    for (a, b) in g.edges() {
        writeln!(out, "e {a} {b}").unwrap();
    }
    out
}

pub fn parse_general(text: &str) -> Result<SimpleGraph> {
    let p = parse_lines(text, "gen", 1)?;
    SimpleGraph::new(p.sizes[0], &p.edges)
}

pub fn write_general(h: &SimpleGraph) -> String {
    let mut out = String::new();
    writeln!(out, "p gen {} {}", h.n(), h.edge_count()).unwrap();
    for (u, v) in h.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Side;

    #[test]
    fn parses_with_comments() {
        let text = "c a path\np bip 2 1 2\ne 0 0\nc mid\ne 1 0\n";
        let g = parse_bipartite(text).unwrap();
        assert_eq!((g.n_a(), g.n_b(), g.edge_count()), (2, 1, 2));
        assert_eq!(write_bipartite(&g), "p bip 2 1 2\ne 0 0\ne 1 0\n");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_bipartite("e 0 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(parse_bipartite("p bip 1 1 2\ne 0 0\n").is_err());
        assert!(parse_bipartite("p gen 2 1\ne 0 1\n").is_err());
        assert!(parse_bipartite("p bip 1 1 1\ne 0 x\n").is_err());
        assert!(matches!(
            parse_bipartite("p bip 1 1 1\ne 0 3\n"),
            Err(Error::IndexOutOfRange { side: Side::B, .. })
        ));
    }

    #[test]
    fn general_roundtrip() {
        let c5 = SimpleGraph::cycle(5);
        let text = write_general(&c5);
        assert_eq!(parse_general(&text).unwrap(), c5);
        assert!(parse_general("p gen 2 1\ne 1 1\n").is_err());
    }
}
