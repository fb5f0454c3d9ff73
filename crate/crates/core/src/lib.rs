//! Coloring squares of convex bipartite graphs.
//!
//! The central routine is [`coloring::color_square_convex`], which colors the
//! square of a convex bipartite graph with at most `floor(3 omega / 2)` colors.
//! Exact solvers, structural checks and instance generators support it.

pub mod bitset;
pub mod coloring;
pub mod convexity;
pub mod error;
pub mod experiment;
pub mod format;
pub mod generators;
pub mod graph;
pub mod oracle;
pub mod reduction;
pub mod structure;

pub use coloring::{
    color_square_convex, verify_coloring, ColorOptions, ColorReport, ColorStats, Coloring,
};
pub use convexity::{
    recognize_biconvex, recognize_convex, BiconvexLayout, ConvexLayout, NonConvexWitness,
};
pub use error::{Error, Result};
pub use graph::{half_square, square, BipartiteGraph, Girth, Side, SimpleGraph, VertexRef};
