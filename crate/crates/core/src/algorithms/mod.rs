//! PageRank and BFS as vertex-centric and subgraph-centric programs.

mod bfs;
mod pagerank;

use std::io::Write;

use crate::error::Result;
use crate::graph::Graph;

pub use bfs::{bfs_subgraph, bfs_vertex, BfsRun, BfsState};
pub use pagerank::{pr_subgraph, pr_vertex, PrRun, PrState, DEFAULT_DAMPING, DEFAULT_ITERATIONS};

/// Writes `label<TAB>rank` lines in dense-id order.
pub fn write_ranks<W: Write>(g: &Graph, rank: &[f64], mut out: W) -> Result<()> {
    for (v, r) in rank.iter().enumerate() {
        writeln!(out, "{}\t{r:.12}", g.label(v))?;
    }
    out.flush()?;
    Ok(())
}

/// Writes `label<TAB>distance` lines; unreached vertices get `inf`.
pub fn write_distances<W: Write>(g: &Graph, dist: &[Option<u32>], mut out: W) -> Result<()> {
    for (v, d) in dist.iter().enumerate() {
        match d {
            Some(d) => writeln!(out, "{}\t{d}", g.label(v))?,
            None => writeln!(out, "{}\tinf", g.label(v))?,
        }
    }
    out.flush()?;
    Ok(())
}
