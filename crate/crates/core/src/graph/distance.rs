use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{components_ordered, Graph, VertexId};
use crate::error::{Error, Result};

/// Largest graph (in vertices) for which exact all-pairs diameter runs.
pub const DEFAULT_EXACT_DIAMETER_CAP: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiameterMode {
    /// Max eccentricity over the largest component, O(n·m).
    Exact,
    /// Double sweep; a lower bound on the exact value.
    Estimate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diameter {
    pub value: usize,
    pub is_lower_bound: bool,
}

/// Hop distances from `source`; `None` for unreachable vertices.
pub fn bfs_distances(g: &Graph, source: VertexId) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.n()];
    let mut queue = VecDeque::new();
    dist[source] = Some(0);
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &w in g.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Max hop distance from `v` within its component.
pub fn eccentricity(g: &Graph, v: VertexId) -> Result<usize> {
    if v >= g.n() {
        return Err(Error::InvalidArgument(format!(
            "vertex {v} out of range for graph with {} vertices",
            g.n()
        )));
    }
    Ok(farthest(g, v).1)
}

/// Vertices of the largest component (size desc, then min id).
pub fn largest_component(g: &Graph) -> Vec<VertexId> {
    components_ordered(g).into_iter().next().unwrap_or_default()
}

pub fn diameter(g: &Graph, mode: DiameterMode) -> Result<Diameter> {
    diameter_with_cap(g, mode, DEFAULT_EXACT_DIAMETER_CAP)
}

/// Diameter of the largest component. Exact mode refuses graphs above `cap`.
pub fn diameter_with_cap(g: &Graph, mode: DiameterMode, cap: usize) -> Result<Diameter> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    let component = largest_component(g);
    match mode {
        DiameterMode::Exact => {
            if g.n() > cap {
                return Err(Error::OverCap {
                    what: "exact diameter",
                    size: g.n(),
                    cap,
                    hint: "use the double-sweep estimate instead",
                });
            }
            let value = component.par_iter().map(|&v| farthest(g, v).1).max().unwrap_or(0);
            Ok(Diameter {
                value,
                is_lower_bound: false,
            })
        }
        DiameterMode::Estimate => {
            let (far, _) = farthest(g, component[0]);
            let (_, value) = farthest(g, far);
            Ok(Diameter {
                value,
                is_lower_bound: true,
            })
        }
    }
}

/// Farthest vertex from `source` (lowest id among ties) and its distance.
fn farthest(g: &Graph, source: VertexId) -> (VertexId, usize) {
    let dist = bfs_distances(g, source);
    let mut best = (source, 0);
    for (v, d) in dist.iter().enumerate() {
        if let Some(d) = *d {
            if d > best.1 {
                best = (v, d);
            }
        }
    }
    best
}
