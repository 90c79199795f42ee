//! The meta-graph sketch of a partitioned graph.
//!
//! Each partition splits into its connected components (subgraphs) under
//! the edges internal to the partition. Every subgraph becomes a weighted
//! meta-vertex; every ordered pair of subgraphs joined by cut arcs becomes a
//! directed meta-edge weighted by the number of such arcs.

mod stats;

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{wcc, Graph, VertexId};
use crate::partition::PartitionLayout;
use crate::Provenance;

pub use stats::{meta_diameter, meta_eccentricity, meta_stats, MetaDiameter, MetaStats};

/// A cut arc seen from the subgraph holding its `local` endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemoteArc {
    pub local: VertexId,
    pub remote: VertexId,
    pub remote_subgraph: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub id: usize,
    pub partition: usize,
    pub machine: usize,
    /// Ascending.
    pub vertices: Vec<VertexId>,
    /// Internal edges counted as arcs (both directions).
    pub internal_arc_count: usize,
    pub remote_arcs: Vec<RemoteArc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetaVertex {
    pub id: usize,
    pub partition: usize,
    pub machine: usize,
    pub weight_v: usize,
    pub weight_e: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Locality {
    LocalMachine,
    RemoteMachine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetaEdge {
    pub src: usize,
    pub dst: usize,
    pub weight: usize,
    pub locality: Locality,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetaGraph {
    pub subgraphs: Vec<Subgraph>,
    pub meta_vertices: Vec<MetaVertex>,
    /// Sorted by `(src, dst)`.
    pub meta_edges: Vec<MetaEdge>,
    /// Subgraph id of every vertex.
    pub vertex_subgraph: Vec<usize>,
    pub provenance: Provenance,
}

/// JSON form of a meta-graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaGraphExport {
    pub meta_vertices: Vec<MetaVertex>,
    pub meta_edges: Vec<MetaEdge>,
}

/// Decomposes every partition into connected components and links them.
///
/// Subgraph ids run over partitions in ascending order, and within a
/// partition follow component order (size descending, then smallest vertex).
pub fn build_metagraph(g: &Graph, layout: &PartitionLayout) -> Result<MetaGraph> {
    layout.check_covers(g)?;
    let members = layout.members();
    let per_partition: Vec<Vec<Vec<VertexId>>> = members
        .par_iter()
        .enumerate()
        .map(|(i, verts)| {
            let arcs = verts.iter().flat_map(|&u| {
                g.neighbors(u)
                    .iter()
                    .copied()
                    .filter(move |&w| u < w && layout.partition_of(w) == i)
                    .map(move |w| (u, w))
            });
            wcc(verts, arcs)
        })
        .collect::<Result<_>>()?;

    let mut vertex_subgraph = vec![usize::MAX; g.n()];
    let mut subgraphs = Vec::new();
    for (partition, components) in per_partition.into_iter().enumerate() {
        for vertices in components {
            let id = subgraphs.len();
            for &v in &vertices {
                vertex_subgraph[v] = id;
            }
            subgraphs.push(Subgraph {
                id,
                partition,
                machine: layout.machine_of_partition(partition),
                vertices,
                internal_arc_count: 0,
                remote_arcs: Vec::new(),
            });
        }
    }

    let mut weights: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for sg in &mut subgraphs {
        for &v in &sg.vertices {
            for &w in g.neighbors(v) {
                let other = vertex_subgraph[w];
                if other == sg.id {
                    sg.internal_arc_count += 1;
                } else {
                    sg.remote_arcs.push(RemoteArc {
                        local: v,
                        remote: w,
                        remote_subgraph: other,
                    });
                    *weights.entry((sg.id, other)).or_default() += 1;
                }
            }
        }
    }

    let meta_vertices = subgraphs
        .iter()
        .map(|sg| MetaVertex {
            id: sg.id,
            partition: sg.partition,
            machine: sg.machine,
            weight_v: sg.vertices.len(),
            weight_e: sg.internal_arc_count,
        })
        .collect();
    let meta_edges = weights
        .into_iter()
        .map(|((src, dst), weight)| MetaEdge {
            src,
            dst,
            weight,
            locality: if subgraphs[src].machine == subgraphs[dst].machine {
                Locality::LocalMachine
            } else {
                Locality::RemoteMachine
            },
        })
        .collect();

    Ok(MetaGraph {
        subgraphs,
        meta_vertices,
        meta_edges,
        vertex_subgraph,
        provenance: Provenance {
            graph: g.fingerprint(),
            layout: layout.fingerprint(),
        },
    })
}

impl MetaGraph {
    /// `q`, the number of meta-vertices.
    pub fn q(&self) -> usize {
        self.meta_vertices.len()
    }

    pub fn subgraph_of(&self, v: VertexId) -> usize {
        self.vertex_subgraph[v]
    }

    pub fn total_weight_v(&self) -> usize {
        self.meta_vertices.iter().map(|m| m.weight_v).sum()
    }

    pub fn total_weight_e(&self) -> usize {
        self.meta_vertices.iter().map(|m| m.weight_e).sum()
    }

    pub fn total_meta_edge_weight(&self) -> usize {
        self.meta_edges.iter().map(|e| e.weight).sum()
    }

    /// Σ weights of meta-edges leaving `id` (= its remote arc count).
    pub fn out_weight(&self, id: usize) -> usize {
        self.meta_edges
            .iter()
            .filter(|e| e.src == id)
            .map(|e| e.weight)
            .sum()
    }

    pub fn export(&self) -> MetaGraphExport {
        MetaGraphExport {
            meta_vertices: self.meta_vertices.clone(),
            meta_edges: self.meta_edges.clone(),
        }
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, &self.export())?;
        Ok(())
    }

    /// Undirected neighbor lists over meta-vertices (symmetric pairs merged).
    pub fn undirected_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.q()];
        for e in &self.meta_edges {
            adj[e.src].push(e.dst);
            adj[e.dst].push(e.src);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    pub fn check_provenance(&self, g: &Graph, layout: &PartitionLayout) -> Result<()> {
        let expected = Provenance {
            graph: g.fingerprint(),
            layout: layout.fingerprint(),
        };
        if self.provenance != expected {
            return Err(Error::Provenance(format!(
                "meta-graph built from {:?}, inputs are {:?}",
                self.provenance, expected
            )));
        }
        Ok(())
    }
}
