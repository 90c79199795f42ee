//! Immutable undirected simple graphs in CSR form, plus loaders, generators,
//! connected components, distances and degree statistics.

mod components;
mod degree;
mod distance;
mod generate;
mod io;

use std::collections::HashMap;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub use components::{components_ordered, wcc, UnionFind};
pub use degree::{degree_cdf, fit_powerlaw, DegreeCdf, PowerlawParams};
pub use distance::{
    bfs_distances, diameter, diameter_with_cap, eccentricity, largest_component, Diameter, DiameterMode,
    DEFAULT_EXACT_DIAMETER_CAP,
};
pub use generate::{
    complete_graph, cycle_graph, generate_gnm, generate_grid, generate_powerlaw, path_graph,
    random_permutation, star_graph,
};
pub use io::{load_edge_list, read_edge_list, write_edge_list};

pub type VertexId = usize;

/// Undirected simple graph with dense ids `0..n`.
///
/// Every undirected edge is stored as two arcs. Neighbor lists are sorted and
/// free of duplicates and self-loops. `labels[v]` is the id `v` had in the
/// source it was loaded from (identity for generated graphs).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
    labels: Vec<u64>,
}

impl Graph {
    /// Builds a graph on `n` vertices from undirected edges. Edges are
    /// symmetrized; self-loops and duplicates are dropped.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut adjacency: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Integrity(format!(
                    "edge ({u}, {v}) references a vertex outside 0..{n}"
                )));
            }
            if u == v {
                continue;
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            targets.extend_from_slice(list);
            offsets.push(targets.len());
        }
        Ok(Graph {
            offsets,
            targets,
            labels: (0..n as u64).collect(),
        })
    }

    /// Replaces the label table. `labels` must hold `n` distinct values.
    pub fn with_labels(mut self, labels: Vec<u64>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::Integrity(format!(
                "label table has {} entries for {} vertices",
                labels.len(),
                self.n()
            )));
        }
        let mut sorted = labels.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Integrity("duplicate vertex labels".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of stored arcs, `2m`.
    pub fn directed_edge_count(&self) -> usize {
        self.targets.len()
    }

    /// Number of undirected edges, `m`.
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> u64 {
        self.labels[v]
    }

    /// Label → dense id lookup table.
    pub fn label_index(&self) -> HashMap<u64, VertexId> {
        self.labels
            .iter()
            .enumerate()
            .map(|(v, &label)| (label, v))
            .collect()
    }

    /// Each undirected edge once as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Subgraph induced by `vertices` (ascending, distinct). Vertex `i` of the
    /// result is `vertices[i]`; labels are carried over.
    pub fn induced(&self, vertices: &[VertexId]) -> Result<Graph> {
        let mut local = HashMap::with_capacity(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            if v >= self.n() {
                return Err(Error::Integrity(format!("vertex {v} out of range")));
            }
            local.insert(v, i);
        }
        let edges = vertices.iter().enumerate().flat_map(|(i, &v)| {
            self.neighbors(v)
                .iter()
                .filter_map(|w| local.get(w).copied())
                .filter(move |&j| i < j)
                .map(move |j| (i, j))
        });
        let g = Graph::from_edges(vertices.len(), edges.collect::<Vec<_>>())?;
        g.with_labels(vertices.iter().map(|&v| self.labels[v]).collect())
    }

    /// Renames vertex `v` to `permutation[v]`. Labels follow their vertices.
    pub fn relabeled(&self, permutation: &[VertexId]) -> Result<Graph> {
        let n = self.n();
        if permutation.len() != n {
            return Err(Error::InvalidArgument(format!(
                "permutation has {} entries for {} vertices",
                permutation.len(),
                n
            )));
        }
        let mut seen = vec![false; n];
        for &p in permutation {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
        }
        let g = Graph::from_edges(
            n,
            self.edges()
                .map(|(u, v)| (permutation[u], permutation[v]))
                .collect::<Vec<_>>(),
        )?;
        let mut labels = vec![0; n];
        for v in 0..n {
            labels[permutation[v]] = self.labels[v];
        }
        g.with_labels(labels)
    }

    /// Content hash over structure and labels (16 hex digits).
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update((self.n() as u64).to_le_bytes());
        for &o in &self.offsets {
            hasher.update((o as u64).to_le_bytes());
        }
        for &t in &self.targets {
            hasher.update((t as u64).to_le_bytes());
        }
        for &l in &self.labels {
            hasher.update(l.to_le_bytes());
        }
        let digest = hasher.finalize();
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edges_symmetrizes_and_dedups() {
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (1, 1), (2, 1)]).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.directed_edge_count(), 4);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert!(g.has_edge(2, 1));
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn out_of_range_edge_is_an_integrity_error() {
        assert!(matches!(Graph::from_edges(2, [(0, 2)]), Err(Error::Integrity(_))));
    }

    #[test]
    fn induced_keeps_internal_edges_only() {
        let g = path_graph(5).unwrap();
        let sub = g.induced(&[1, 2, 4]).unwrap();
        assert_eq!(sub.n(), 3);
        assert_eq!(sub.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(sub.labels(), &[1, 2, 4]);
    }

    #[test]
    fn relabel_moves_labels_with_vertices() {
        let g = path_graph(3).unwrap();
        let r = g.relabeled(&[2, 0, 1]).unwrap();
        // old 0-1-2 becomes 2-0-1
        assert!(r.has_edge(2, 0) && r.has_edge(0, 1) && !r.has_edge(2, 1));
        assert_eq!(r.labels(), &[1, 2, 0]);
        assert!(g.relabeled(&[0, 0, 1]).is_err());
    }

    #[test]
    fn fingerprint_tracks_structure() {
        let a = path_graph(4).unwrap();
        let b = cycle_graph(4).unwrap();
        assert_eq!(a.fingerprint(), path_graph(4).unwrap().fingerprint());
        assert_ne!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.fingerprint().len(), 16);
    }
}
