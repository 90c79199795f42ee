use std::collections::VecDeque;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::MetaGraph;
use crate::error::Result;
use crate::graph::{Graph, UnionFind};
use crate::partition::{edge_cut, PartitionLayout, Strategy};

/// One row of partition-quality statistics for a meta-graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaStats {
    pub strategy: Strategy,
    pub p: usize,
    pub q: usize,
    /// Directed meta-edges, `|Ê|`.
    pub meta_edge_count: usize,
    /// Fraction of vertices inside the `p` largest subgraphs.
    pub wcc_pct: f64,
    pub meta_diameter: usize,
    pub meta_components: usize,
    /// Fraction of undirected edges cut.
    pub cut_pct: f64,
}

pub const META_STATS_HEADER: [&str; 7] = ["Strategy", "Parts", "|V̂|", "WCC%", "dia", "|Ê|", "Cut%"];

impl MetaStats {
    pub fn csv_record(&self) -> [String; 7] {
        [
            self.strategy.to_string(),
            self.p.to_string(),
            self.q.to_string(),
            format!("{:.3}", self.wcc_pct),
            self.meta_diameter.to_string(),
            self.meta_edge_count.to_string(),
            format!("{:.3}", self.cut_pct),
        ]
    }

    pub fn write_csv<W: Write>(rows: &[MetaStats], out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(META_STATS_HEADER)?;
        for row in rows {
            w.write_record(row.csv_record())?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetaDiameter {
    /// Diameter of the largest meta-component, in meta-edge hops.
    pub diameter: usize,
    /// Number of weakly connected meta-components.
    pub components: usize,
}

pub fn meta_stats(g: &Graph, mg: &MetaGraph, layout: &PartitionLayout) -> Result<MetaStats> {
    layout.check_covers(g)?;
    let mut sizes: Vec<usize> = mg.meta_vertices.iter().map(|m| m.weight_v).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let top: usize = sizes.iter().take(layout.p()).sum();
    let diameter = meta_diameter(mg);
    Ok(MetaStats {
        strategy: layout.strategy(),
        p: layout.p(),
        q: mg.q(),
        meta_edge_count: mg.meta_edges.len(),
        wcc_pct: if g.n() == 0 {
            0.0
        } else {
            top as f64 / g.n() as f64
        },
        meta_diameter: diameter.diameter,
        meta_components: diameter.components,
        cut_pct: edge_cut(g, layout).1,
    })
}

/// Exact diameter of the largest weakly connected meta-component, treating
/// each symmetric pair of meta-edges as one undirected hop.
pub fn meta_diameter(mg: &MetaGraph) -> MetaDiameter {
    let q = mg.q();
    if q == 0 {
        return MetaDiameter {
            diameter: 0,
            components: 0,
        };
    }
    let adj = mg.undirected_adjacency();
    let mut uf = UnionFind::new(q);
    for e in &mg.meta_edges {
        uf.union(e.src, e.dst);
    }
    let mut size = vec![0usize; q];
    let mut min_id = vec![usize::MAX; q];
    for v in 0..q {
        let r = uf.find(v);
        size[r] += 1;
        min_id[r] = min_id[r].min(v);
    }
    let roots: Vec<usize> = (0..q).filter(|&v| uf.find(v) == v).collect();
    let largest = *roots
        .iter()
        .max_by(|&&a, &&b| size[a].cmp(&size[b]).then(min_id[b].cmp(&min_id[a])))
        .unwrap();
    let members: Vec<usize> = (0..q).filter(|&v| uf.find(v) == largest).collect();
    let diameter = members.par_iter().map(|&s| bfs_max(&adj, s)).max().unwrap_or(0);
    MetaDiameter {
        diameter,
        components: roots.len(),
    }
}

/// Eccentricity of meta-vertex `id` within its meta-component.
pub fn meta_eccentricity(mg: &MetaGraph, id: usize) -> usize {
    bfs_max(&mg.undirected_adjacency(), id)
}

fn bfs_max(adj: &[Vec<usize>], source: usize) -> usize {
    let mut dist = vec![usize::MAX; adj.len()];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    let mut max = 0;
    while let Some(u) = queue.pop_front() {
        max = max.max(dist[u]);
        for &w in &adj[u] {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    max
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{diameter, generate_grid, DiameterMode};
    use crate::metagraph::build_metagraph;
    use crate::metagraph::tests::p4_layout;
    use crate::partition::{partition_hash, strategy_fp, ClusterSpec};

    #[test]
    fn p4_row() {
        let (g, layout) = p4_layout();
        let mg = build_metagraph(&g, &layout).unwrap();
        let stats = meta_stats(&g, &mg, &layout).unwrap();
        assert_eq!(stats.csv_record().join(","), "DP,2,2,1.000,1,2,0.333");
        let mut buf = Vec::new();
        MetaStats::write_csv(&[stats], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "Strategy,Parts,|V̂|,WCC%,dia,|Ê|,Cut%\nDP,2,2,1.000,1,2,0.333\n"
        );
    }

    #[test]
    fn single_meta_vertex() {
        let g = generate_grid(3, 3).unwrap();
        let layout = partition_hash(&g, ClusterSpec::new(1, 1).unwrap()).unwrap();
        let mg = build_metagraph(&g, &layout).unwrap();
        assert_eq!(
            meta_diameter(&mg),
            MetaDiameter {
                diameter: 0,
                components: 1
            }
        );
    }

    #[test]
    fn flat_grid_meta_diameter_bounded() {
        let g = generate_grid(16, 16).unwrap();
        let layout = strategy_fp(&g, ClusterSpec::new(2, 2).unwrap(), 1.03, 2).unwrap();
        let mg = build_metagraph(&g, &layout).unwrap();
        let d = meta_diameter(&mg).diameter;
        assert!(d <= diameter(&g, DiameterMode::Exact).unwrap().value);
        assert!(d >= 1);
    }

    #[test]
    fn disconnected_meta_components_counted() {
        // two disjoint paths, each its own partition: no meta-edges
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let layout = PartitionLayout::new(
            Strategy::Dp,
            ClusterSpec::new(2, 1).unwrap(),
            vec![0, 0, 1, 1],
            vec![0, 1],
            1.03,
            0,
        )
        .unwrap();
        let mg = build_metagraph(&g, &layout).unwrap();
        assert_eq!(
            meta_diameter(&mg),
            MetaDiameter {
                diameter: 0,
                components: 2
            }
        );
    }
}
