//! Partition map files: `label<TAB>partition` lines (in dense-id order) plus
//! a JSON sidecar with the layout's parameters.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{ClusterSpec, PartitionLayout, Strategy};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionSidecar {
    pub strategy: Strategy,
    pub k: usize,
    pub c: usize,
    pub p: usize,
    pub seed: u64,
    pub balance_factor: f64,
    pub partition_to_machine: Vec<usize>,
    pub over_balance: bool,
}

impl From<&PartitionLayout> for PartitionSidecar {
    fn from(layout: &PartitionLayout) -> Self {
        Self {
            strategy: layout.strategy(),
            k: layout.cluster().machines,
            c: layout.cluster().cores,
            p: layout.p(),
            seed: layout.seed(),
            balance_factor: layout.balance_factor(),
            partition_to_machine: layout.partition_to_machine().to_vec(),
            over_balance: layout.over_balance(),
        }
    }
}

pub fn write_partition<M: Write, S: Write>(
    g: &Graph,
    layout: &PartitionLayout,
    mut map: M,
    sidecar: S,
) -> Result<()> {
    layout.check_covers(g)?;
    for v in 0..g.n() {
        writeln!(map, "{}\t{}", g.label(v), layout.partition_of(v))?;
    }
    map.flush()?;
    serde_json::to_writer_pretty(sidecar, &PartitionSidecar::from(layout))?;
    Ok(())
}

/// Reads a map written by [`write_partition`] against the graph it was built
/// for. Every vertex must be assigned exactly once.
pub fn read_partition<M: BufRead>(g: &Graph, map: M, sidecar: &PartitionSidecar) -> Result<PartitionLayout> {
    let index = g.label_index();
    let mut assignment = vec![usize::MAX; g.n()];
    for (i, line) in map.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse {
            source_name: "partition map".into(),
            line: i + 1,
            message,
        };
        let mut tokens = trimmed.split_whitespace();
        let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(err(format!("expected `vertex partition`, got {trimmed:?}")));
        };
        let label: u64 = a.parse().map_err(|_| err(format!("invalid vertex id {a:?}")))?;
        let partition: usize = b
            .parse()
            .map_err(|_| err(format!("invalid partition id {b:?}")))?;
        let v = *index
            .get(&label)
            .ok_or_else(|| err(format!("vertex {label} is not in the graph")))?;
        if assignment[v] != usize::MAX {
            return Err(err(format!("vertex {label} assigned twice")));
        }
        assignment[v] = partition;
    }
    if let Some(v) = assignment.iter().position(|&p| p == usize::MAX) {
        return Err(Error::Integrity(format!(
            "vertex {} has no partition",
            g.label(v)
        )));
    }
    let layout = PartitionLayout::new(
        sidecar.strategy,
        ClusterSpec::new(sidecar.k, sidecar.c)?,
        assignment,
        sidecar.partition_to_machine.clone(),
        sidecar.balance_factor,
        sidecar.seed,
    )?;
    if layout.p() != sidecar.p {
        return Err(Error::Integrity(format!(
            "sidecar declares p={} but lists {} partitions",
            sidecar.p,
            layout.p()
        )));
    }
    Ok(layout)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_grid, read_edge_list};
    use crate::partition::strategy_fp;

    #[test]
    fn round_trip_through_text() {
        let g = generate_grid(6, 6).unwrap();
        let layout = strategy_fp(&g, ClusterSpec::new(2, 2).unwrap(), 1.03, 4).unwrap();
        let (mut map, mut side) = (Vec::new(), Vec::new());
        write_partition(&g, &layout, &mut map, &mut side).unwrap();
        let sidecar: PartitionSidecar = serde_json::from_slice(&side).unwrap();
        let back = read_partition(&g, map.as_slice(), &sidecar).unwrap();
        assert_eq!(back, layout);
        assert_eq!(back.fingerprint(), layout.fingerprint());
    }

    #[test]
    fn labels_not_dense_ids() {
        let g = read_edge_list("10 20\n20 30\n".as_bytes(), "t").unwrap();
        let sidecar = PartitionSidecar {
            strategy: Strategy::Dp,
            k: 2,
            c: 1,
            p: 2,
            seed: 0,
            balance_factor: 1.03,
            partition_to_machine: vec![0, 1],
            over_balance: false,
        };
        let layout = read_partition(&g, "30\t1\n10\t0\n20\t0\n".as_bytes(), &sidecar).unwrap();
        assert_eq!(layout.vertex_to_partition(), &[0, 0, 1]);
        assert!(read_partition(&g, "10\t0\n20\t0\n".as_bytes(), &sidecar).is_err());
        assert!(read_partition(&g, "10\t0\n10\t0\n20\t0\n30\t1\n".as_bytes(), &sidecar).is_err());
        assert!(read_partition(&g, "99\t0\n".as_bytes(), &sidecar).is_err());
    }
}
