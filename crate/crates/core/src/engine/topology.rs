use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{Graph, VertexId};
use crate::metagraph::MetaGraph;
use crate::partition::PartitionLayout;
use crate::Provenance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Vertex,
    Subgraph,
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Model::Vertex => "vertex",
            Model::Subgraph => "subgraph",
        })
    }
}

/// Placement of compute units on machines and cores.
#[derive(Debug, Clone)]
pub struct Topology {
    pub(crate) model: Model,
    pub(crate) unit_of_vertex: Vec<usize>,
    pub(crate) unit_machine: Vec<usize>,
    pub(crate) unit_core: Vec<usize>,
    /// Per-invocation cost when the model fixes it (vertex-centric).
    pub(crate) fixed_cost: Option<Vec<u64>>,
    pub(crate) machines: usize,
    pub(crate) cores: usize,
    pub(crate) provenance: Provenance,
}

impl Topology {
    /// One unit per vertex. Partitions on a machine take its cores in
    /// ascending partition order; a vertex runs on its partition's core.
    pub fn vertex(g: &Graph, layout: &PartitionLayout) -> Result<Self> {
        layout.check_covers(g)?;
        let k = layout.cluster().machines;
        let mut next_core = vec![0usize; k];
        let mut partition_core = vec![0usize; layout.p()];
        for (i, core) in partition_core.iter_mut().enumerate() {
            let m = layout.machine_of_partition(i);
            *core = next_core[m];
            next_core[m] += 1;
        }
        let cores = next_core.into_iter().max().unwrap_or(1).max(1);
        Ok(Self {
            model: Model::Vertex,
            unit_of_vertex: (0..g.n()).collect(),
            unit_machine: (0..g.n()).map(|v| layout.machine_of(v)).collect(),
            unit_core: (0..g.n())
                .map(|v| partition_core[layout.partition_of(v)])
                .collect(),
            fixed_cost: Some((0..g.n()).map(|v| 1 + g.degree(v) as u64).collect()),
            machines: k,
            cores,
            provenance: Provenance {
                graph: g.fingerprint(),
                layout: layout.fingerprint(),
            },
        })
    }

    /// One unit per subgraph. On each machine, subgraphs sorted by vertex
    /// count (descending, then id) are dealt round-robin to the cores.
    pub fn subgraph(g: &Graph, layout: &PartitionLayout, mg: &MetaGraph) -> Result<Self> {
        mg.check_provenance(g, layout)?;
        let k = layout.cluster().machines;
        let c = layout.cluster().cores;
        let mut per_machine: Vec<Vec<usize>> = vec![Vec::new(); k];
        for mv in &mg.meta_vertices {
            per_machine[mv.machine].push(mv.id);
        }
        let mut unit_core = vec![0usize; mg.q()];
        for ids in &mut per_machine {
            ids.sort_by_key(|&id| (std::cmp::Reverse(mg.meta_vertices[id].weight_v), id));
            for (slot, &id) in ids.iter().enumerate() {
                unit_core[id] = slot % c;
            }
        }
        Ok(Self {
            model: Model::Subgraph,
            unit_of_vertex: mg.vertex_subgraph.clone(),
            unit_machine: mg.meta_vertices.iter().map(|m| m.machine).collect(),
            unit_core,
            fixed_cost: None,
            machines: k,
            cores: c,
            provenance: mg.provenance.clone(),
        })
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn unit_count(&self) -> usize {
        self.unit_machine.len()
    }

    pub fn unit_of(&self, v: VertexId) -> usize {
        self.unit_of_vertex[v]
    }

    pub fn machine_of_unit(&self, unit: usize) -> usize {
        self.unit_machine[unit]
    }

    pub fn core_of_unit(&self, unit: usize) -> usize {
        self.unit_core[unit]
    }
}
