//! Partition large undirected graphs, build their meta-graph sketch, and
//! measure vertex-centric vs. subgraph-centric PageRank and BFS on a
//! deterministic bulk-synchronous simulator.
//!
//! The pipeline is: [`graph`] (load / generate) → [`partition`] (DP, FP, HP,
//! HA layouts) → [`metagraph`] (subgraphs and meta-edges) → [`engine`] running
//! the programs in [`algorithms`] → [`analyzer`] checking the analytical
//! bounds against what the simulator measured.

pub mod algorithms;
pub mod analyzer;
pub mod engine;
pub mod error;
pub mod graph;
pub mod metagraph;
pub mod partition;
pub mod seed;

pub use algorithms::{
    bfs_subgraph, bfs_vertex, pr_subgraph, pr_vertex, BfsRun, BfsState, PrRun, PrState, DEFAULT_DAMPING,
    DEFAULT_ITERATIONS,
};
pub use analyzer::{
    correlation_report, expected_cost, validate, Algo, BoundsReport, Check, CheckStatus, CorrelationReport,
    CorrelationRun, ExpectedCost, Relation, ValidationInput,
};
pub use engine::{Context, Envelope, Model, Program, ProgramError, RunOptions, SimMetrics, SuperstepRecord};
pub use error::{Error, Result};
pub use graph::{DegreeCdf, Diameter, DiameterMode, Graph, PowerlawParams, VertexId};
pub use metagraph::{
    build_metagraph, meta_diameter, meta_stats, MetaEdge, MetaGraph, MetaStats, MetaVertex, Subgraph,
};
pub use partition::{
    donath_bound, edge_cut, mincut_oracle, partition_balanced, partition_hash, strategy_dp, strategy_fp,
    strategy_hp, ClusterSpec, PartitionLayout, Strategy, DEFAULT_BALANCE_FACTOR,
};

/// Identifies which graph and which layout an artifact was derived from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Provenance {
    pub graph: String,
    pub layout: String,
}
