//! Partitioning strategies over a `k`-machine × `c`-core cluster.
//!
//! * DP: `k` balanced parts, part `i` on machine `i`.
//! * FP: `k·c` balanced parts dealt `c` per machine in seeded random order.
//! * HP: DP's `k` parts, each split again into `c` balanced parts.
//! * HA: vertex `v` goes to part `v mod k·c`; part `i` on machine `⌊i/c⌋`.

mod io;
mod multilevel;
mod oracle;
mod spectral;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::seed;

pub use io::{read_partition, write_partition, PartitionSidecar};
pub use oracle::{mincut_oracle, MINCUT_ORACLE_CAP};
pub use spectral::{
    donath_bound, jacobi_eigenvalues, laplacian, size_aware_bound, DonathBound, DONATH_CAP, JACOBI_TOLERANCE,
};

pub const DEFAULT_BALANCE_FACTOR: f64 = 1.03;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    #[serde(rename = "DP")]
    Dp,
    #[serde(rename = "FP")]
    Fp,
    #[serde(rename = "HP")]
    Hp,
    #[serde(rename = "HA")]
    Ha,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy::Dp, Strategy::Fp, Strategy::Hp, Strategy::Ha];

    pub fn is_balanced(self) -> bool {
        !matches!(self, Strategy::Ha)
    }

    /// Partition count for this strategy on `cluster`.
    pub fn partition_count(self, cluster: ClusterSpec) -> usize {
        match self {
            Strategy::Dp => cluster.machines,
            _ => cluster.machines * cluster.cores,
        }
    }

    pub fn apply(
        self,
        g: &Graph,
        cluster: ClusterSpec,
        balance_factor: f64,
        seed: u64,
    ) -> Result<PartitionLayout> {
        match self {
            Strategy::Dp => strategy_dp(g, cluster, balance_factor, seed),
            Strategy::Fp => strategy_fp(g, cluster, balance_factor, seed),
            Strategy::Hp => strategy_hp(g, cluster, balance_factor, seed),
            Strategy::Ha => partition_hash(g, cluster),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Dp => "DP",
            Strategy::Fp => "FP",
            Strategy::Hp => "HP",
            Strategy::Ha => "HA",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dp" => Ok(Strategy::Dp),
            "fp" => Ok(Strategy::Fp),
            "hp" => Ok(Strategy::Hp),
            "ha" => Ok(Strategy::Ha),
            _ => Err(Error::InvalidArgument(format!(
                "unknown strategy {s:?} (expected dp, fp, hp or ha)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterSpec {
    pub machines: usize,
    pub cores: usize,
}

impl ClusterSpec {
    pub fn new(machines: usize, cores: usize) -> Result<Self> {
        if machines == 0 || cores == 0 {
            return Err(Error::InvalidArgument(format!(
                "cluster needs at least one machine and one core, got {machines}x{cores}"
            )));
        }
        Ok(Self { machines, cores })
    }
}

/// Assignment of every vertex to a partition and every partition to a machine.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionLayout {
    strategy: Strategy,
    cluster: ClusterSpec,
    vertex_to_partition: Vec<usize>,
    partition_to_machine: Vec<usize>,
    balance_factor: f64,
    seed: u64,
    over_balance: bool,
}

impl PartitionLayout {
    /// Validates and builds a layout. `over_balance` is derived: it is set
    /// when a balanced strategy's largest part exceeds its cap.
    pub fn new(
        strategy: Strategy,
        cluster: ClusterSpec,
        vertex_to_partition: Vec<usize>,
        partition_to_machine: Vec<usize>,
        balance_factor: f64,
        seed: u64,
    ) -> Result<Self> {
        let p = partition_to_machine.len();
        if p != strategy.partition_count(cluster) {
            return Err(Error::Integrity(format!(
                "{strategy} on {}x{} needs {} partitions, got {p}",
                cluster.machines,
                cluster.cores,
                strategy.partition_count(cluster)
            )));
        }
        if let Some(&bad) = vertex_to_partition.iter().find(|&&i| i >= p) {
            return Err(Error::Integrity(format!(
                "partition id {bad} out of range 0..{p}"
            )));
        }
        let mut per_machine = vec![0usize; cluster.machines];
        for &m in &partition_to_machine {
            if m >= cluster.machines {
                return Err(Error::Integrity(format!("machine id {m} out of range")));
            }
            per_machine[m] += 1;
        }
        let expected = if strategy == Strategy::Dp {
            1
        } else {
            cluster.cores
        };
        if per_machine.iter().any(|&c| c != expected) {
            return Err(Error::Integrity(format!(
                "{strategy} must place exactly {expected} partition(s) on every machine"
            )));
        }
        if strategy == Strategy::Dp && partition_to_machine.iter().enumerate().any(|(i, &m)| i != m) {
            return Err(Error::Integrity("DP must place partition i on machine i".into()));
        }
        let mut layout = Self {
            strategy,
            cluster,
            vertex_to_partition,
            partition_to_machine,
            balance_factor,
            seed,
            over_balance: false,
        };
        layout.over_balance = strategy.is_balanced() && layout.max_partition_size() > layout.balance_cap();
        Ok(layout)
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn cluster(&self) -> ClusterSpec {
        self.cluster
    }

    pub fn p(&self) -> usize {
        self.partition_to_machine.len()
    }

    pub fn n(&self) -> usize {
        self.vertex_to_partition.len()
    }

    pub fn partition_of(&self, v: VertexId) -> usize {
        self.vertex_to_partition[v]
    }

    pub fn machine_of_partition(&self, partition: usize) -> usize {
        self.partition_to_machine[partition]
    }

    pub fn machine_of(&self, v: VertexId) -> usize {
        self.partition_to_machine[self.vertex_to_partition[v]]
    }

    pub fn vertex_to_partition(&self) -> &[usize] {
        &self.vertex_to_partition
    }

    pub fn partition_to_machine(&self) -> &[usize] {
        &self.partition_to_machine
    }

    pub fn balance_factor(&self) -> f64 {
        self.balance_factor
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn over_balance(&self) -> bool {
        self.over_balance
    }

    pub fn partition_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.p()];
        for &i in &self.vertex_to_partition {
            sizes[i] += 1;
        }
        sizes
    }

    pub fn max_partition_size(&self) -> usize {
        self.partition_sizes().into_iter().max().unwrap_or(0)
    }

    /// `ceil(balance_factor · n / p)`.
    pub fn balance_cap(&self) -> usize {
        balance_cap(self.n(), self.p(), self.balance_factor)
    }

    /// Vertices of each partition, ascending.
    pub fn members(&self) -> Vec<Vec<VertexId>> {
        let mut members = vec![Vec::new(); self.p()];
        for (v, &i) in self.vertex_to_partition.iter().enumerate() {
            members[i].push(v);
        }
        members
    }

    /// Checks that this layout was built for a graph with `g.n()` vertices.
    pub fn check_covers(&self, g: &Graph) -> Result<()> {
        if self.n() != g.n() {
            return Err(Error::Integrity(format!(
                "layout covers {} vertices, graph has {}",
                self.n(),
                g.n()
            )));
        }
        Ok(())
    }

    /// Content hash of the serialized layout (16 hex digits).
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.strategy.to_string().as_bytes());
        for x in [
            self.cluster.machines as u64,
            self.cluster.cores as u64,
            self.seed,
            self.balance_factor.to_bits(),
        ] {
            hasher.update(x.to_le_bytes());
        }
        for &i in self.vertex_to_partition.iter().chain(&self.partition_to_machine) {
            hasher.update((i as u64).to_le_bytes());
        }
        let digest = hasher.finalize();
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// `ceil(balance_factor · n / p)`, guarded against float noise on exact
/// quotients.
pub fn balance_cap(n: usize, p: usize, balance_factor: f64) -> usize {
    let raw = balance_factor * n as f64 / p as f64;
    ((raw - 1e-9).ceil() as usize).max(1)
}

/// Result of [`partition_balanced`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedPartition {
    pub assignment: Vec<usize>,
    pub over_balance: bool,
}

/// Multilevel vertex-balanced `p`-way partition minimizing the edge cut.
///
/// Heavy-edge matching coarsens to at most `max(30p, 200)` vertices, greedy
/// graph growing seeds `p` parts, and boundary FM refinement (≤ 10 passes)
/// runs at every level on the way back up. Every part is non-empty; the
/// largest part is at most `ceil(balance_factor · n / p)` unless
/// `over_balance` is set.
pub fn partition_balanced(g: &Graph, p: usize, balance_factor: f64, seed: u64) -> Result<BalancedPartition> {
    check_balance_args(g.n(), p, balance_factor)?;
    let cap = balance_cap(g.n(), p, balance_factor);
    Ok(partition_with_cap(g, p, cap, seed))
}

fn partition_with_cap(g: &Graph, p: usize, cap: usize, seed: u64) -> BalancedPartition {
    let assignment = multilevel::multilevel(g, p, cap as u64, seed);
    let mut sizes = vec![0usize; p];
    for &i in &assignment {
        sizes[i] += 1;
    }
    BalancedPartition {
        over_balance: sizes.iter().any(|&s| s > cap),
        assignment,
    }
}

fn check_balance_args(n: usize, p: usize, balance_factor: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if p == 0 || p > n {
        return Err(Error::InvalidArgument(format!(
            "partition count must satisfy 1 <= p <= n, got p={p}, n={n}"
        )));
    }
    if balance_factor.is_nan() || balance_factor < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "balance factor must be >= 1.0, got {balance_factor}"
        )));
    }
    Ok(())
}

pub fn strategy_dp(
    g: &Graph,
    cluster: ClusterSpec,
    balance_factor: f64,
    seed: u64,
) -> Result<PartitionLayout> {
    let parts = partition_balanced(g, cluster.machines, balance_factor, seed)?;
    PartitionLayout::new(
        Strategy::Dp,
        cluster,
        parts.assignment,
        (0..cluster.machines).collect(),
        balance_factor,
        seed,
    )
}

pub fn strategy_fp(
    g: &Graph,
    cluster: ClusterSpec,
    balance_factor: f64,
    seed: u64,
) -> Result<PartitionLayout> {
    let p = cluster.machines * cluster.cores;
    let parts = partition_balanced(g, p, balance_factor, seed)?;
    let mut deal: Vec<usize> = (0..p).collect();
    deal.shuffle(&mut ChaCha8Rng::seed_from_u64(seed::derive(seed, "fp-deal")));
    let mut partition_to_machine = vec![0; p];
    for (slot, &partition) in deal.iter().enumerate() {
        partition_to_machine[partition] = slot / cluster.cores;
    }
    PartitionLayout::new(
        Strategy::Fp,
        cluster,
        parts.assignment,
        partition_to_machine,
        balance_factor,
        seed,
    )
}

/// Two-level split. The first level is exactly [`strategy_dp`]'s map for the
/// same seed; machine `m`'s vertices are then split into partitions
/// `m·c .. m·c + c`, all held to the global cap `ceil(bf · n / (k·c))`.
pub fn strategy_hp(
    g: &Graph,
    cluster: ClusterSpec,
    balance_factor: f64,
    seed: u64,
) -> Result<PartitionLayout> {
    check_balance_args(g.n(), cluster.machines * cluster.cores, balance_factor)?;
    let first = partition_balanced(g, cluster.machines, balance_factor, seed)?;
    split_machines(g, &first.assignment, cluster, balance_factor, seed)
}

/// Second level of [`strategy_hp`] on a given vertex → machine map.
pub fn split_machines(
    g: &Graph,
    machine_of: &[usize],
    cluster: ClusterSpec,
    balance_factor: f64,
    seed: u64,
) -> Result<PartitionLayout> {
    let p = cluster.machines * cluster.cores;
    check_balance_args(g.n(), p, balance_factor)?;
    if machine_of.len() != g.n() || machine_of.iter().any(|&m| m >= cluster.machines) {
        return Err(Error::Integrity(
            "machine map does not match graph and cluster".into(),
        ));
    }
    let cap = balance_cap(g.n(), p, balance_factor);
    let mut machine_members = vec![Vec::new(); cluster.machines];
    for (v, &m) in machine_of.iter().enumerate() {
        machine_members[m].push(v);
    }
    let mut assignment = vec![0; g.n()];
    for (m, members) in machine_members.iter().enumerate() {
        if members.is_empty() {
            continue;
        }
        let sub = g.induced(members)?;
        let local = if members.len() < cluster.cores {
            // fewer vertices than cores: one vertex per partition, rest empty
            (0..members.len()).collect()
        } else {
            let level_seed = seed::derive(seed, &format!("hp-machine-{m}"));
            partition_with_cap(&sub, cluster.cores, cap, level_seed).assignment
        };
        for (i, &v) in members.iter().enumerate() {
            assignment[v] = m * cluster.cores + local[i];
        }
    }
    PartitionLayout::new(
        Strategy::Hp,
        cluster,
        assignment,
        (0..p).map(|i| i / cluster.cores).collect(),
        balance_factor,
        seed,
    )
}

/// Vertex `v` → partition `v mod p` with `p = k·c`; partition `i` → machine
/// `⌊i/c⌋`.
pub fn partition_hash(g: &Graph, cluster: ClusterSpec) -> Result<PartitionLayout> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    let p = cluster.machines * cluster.cores;
    PartitionLayout::new(
        Strategy::Ha,
        cluster,
        (0..g.n()).map(|v| v % p).collect(),
        (0..p).map(|i| i / cluster.cores).collect(),
        1.0,
        0,
    )
}

/// Undirected edges whose endpoints lie in different partitions, and their
/// fraction of all edges (0 for an edgeless graph).
pub fn edge_cut(g: &Graph, layout: &PartitionLayout) -> (usize, f64) {
    let cut = g
        .edges()
        .filter(|&(u, v)| layout.partition_of(u) != layout.partition_of(v))
        .count();
    let m = g.edge_count();
    (cut, if m == 0 { 0.0 } else { cut as f64 / m as f64 })
}

/// Cut of a raw assignment vector.
pub fn assignment_cut(g: &Graph, assignment: &[usize]) -> usize {
    g.edges().filter(|&(u, v)| assignment[u] != assignment[v]).count()
}
