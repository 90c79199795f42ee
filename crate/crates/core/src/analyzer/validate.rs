use std::collections::HashSet;

use super::{BoundsReport, Check, Relation};
use crate::algorithms::{BfsRun, PrRun};
use crate::engine::{Model, SimMetrics};
use crate::error::{Error, Result};
use crate::graph::{bfs_distances, diameter_with_cap, eccentricity, random_permutation, DiameterMode, Graph};
use crate::metagraph::{build_metagraph, meta_diameter, meta_eccentricity, Locality, MetaGraph};
use crate::partition::{
    donath_bound, edge_cut, partition_hash, size_aware_bound, split_machines, strategy_dp, PartitionLayout,
    Strategy,
};
use crate::{seed, Provenance};

/// Everything [`validate`] looks at. Runs are optional; checks that need a
/// missing run are skipped.
pub struct ValidationInput<'a> {
    pub graph: &'a Graph,
    pub layout: &'a PartitionLayout,
    pub metagraph: &'a MetaGraph,
    pub pr_runs: Vec<&'a PrRun>,
    pub bfs_runs: Vec<&'a BfsRun>,
    /// Rebuild the DP (or HP) counterpart of a DP/HP layout and compare
    /// meta-diameters.
    pub compare_hierarchy: bool,
    /// Relabelings for the hash cut expectation (HA layouts; 0 skips).
    pub hash_seeds: usize,
    /// Largest graph for the dense spectral bound and exact diameter checks.
    pub max_dense_n: usize,
}

impl<'a> ValidationInput<'a> {
    pub fn new(graph: &'a Graph, layout: &'a PartitionLayout, metagraph: &'a MetaGraph) -> Self {
        Self {
            graph,
            layout,
            metagraph,
            pr_runs: Vec::new(),
            bfs_runs: Vec::new(),
            compare_hierarchy: true,
            hash_seeds: 30,
            max_dense_n: 500,
        }
    }
}

const PR_EQUIVALENCE_TOLERANCE: f64 = 1e-12;
const PR_MASS_TOLERANCE: f64 = 1e-6;
const HASH_CUT_RELATIVE_TOLERANCE: f64 = 0.05;
const EXACT_DIAMETER_CAP: usize = 5_000;

/// Evaluates every applicable bound. Refuses inputs that were not all
/// derived from the same graph and layout.
pub fn validate(input: &ValidationInput) -> Result<BoundsReport> {
    let (g, layout, mg) = (input.graph, input.layout, input.metagraph);
    layout.check_covers(g)?;
    mg.check_provenance(g, layout)?;
    let expected = mg.provenance.clone();
    for m in input
        .pr_runs
        .iter()
        .map(|r| &r.metrics)
        .chain(input.bfs_runs.iter().map(|r| &r.metrics))
    {
        check_run_provenance(m, &expected)?;
    }

    let mut checks = Vec::new();
    metagraph_checks(g, layout, mg, &mut checks);
    structure_checks(input, &mut checks)?;
    pr_checks(g, mg, &input.pr_runs, &mut checks);
    bfs_checks(g, mg, &input.bfs_runs, &mut checks)?;
    if layout.strategy() == Strategy::Ha && input.hash_seeds > 0 && g.edge_count() > 0 {
        checks.push(hash_check(g, layout, input.hash_seeds)?);
    }
    Ok(BoundsReport::new(checks))
}

fn check_run_provenance(m: &SimMetrics, expected: &Provenance) -> Result<()> {
    if &m.provenance != expected {
        return Err(Error::Provenance(format!(
            "{} run built from {:?}, meta-graph from {:?}",
            m.model, m.provenance, expected
        )));
    }
    Ok(())
}

fn metagraph_checks(g: &Graph, layout: &PartitionLayout, mg: &MetaGraph, out: &mut Vec<Check>) {
    let arcs = g.directed_edge_count() as f64;
    out.push(Check::compare(
        "metagraph_weight_v_sum",
        "meta-vertex weights sum to n",
        mg.total_weight_v() as f64,
        Relation::Eq,
        g.n() as f64,
        0.0,
        "",
    ));
    out.push(Check::compare(
        "metagraph_arc_accounting",
        "every arc is internal to one subgraph or on one meta-edge",
        (mg.total_weight_e() + mg.total_meta_edge_weight()) as f64,
        Relation::Eq,
        arcs,
        0.0,
        "",
    ));
    let (cut, _) = edge_cut(g, layout);
    out.push(Check::compare(
        "metagraph_cut_weight",
        "meta-edge weights count each cut edge in both directions",
        mg.total_meta_edge_weight() as f64,
        Relation::Eq,
        2.0 * cut as f64,
        0.0,
        "",
    ));
    let pairs: HashSet<(usize, usize, usize)> =
        mg.meta_edges.iter().map(|e| (e.src, e.dst, e.weight)).collect();
    let asymmetric = mg
        .meta_edges
        .iter()
        .filter(|e| !pairs.contains(&(e.dst, e.src, e.weight)))
        .count();
    out.push(Check::compare(
        "meta_edge_symmetry",
        "undirected input gives symmetric meta-edges",
        asymmetric as f64,
        Relation::Eq,
        0.0,
        0.0,
        "count of meta-edges without an equal-weight reverse",
    ));
    let mislabeled = mg
        .meta_edges
        .iter()
        .filter(|e| {
            let remote = mg.meta_vertices[e.src].machine != mg.meta_vertices[e.dst].machine;
            remote != (e.locality == Locality::RemoteMachine)
        })
        .count();
    out.push(Check::compare(
        "meta_edge_locality",
        "remote meta-edges join subgraphs on different machines",
        mislabeled as f64,
        Relation::Eq,
        0.0,
        0.0,
        "count of meta-edges with the wrong locality",
    ));
    let nonempty = layout.partition_sizes().iter().filter(|&&s| s > 0).count();
    out.push(Check::compare(
        "q_ge_nonempty_partitions",
        "every non-empty partition holds at least one subgraph",
        mg.q() as f64,
        Relation::Ge,
        nonempty as f64,
        0.0,
        "",
    ));
    let cap = layout.balance_cap();
    let max = layout.max_partition_size();
    let mut balance = Check::compare(
        "balance",
        "largest partition within the load factor",
        max as f64,
        Relation::Le,
        cap as f64,
        0.0,
        "",
    );
    if max > cap && layout.over_balance() {
        balance.status = super::CheckStatus::Info;
        balance.notes = "over_balance flagged".into();
    }
    out.push(balance);
}

fn is_connected(g: &Graph) -> bool {
    g.n() > 0 && bfs_distances(g, 0).iter().all(Option::is_some)
}

fn structure_checks(input: &ValidationInput, out: &mut Vec<Check>) -> Result<()> {
    let (g, layout, mg) = (input.graph, input.layout, input.metagraph);
    let meta_d = meta_diameter(mg).diameter;
    if is_connected(g) && g.n() <= EXACT_DIAMETER_CAP {
        let d = diameter_with_cap(g, DiameterMode::Exact, EXACT_DIAMETER_CAP)?;
        out.push(Check::compare(
            "meta_diameter_le_graph_diameter",
            "meta-graph diameter never exceeds graph diameter",
            meta_d as f64,
            Relation::Le,
            d.value as f64,
            0.0,
            format!("{} layout", layout.strategy()),
        ));
    }

    let p = layout.p();
    if g.n() <= input.max_dense_n && p >= 2 && g.n() >= p {
        let bound = donath_bound(g, p)?;
        let sizes = layout.partition_sizes();
        let lhs = size_aware_bound(&bound.eigenvalues, &sizes);
        out.push(Check::compare(
            "donath_le_cut",
            "spectral lower bound on the edge cut",
            lhs,
            Relation::Le,
            edge_cut(g, layout).0 as f64,
            1e-9,
            format!("balanced bound {:.6}", bound.bound),
        ));
    }

    if input.compare_hierarchy && matches!(layout.strategy(), Strategy::Dp | Strategy::Hp) {
        let cluster = layout.cluster();
        let (bf, seed) = (layout.balance_factor(), layout.seed());
        // a DP map is split as HP would split it; an HP layout is compared
        // with the DP map its seed produces
        let (dp, hp) = match layout.strategy() {
            Strategy::Dp => {
                let hp = split_machines(g, layout.vertex_to_partition(), cluster, bf, seed)?;
                (layout.clone(), hp)
            }
            _ => (strategy_dp(g, cluster, bf, seed)?, layout.clone()),
        };
        let first_level_matches = (0..g.n()).all(|v| hp.machine_of(v) == dp.partition_of(v));
        out.push(Check::compare(
            "hp_first_level_matches_dp",
            "HP splits DP's partitions",
            if first_level_matches { 1.0 } else { 0.0 },
            Relation::Eq,
            1.0,
            0.0,
            format!("{} layout", layout.strategy()),
        ));
        if first_level_matches {
            let dp_d = meta_diameter(&build_metagraph(g, &dp)?).diameter;
            let hp_d = meta_diameter(&build_metagraph(g, &hp)?).diameter;
            out.push(Check::compare(
                "dp_le_hp_meta_diameter",
                "splitting meta-vertices cannot shrink the meta-diameter",
                dp_d as f64,
                Relation::Le,
                hp_d as f64,
                0.0,
                "",
            ));
        }
    }
    Ok(())
}

fn pr_checks(g: &Graph, mg: &MetaGraph, runs: &[&PrRun], out: &mut Vec<Check>) {
    let arcs = g.directed_edge_count();
    let dangling = (0..g.n()).any(|v| g.degree(v) == 0);
    for run in runs {
        let m = &run.metrics;
        let model = m.model.to_string();
        match m.model {
            Model::Vertex => {
                let off = m.supersteps.iter().filter(|r| r.logical_msgs() != arcs).count();
                out.push(Check::compare(
                    "pr_vertex_logical_eq_arcs",
                    "vertex-centric PageRank sends one message per arc per superstep",
                    off as f64,
                    Relation::Eq,
                    0.0,
                    0.0,
                    format!("supersteps whose logical count differs from {arcs}"),
                ));
            }
            Model::Subgraph => {
                let off = m
                    .supersteps
                    .iter()
                    .filter(|r| r.physical_msgs != mg.meta_edges.len())
                    .count();
                out.push(Check::compare(
                    "pr_physical_eq_meta_edges",
                    "physical messages per superstep equal the meta-edge count",
                    off as f64,
                    Relation::Eq,
                    0.0,
                    0.0,
                    format!(
                        "supersteps whose physical count differs from {}",
                        mg.meta_edges.len()
                    ),
                ));
            }
        }
        let drift = run
            .state
            .mass_history
            .iter()
            .map(|mass| (mass - g.n() as f64).abs())
            .fold(0.0, f64::max);
        if dangling {
            out.push(Check::info(
                "pr_mass_conservation",
                "rank mass stays n",
                drift,
                format!("{model}; dangling vertices present, not asserted"),
            ));
        } else {
            out.push(Check::compare(
                "pr_mass_conservation",
                "rank mass stays n",
                drift,
                Relation::Le,
                PR_MASS_TOLERANCE,
                0.0,
                model,
            ));
        }
    }
    let vertex = runs.iter().find(|r| r.metrics.model == Model::Vertex);
    let subgraph = runs.iter().find(|r| r.metrics.model == Model::Subgraph);
    if let (Some(v), Some(s)) = (vertex, subgraph) {
        let diff = v
            .state
            .rank
            .iter()
            .zip(&s.state.rank)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        out.push(Check::compare(
            "pr_model_equivalence",
            "batching changes accounting, not ranks",
            diff,
            Relation::Le,
            PR_EQUIVALENCE_TOLERANCE,
            0.0,
            "max |rank difference|",
        ));
    }
}

fn bfs_checks(g: &Graph, mg: &MetaGraph, runs: &[&BfsRun], out: &mut Vec<Check>) -> Result<()> {
    for run in runs {
        let source = run.state.source;
        let tag = format!("{} source={}", run.metrics.model, g.label(source));
        let oracle: Vec<Option<u32>> = bfs_distances(g, source)
            .into_iter()
            .map(|d| d.map(|d| d as u32))
            .collect();
        let wrong = oracle.iter().zip(&run.state.dist).filter(|(a, b)| a != b).count();
        out.push(Check::compare(
            "bfs_distance_equivalence",
            "simulated distances equal sequential BFS",
            wrong as f64,
            Relation::Eq,
            0.0,
            0.0,
            tag.clone(),
        ));
        let ecc = eccentricity(g, source)? as f64;
        let supersteps = run.metrics.total_supersteps as f64;
        match run.metrics.model {
            Model::Vertex => {
                out.push(Check::compare(
                    "bfs_vertex_supersteps_eq_ecc",
                    "vertex-centric BFS takes ecc(source) + 1 supersteps",
                    supersteps,
                    Relation::Eq,
                    ecc + 1.0,
                    0.0,
                    tag.clone(),
                ));
                let reached_degree: usize = (0..g.n())
                    .filter(|&v| run.state.dist[v].is_some())
                    .map(|v| g.degree(v))
                    .sum();
                out.push(Check::compare(
                    "bfs_vertex_message_identity",
                    "vertex-centric BFS sends one message per arc of a reached vertex",
                    run.metrics.totals.logical_msgs() as f64,
                    Relation::Eq,
                    reached_degree as f64,
                    0.0,
                    tag,
                ));
            }
            Model::Subgraph => {
                let meta_ecc = meta_eccentricity(mg, mg.subgraph_of(source)) as f64;
                out.push(Check::compare(
                    "bfs_superstep_lower",
                    "subgraph-centric BFS needs at least meta-eccentricity + 1 supersteps",
                    supersteps,
                    Relation::Ge,
                    meta_ecc + 1.0,
                    0.0,
                    tag.clone(),
                ));
                out.push(Check::compare(
                    "bfs_superstep_upper",
                    "subgraph-centric BFS needs at most ecc(source) + 1 supersteps",
                    supersteps,
                    Relation::Le,
                    ecc + 1.0,
                    0.0,
                    tag.clone(),
                ));
                let reached: HashSet<usize> = (0..g.n())
                    .filter(|&v| run.state.dist[v].is_some())
                    .map(|v| mg.subgraph_of(v))
                    .collect();
                let physical = run.metrics.totals.physical_msgs as f64;
                out.push(Check::compare(
                    "bfs_physical_lower",
                    "every reached subgraph but the first receives a message",
                    physical,
                    Relation::Ge,
                    reached.len() as f64 - 1.0,
                    0.0,
                    tag.clone(),
                ));
                out.push(Check::compare(
                    "bfs_physical_upper",
                    "at most one physical message per meta-edge per superstep",
                    physical,
                    Relation::Le,
                    supersteps * mg.meta_edges.len() as f64,
                    0.0,
                    tag.clone(),
                ));
                if !mg.meta_edges.is_empty() {
                    out.push(Check::info(
                        "bfs_alpha",
                        "physical messages relative to meta-edges",
                        physical / mg.meta_edges.len() as f64,
                        tag.clone(),
                    ));
                }
                if let Some(revisits) = run.revisit_count {
                    out.push(Check::info(
                        "bfs_revisits",
                        "subgraph re-activations",
                        revisits as f64,
                        tag,
                    ));
                }
            }
        }
    }
    let vertex: Vec<&&BfsRun> = runs.iter().filter(|r| r.metrics.model == Model::Vertex).collect();
    for s in runs.iter().filter(|r| r.metrics.model == Model::Subgraph) {
        if let Some(v) = vertex.iter().find(|v| v.state.source == s.state.source) {
            out.push(Check::compare(
                "bfs_superstep_sandwich",
                "subgraph-centric BFS never needs more supersteps than vertex-centric",
                s.metrics.total_supersteps as f64,
                Relation::Le,
                v.metrics.total_supersteps as f64,
                0.0,
                format!("source={}", g.label(s.state.source)),
            ));
        }
    }
    Ok(())
}

/// Mean cut fraction of hash partitions over random relabelings of `g`
/// against the expectation `1 − 1/p`.
fn hash_check(g: &Graph, layout: &PartitionLayout, seeds: usize) -> Result<Check> {
    let p = layout.p();
    let mut total = 0.0;
    for i in 0..seeds {
        let perm = random_permutation(g.n(), seed::derive(layout.seed(), &format!("hash-relabel-{i}")));
        let relabeled = g.relabeled(&perm)?;
        total += edge_cut(&relabeled, &partition_hash(&relabeled, layout.cluster())?).1;
    }
    let mean = total / seeds as f64;
    let expected = 1.0 - 1.0 / p as f64;
    Ok(Check::compare(
        "hash_expected_cut",
        "hash partitions cut a 1 - 1/p fraction of edges",
        mean,
        Relation::Eq,
        expected,
        HASH_CUT_RELATIVE_TOLERANCE * expected,
        format!("mean over {seeds} relabelings"),
    ))
}
