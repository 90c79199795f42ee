use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::engine::{run, Context, Envelope, Program, ProgramError, RunOptions, SimMetrics, Topology};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::metagraph::MetaGraph;
use crate::partition::PartitionLayout;

pub const DEFAULT_DAMPING: f64 = 0.85;
pub const DEFAULT_ITERATIONS: usize = 30;

/// Final ranks. Ranks sum to `n` (no dangling vertices), so a regular graph
/// sits at the uniform fixed point 1.0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrState {
    pub rank: Vec<f64>,
    pub damping: f64,
    pub iterations: usize,
    /// Σ ranks after each superstep.
    pub mass_history: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrRun {
    pub state: PrState,
    pub metrics: SimMetrics,
}

fn check_args(iterations: usize, damping: f64) -> Result<()> {
    if iterations == 0 {
        return Err(Error::InvalidArgument("iterations must be >= 1".into()));
    }
    if !(0.0..=1.0).contains(&damping) {
        return Err(Error::InvalidArgument(format!(
            "damping must lie in [0, 1], got {damping}"
        )));
    }
    Ok(())
}

/// Sums in the order given; both models feed contributions in ascending
/// sender order so their results agree bit for bit.
fn update(damping: f64, contributions: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    for c in contributions {
        sum += c;
    }
    (1.0 - damping) + damping * sum
}

fn initial_rank(g: &Graph, v: VertexId, damping: f64) -> f64 {
    if g.degree(v) == 0 {
        1.0 - damping
    } else {
        1.0
    }
}

/// Superstep 1 sends the initial ranks; supersteps `2..=iterations` each
/// apply one update and send. Mail arriving after the last superstep is
/// declined.
struct VertexPr<'a> {
    g: &'a Graph,
    damping: f64,
    iterations: usize,
}

impl Program for VertexPr<'_> {
    type State = f64;
    type Message = f64;

    fn init(&self, v: usize) -> f64 {
        initial_rank(self.g, v, self.damping)
    }

    fn compute(
        &self,
        ctx: &mut Context<f64>,
        rank: &mut f64,
        inbox: &[Envelope<f64>],
    ) -> Result<(), ProgramError> {
        let step = ctx.superstep();
        if step > self.iterations {
            ctx.decline();
            return Ok(());
        }
        let v = ctx.unit();
        let deg = self.g.degree(v);
        if deg == 0 {
            ctx.vote_to_halt();
            return Ok(());
        }
        if step > 1 {
            *rank = update(self.damping, inbox.iter().map(|e| e.payload));
        }
        let share = *rank / deg as f64;
        for &w in self.g.neighbors(v) {
            ctx.send(v, w, share);
        }
        if step == self.iterations {
            ctx.vote_to_halt();
        }
        Ok(())
    }

    fn aggregate(&self, ranks: &[f64]) -> Option<f64> {
        Some(ranks.iter().sum())
    }
}

pub fn pr_vertex(
    g: &Graph,
    layout: &PartitionLayout,
    iterations: usize,
    damping: f64,
    options: &RunOptions,
) -> Result<PrRun> {
    check_args(iterations, damping)?;
    let topo = Topology::vertex(g, layout)?;
    let program = VertexPr {
        g,
        damping,
        iterations,
    };
    let (rank, metrics) = run(&program, &topo, options)?;
    Ok(finish(rank, damping, iterations, metrics))
}

struct SubgraphPr<'a> {
    g: &'a Graph,
    mg: &'a MetaGraph,
    /// Position of every vertex inside its subgraph's vertex list.
    local: Vec<usize>,
    damping: f64,
    iterations: usize,
}

impl Program for SubgraphPr<'_> {
    type State = Vec<f64>;
    type Message = f64;

    fn init(&self, s: usize) -> Vec<f64> {
        self.mg.subgraphs[s]
            .vertices
            .iter()
            .map(|&v| initial_rank(self.g, v, self.damping))
            .collect()
    }

    fn compute(
        &self,
        ctx: &mut Context<f64>,
        ranks: &mut Vec<f64>,
        inbox: &[Envelope<f64>],
    ) -> Result<(), ProgramError> {
        let step = ctx.superstep();
        if step > self.iterations {
            ctx.decline();
            return Ok(());
        }
        let sg = &self.mg.subgraphs[ctx.unit()];
        let (g, s) = (self.g, sg.id);
        if step > 1 {
            let remote: HashMap<VertexId, f64> = inbox.iter().map(|e| (e.from, e.payload)).collect();
            let next: Vec<f64> = sg
                .vertices
                .iter()
                .zip(ranks.iter())
                .map(|(&v, &old)| {
                    if g.degree(v) == 0 {
                        return old;
                    }
                    let contributions = g.neighbors(v).iter().map(|&u| {
                        if self.mg.vertex_subgraph[u] == s {
                            ranks[self.local[u]] / g.degree(u) as f64
                        } else {
                            remote[&u]
                        }
                    });
                    update(self.damping, contributions)
                })
                .collect();
            *ranks = next;
        }
        for arc in &sg.remote_arcs {
            let share = ranks[self.local[arc.local]] / g.degree(arc.local) as f64;
            ctx.send(arc.local, arc.remote, share);
        }
        ctx.add_cost((sg.vertices.len() + sg.internal_arc_count + sg.remote_arcs.len()) as u64);
        if step == self.iterations {
            ctx.vote_to_halt();
        }
        Ok(())
    }

    fn aggregate(&self, states: &[Vec<f64>]) -> Option<f64> {
        Some(states.iter().flatten().sum())
    }
}

pub fn pr_subgraph(
    g: &Graph,
    layout: &PartitionLayout,
    mg: &MetaGraph,
    iterations: usize,
    damping: f64,
    options: &RunOptions,
) -> Result<PrRun> {
    check_args(iterations, damping)?;
    let topo = Topology::subgraph(g, layout, mg)?;
    let mut local = vec![0usize; g.n()];
    for sg in &mg.subgraphs {
        for (i, &v) in sg.vertices.iter().enumerate() {
            local[v] = i;
        }
    }
    let program = SubgraphPr {
        g,
        mg,
        local,
        damping,
        iterations,
    };
    let (states, metrics) = run(&program, &topo, options)?;
    let mut rank = vec![0.0; g.n()];
    for (sg, ranks) in mg.subgraphs.iter().zip(states) {
        for (&v, r) in sg.vertices.iter().zip(ranks) {
            rank[v] = r;
        }
    }
    Ok(finish(rank, damping, iterations, metrics))
}

fn finish(rank: Vec<f64>, damping: f64, iterations: usize, metrics: SimMetrics) -> PrRun {
    let mass_history = metrics.supersteps.iter().filter_map(|r| r.aggregate).collect();
    PrRun {
        state: PrState {
            rank,
            damping,
            iterations,
            mass_history,
        },
        metrics,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle_graph, generate_grid, generate_powerlaw, path_graph, star_graph};
    use crate::metagraph::build_metagraph;
    use crate::partition::{strategy_fp, strategy_hp, ClusterSpec};

    fn fp(g: &Graph, k: usize, c: usize, seed: u64) -> PartitionLayout {
        strategy_fp(g, ClusterSpec::new(k, c).unwrap(), 1.03, seed).unwrap()
    }

    #[test]
    fn regular_graph_stays_uniform() {
        let g = cycle_graph(4).unwrap();
        let layout = fp(&g, 2, 1, 0);
        let run = pr_vertex(&g, &layout, 30, DEFAULT_DAMPING, &RunOptions::default()).unwrap();
        assert!(run.state.rank.iter().all(|&r| r == 1.0));
        assert_eq!(run.metrics.total_supersteps, 30);
    }

    #[test]
    fn logical_messages_every_superstep() {
        let g = path_graph(4).unwrap();
        let layout = fp(&g, 2, 1, 0);
        let run = pr_vertex(&g, &layout, 30, DEFAULT_DAMPING, &RunOptions::default()).unwrap();
        assert!(run.metrics.supersteps.iter().all(|r| r.logical_msgs() == 6));
    }

    /// Hand-iterated reference for the synchronous update on a small path.
    #[test]
    fn matches_direct_iteration() {
        let g = path_graph(5).unwrap();
        let layout = fp(&g, 2, 1, 1);
        let iterations = 7;
        let run = pr_vertex(&g, &layout, iterations, 0.85, &RunOptions::default()).unwrap();
        let mut rank = vec![1.0; 5];
        for _ in 1..iterations {
            rank = (0..5)
                .map(|v| {
                    0.15 + 0.85
                        * g.neighbors(v)
                            .iter()
                            .map(|&u| rank[u] / g.degree(u) as f64)
                            .sum::<f64>()
                })
                .collect();
        }
        for (a, b) in run.state.rank.iter().zip(&rank) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn models_agree_exactly() {
        let g = generate_powerlaw(400, 2, 3).unwrap();
        let layout = strategy_hp(&g, ClusterSpec::new(2, 2).unwrap(), 1.03, 3).unwrap();
        let mg = build_metagraph(&g, &layout).unwrap();
        let v = pr_vertex(&g, &layout, 30, 0.85, &RunOptions::default()).unwrap();
        let s = pr_subgraph(&g, &layout, &mg, 30, 0.85, &RunOptions::default()).unwrap();
        assert_eq!(v.state.rank, s.state.rank);
        for r in &s.metrics.supersteps {
            assert_eq!(r.physical_msgs, mg.meta_edges.len());
        }
        for mass in v.state.mass_history.iter().chain(&s.state.mass_history) {
            assert!((mass - 400.0).abs() < 1e-6);
        }
    }

    #[test]
    fn dangling_vertex_frozen() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2)]).unwrap();
        let layout = fp(&g, 1, 2, 0);
        let run = pr_vertex(&g, &layout, 10, 0.85, &RunOptions::default()).unwrap();
        assert!((run.state.rank[3] - 0.15).abs() < 1e-15);
        let mg = build_metagraph(&g, &layout).unwrap();
        let s = pr_subgraph(&g, &layout, &mg, 10, 0.85, &RunOptions::default()).unwrap();
        assert_eq!(run.state.rank, s.state.rank);
    }

    /// The star is bipartite, so from uniform ranks the error against the
    /// fixed point flips sign and shrinks by `d` each update.
    #[test]
    fn star_transient_closed_form() {
        let g = star_graph(3).unwrap();
        let layout = fp(&g, 2, 1, 0);
        let d: f64 = 0.85;
        let hub_fixed = 71.0 / 37.0;
        for iterations in [1usize, 2, 5, 30, 200] {
            let run = pr_vertex(&g, &layout, iterations, d, &RunOptions::default()).unwrap();
            let expected = hub_fixed + (1.0 - hub_fixed) * (-d).powi(iterations as i32 - 1);
            assert!((run.state.rank[0] - expected).abs() < 1e-9, "{iterations}");
        }
        let long = pr_vertex(&g, &layout, 200, d, &RunOptions::default()).unwrap();
        assert!((long.state.rank[0] - hub_fixed).abs() < 1e-9);
        assert!((long.state.rank[1] - 77.0 / 111.0).abs() < 1e-9);
    }

    #[test]
    fn grid_subgraph_cost_units() {
        let g = generate_grid(6, 6).unwrap();
        let layout = fp(&g, 1, 1, 0);
        let mg = build_metagraph(&g, &layout).unwrap();
        let s = pr_subgraph(&g, &layout, &mg, 3, 0.85, &RunOptions::default()).unwrap();
        // one subgraph holding everything: 36 vertices + 120 arcs per superstep
        assert_eq!(s.metrics.makespan_estimate, 3 * (36 + 120));
    }

    #[test]
    fn rejects_bad_arguments() {
        let g = path_graph(3).unwrap();
        let layout = fp(&g, 1, 1, 0);
        assert!(pr_vertex(&g, &layout, 0, 0.85, &RunOptions::default()).is_err());
        assert!(pr_vertex(&g, &layout, 3, 1.5, &RunOptions::default()).is_err());
    }
}
