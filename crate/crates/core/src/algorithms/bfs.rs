use serde::{Deserialize, Serialize};

use crate::engine::{run, Context, Envelope, Program, ProgramError, RunOptions, SimMetrics, Topology};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::metagraph::MetaGraph;
use crate::partition::PartitionLayout;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BfsState {
    pub source: VertexId,
    pub dist: Vec<Option<u32>>,
    /// Entry `i` counts vertices at distance `i`.
    pub frontier_hist: Vec<usize>,
}

impl BfsState {
    fn new(source: VertexId, dist: Vec<Option<u32>>) -> Self {
        let max = dist.iter().flatten().copied().max().unwrap_or(0) as usize;
        let mut frontier_hist = vec![0; max + 1];
        for d in dist.iter().flatten() {
            frontier_hist[*d as usize] += 1;
        }
        Self {
            source,
            dist,
            frontier_hist,
        }
    }

    pub fn reached(&self) -> usize {
        self.dist.iter().filter(|d| d.is_some()).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BfsRun {
    pub state: BfsState,
    pub metrics: SimMetrics,
    /// Subgraph activations beyond each subgraph's first (subgraph model only).
    pub revisit_count: Option<usize>,
}

fn check_source(g: &Graph, source: VertexId) -> Result<()> {
    if source >= g.n() {
        return Err(Error::InvalidArgument(format!(
            "source {source} out of range for {} vertices",
            g.n()
        )));
    }
    Ok(())
}

/// A vertex settles on its first wake-up, tells every neighbor, and halts.
/// Later wake-ups are declined.
struct VertexBfs<'a> {
    g: &'a Graph,
    source: VertexId,
}

impl Program for VertexBfs<'_> {
    type State = Option<u32>;
    type Message = u32;

    fn init(&self, _: usize) -> Option<u32> {
        None
    }

    fn initially_active(&self, v: usize) -> bool {
        v == self.source
    }

    fn compute(
        &self,
        ctx: &mut Context<u32>,
        dist: &mut Option<u32>,
        inbox: &[Envelope<u32>],
    ) -> Result<(), ProgramError> {
        if dist.is_some() {
            ctx.decline();
            return Ok(());
        }
        let v = ctx.unit();
        let d = if v == self.source {
            0
        } else {
            inbox
                .iter()
                .map(|e| e.payload)
                .min()
                .ok_or("woken without mail")?
        };
        *dist = Some(d);
        for &w in self.g.neighbors(v) {
            ctx.send(v, w, d + 1);
        }
        ctx.vote_to_halt();
        Ok(())
    }
}

pub fn bfs_vertex(
    g: &Graph,
    layout: &PartitionLayout,
    source: VertexId,
    options: &RunOptions,
) -> Result<BfsRun> {
    check_source(g, source)?;
    let topo = Topology::vertex(g, layout)?;
    let (dist, metrics) = run(&VertexBfs { g, source }, &topo, options)?;
    Ok(BfsRun {
        state: BfsState::new(source, dist),
        metrics,
        revisit_count: None,
    })
}

#[derive(Debug, Clone, Default)]
struct SubgraphDist {
    dist: Vec<Option<u32>>,
    activations: usize,
}

/// Each activation runs a multi-source BFS inside the subgraph from every
/// vertex whose distance improved, then forwards `dist + 1` over the remote
/// arcs of vertices that changed. A subgraph wakes only if mail improves it.
struct SubgraphBfs<'a> {
    g: &'a Graph,
    mg: &'a MetaGraph,
    local: Vec<usize>,
    source: VertexId,
}

impl Program for SubgraphBfs<'_> {
    type State = SubgraphDist;
    type Message = u32;

    fn init(&self, s: usize) -> SubgraphDist {
        SubgraphDist {
            dist: vec![None; self.mg.subgraphs[s].vertices.len()],
            activations: 0,
        }
    }

    fn initially_active(&self, s: usize) -> bool {
        self.mg.vertex_subgraph[self.source] == s
    }

    fn compute(
        &self,
        ctx: &mut Context<u32>,
        state: &mut SubgraphDist,
        inbox: &[Envelope<u32>],
    ) -> Result<(), ProgramError> {
        let sg = &self.mg.subgraphs[ctx.unit()];
        let dist = &mut state.dist;
        let mut seeds: Vec<(u32, usize)> = Vec::new();
        let mut offer = |at: usize, d: u32, dist: &mut Vec<Option<u32>>| {
            if dist[at].is_none_or(|cur| d < cur) {
                dist[at] = Some(d);
                seeds.push((d, at));
            }
        };
        if ctx.superstep() == 1 && self.mg.vertex_subgraph[self.source] == sg.id {
            offer(self.local[self.source], 0, dist);
        }
        for e in inbox {
            offer(self.local[e.to], e.payload, dist);
        }
        if seeds.is_empty() {
            ctx.decline();
            return Ok(());
        }
        seeds.sort_unstable();

        // merge the sorted seeds with the FIFO queue so pops stay in
        // nondecreasing distance order
        let mut changed = vec![false; sg.vertices.len()];
        let mut queue = std::collections::VecDeque::new();
        let mut next_seed = 0;
        let mut cost = 0u64;
        loop {
            let from_seed = match (seeds.get(next_seed), queue.front()) {
                (Some(s), Some(q)) => s <= q,
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => break,
            };
            let (d, at) = if from_seed {
                next_seed += 1;
                seeds[next_seed - 1]
            } else {
                queue.pop_front().unwrap()
            };
            // stale entry, or already expanded from an equal-distance duplicate
            if dist[at] != Some(d) || changed[at] {
                continue;
            }
            changed[at] = true;
            cost += 1;
            let v = sg.vertices[at];
            for &w in self.g.neighbors(v) {
                if self.mg.vertex_subgraph[w] != sg.id {
                    continue;
                }
                cost += 1;
                let lw = self.local[w];
                if dist[lw].is_none_or(|cur| d + 1 < cur) {
                    dist[lw] = Some(d + 1);
                    queue.push_back((d + 1, lw));
                }
            }
        }
        for arc in &sg.remote_arcs {
            cost += 1;
            let at = self.local[arc.local];
            if changed[at] {
                ctx.send(arc.local, arc.remote, dist[at].unwrap() + 1);
            }
        }
        ctx.add_cost(cost);
        state.activations += 1;
        ctx.vote_to_halt();
        Ok(())
    }
}

pub fn bfs_subgraph(
    g: &Graph,
    layout: &PartitionLayout,
    mg: &MetaGraph,
    source: VertexId,
    options: &RunOptions,
) -> Result<BfsRun> {
    check_source(g, source)?;
    let topo = Topology::subgraph(g, layout, mg)?;
    let mut local = vec![0usize; g.n()];
    for sg in &mg.subgraphs {
        for (i, &v) in sg.vertices.iter().enumerate() {
            local[v] = i;
        }
    }
    let (states, metrics) = run(&SubgraphBfs { g, mg, local, source }, &topo, options)?;
    let mut dist = vec![None; g.n()];
    let mut revisits = 0;
    for (sg, state) in mg.subgraphs.iter().zip(states) {
        revisits += state.activations.saturating_sub(1);
        for (&v, d) in sg.vertices.iter().zip(state.dist) {
            dist[v] = d;
        }
    }
    Ok(BfsRun {
        state: BfsState::new(source, dist),
        metrics,
        revisit_count: Some(revisits),
    })
}
