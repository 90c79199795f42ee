//! Deterministic bulk-synchronous simulator.
//!
//! A [`Program`] runs on units (vertices or subgraphs, per the [`Topology`]).
//! Each superstep invokes every unit that is active or has mail, then moves
//! all sent messages across the barrier. Results do not depend on how many
//! worker threads execute a superstep.

mod metrics;
mod topology;

use std::collections::HashSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::VertexId;

pub use metrics::{write_csv_all, SimMetrics, SuperstepRecord, Totals};
pub use topology::{Model, Topology};

/// A message in flight. `sender` is the sending unit; `from` and `to` are
/// the vertices on either end of the arc it travels.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope<M> {
    pub sender: usize,
    pub from: VertexId,
    pub to: VertexId,
    pub payload: M,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgramError(pub String);

impl<S: Into<String>> From<S> for ProgramError {
    fn from(s: S) -> Self {
        ProgramError(s.into())
    }
}

/// What a unit sees during one invocation.
pub struct Context<M> {
    superstep: usize,
    unit: usize,
    outbox: Vec<Envelope<M>>,
    halted: bool,
    declined: bool,
    cost: u64,
}

impl<M> Context<M> {
    /// 1-based.
    pub fn superstep(&self) -> usize {
        self.superstep
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn send(&mut self, from: VertexId, to: VertexId, payload: M) {
        self.outbox.push(Envelope {
            sender: self.unit,
            from,
            to,
            payload,
        });
    }

    /// Stays halted until a message arrives.
    pub fn vote_to_halt(&mut self) {
        self.halted = true;
    }

    /// Treats this wake-up as if it never happened: the unit stays halted,
    /// is not counted as active and costs nothing. Only valid for a halted
    /// unit woken by mail, and only before sending anything.
    pub fn decline(&mut self) {
        self.halted = true;
        self.declined = true;
    }

    /// Charges compute cost for this invocation (ignored where the model
    /// fixes the cost per unit).
    pub fn add_cost(&mut self, units: u64) {
        self.cost += units;
    }
}

pub trait Program: Sync {
    type State: Send + Sync;
    type Message: Send + Sync;

    fn init(&self, unit: usize) -> Self::State;

    fn initially_active(&self, _unit: usize) -> bool {
        true
    }

    /// `inbox` is sorted by `(sender, to)`, preserving send order within ties.
    fn compute(
        &self,
        ctx: &mut Context<Self::Message>,
        state: &mut Self::State,
        inbox: &[Envelope<Self::Message>],
    ) -> Result<(), ProgramError>;

    /// Optional global reduction recorded after each superstep.
    fn aggregate(&self, _states: &[Self::State]) -> Option<f64> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub max_supersteps: usize,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            max_supersteps: 100_000,
            threads: None,
        }
    }
}

struct Invocation<M> {
    outbox: Vec<Envelope<M>>,
    halted: bool,
    declined: bool,
    cost: u64,
}

pub fn run<P: Program>(
    program: &P,
    topology: &Topology,
    options: &RunOptions,
) -> Result<(Vec<P::State>, SimMetrics)> {
    if options.max_supersteps == 0 {
        return Err(Error::InvalidArgument("max_supersteps must be >= 1".into()));
    }
    match options.threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
            pool.install(|| run_loop(program, topology, options.max_supersteps))
        }
        None => run_loop(program, topology, options.max_supersteps),
    }
}

fn run_loop<P: Program>(
    program: &P,
    topo: &Topology,
    max_supersteps: usize,
) -> Result<(Vec<P::State>, SimMetrics)> {
    let units = topo.unit_count();
    let mut states: Vec<P::State> = (0..units).map(|u| program.init(u)).collect();
    let mut active: Vec<bool> = (0..units).map(|u| program.initially_active(u)).collect();
    let mut inboxes: Vec<Vec<Envelope<P::Message>>> = (0..units).map(|_| Vec::new()).collect();
    let mut records = Vec::new();
    let mut truncated = false;

    for step in 1.. {
        let pending = (0..units).any(|u| active[u] || !inboxes[u].is_empty());
        if !pending {
            break;
        }
        if step > max_supersteps {
            truncated = true;
            break;
        }

        let results: Vec<Option<std::result::Result<Invocation<P::Message>, ProgramError>>> = states
            .par_iter_mut()
            .zip(inboxes.par_iter())
            .enumerate()
            .map(|(u, (state, inbox))| {
                if !active[u] && inbox.is_empty() {
                    return None;
                }
                let mut ctx = Context {
                    superstep: step,
                    unit: u,
                    outbox: Vec::new(),
                    halted: false,
                    declined: false,
                    cost: 0,
                };
                Some(program.compute(&mut ctx, state, inbox).and_then(|()| {
                    if ctx.declined && (active[u] || !ctx.outbox.is_empty()) {
                        return Err(ProgramError(
                            "decline is only valid for a halted unit that sends nothing".into(),
                        ));
                    }
                    Ok(Invocation {
                        outbox: ctx.outbox,
                        halted: ctx.halted,
                        declined: ctx.declined,
                        cost: ctx.cost,
                    })
                }))
            })
            .collect();

        let mut next: Vec<Vec<Envelope<P::Message>>> = (0..units).map(|_| Vec::new()).collect();
        let mut record = SuperstepRecord {
            index: step,
            active_units: 0,
            logical_msgs_local: 0,
            logical_msgs_remote: 0,
            physical_msgs: 0,
            compute_cost_per_machine: vec![0; topo.machines],
            machine_max_cost: 0,
            aggregate: None,
        };
        let mut core_cost = vec![0u64; topo.machines * topo.cores];
        let mut pairs = HashSet::new();
        for (u, result) in results.into_iter().enumerate() {
            let Some(result) = result else { continue };
            let inv = result.map_err(|e| Error::Program {
                superstep: step,
                unit: u,
                message: e.0,
            })?;
            active[u] = !inv.halted;
            if inv.declined {
                continue;
            }
            record.active_units += 1;
            let cost = match &topo.fixed_cost {
                Some(fixed) => fixed[u],
                None => inv.cost,
            };
            core_cost[topo.unit_machine[u] * topo.cores + topo.unit_core[u]] += cost;
            pairs.clear();
            for env in inv.outbox {
                let dest = *topo.unit_of_vertex.get(env.to).ok_or_else(|| Error::Program {
                    superstep: step,
                    unit: u,
                    message: format!("message to unknown vertex {}", env.to),
                })?;
                if topo.unit_machine[dest] == topo.unit_machine[u] {
                    record.logical_msgs_local += 1;
                } else {
                    record.logical_msgs_remote += 1;
                }
                match topo.model {
                    Model::Vertex => record.physical_msgs += 1,
                    Model::Subgraph => {
                        if pairs.insert(dest) {
                            record.physical_msgs += 1;
                        }
                    }
                }
                next[dest].push(env);
            }
        }
        if record.active_units == 0 {
            // every invocation declined, so nothing was sent either
            break;
        }
        for m in 0..topo.machines {
            record.compute_cost_per_machine[m] = core_cost[m * topo.cores..(m + 1) * topo.cores]
                .iter()
                .copied()
                .max()
                .unwrap_or(0);
        }
        record.machine_max_cost = record.compute_cost_per_machine.iter().copied().max().unwrap_or(0);
        for inbox in &mut next {
            inbox.sort_by_key(|e| (e.sender, e.to));
        }
        inboxes = next;
        record.aggregate = program.aggregate(&states);
        records.push(record);
    }

    let metrics = SimMetrics::from_records(topo.model, records, truncated, topo.provenance.clone());
    Ok((states, metrics))
}
