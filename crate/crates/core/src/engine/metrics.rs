use std::io::Write;

use serde::{Deserialize, Serialize};

use super::Model;
use crate::error::Result;
use crate::Provenance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperstepRecord {
    /// 1-based.
    pub index: usize,
    pub active_units: usize,
    pub logical_msgs_local: usize,
    pub logical_msgs_remote: usize,
    pub physical_msgs: usize,
    pub compute_cost_per_machine: Vec<u64>,
    pub machine_max_cost: u64,
    /// Program-defined global reduction over unit states after the superstep.
    pub aggregate: Option<f64>,
}

impl SuperstepRecord {
    pub fn logical_msgs(&self) -> usize {
        self.logical_msgs_local + self.logical_msgs_remote
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub active_units: usize,
    pub logical_msgs_local: usize,
    pub logical_msgs_remote: usize,
    pub physical_msgs: usize,
    pub compute_cost: u64,
}

impl Totals {
    pub fn logical_msgs(&self) -> usize {
        self.logical_msgs_local + self.logical_msgs_remote
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimMetrics {
    pub model: Model,
    pub supersteps: Vec<SuperstepRecord>,
    pub total_supersteps: usize,
    pub totals: Totals,
    /// Σ over supersteps of the slowest machine's cost.
    pub makespan_estimate: u64,
    /// The run hit `max_supersteps` with work still pending.
    pub truncated: bool,
    pub provenance: Provenance,
}

impl SimMetrics {
    pub(crate) fn from_records(
        model: Model,
        supersteps: Vec<SuperstepRecord>,
        truncated: bool,
        provenance: Provenance,
    ) -> Self {
        let mut totals = Totals::default();
        for r in &supersteps {
            totals.active_units += r.active_units;
            totals.logical_msgs_local += r.logical_msgs_local;
            totals.logical_msgs_remote += r.logical_msgs_remote;
            totals.physical_msgs += r.physical_msgs;
            totals.compute_cost += r.compute_cost_per_machine.iter().sum::<u64>();
        }
        Self {
            model,
            total_supersteps: supersteps.len(),
            makespan_estimate: supersteps.iter().map(|r| r.machine_max_cost).sum(),
            supersteps,
            totals,
            truncated,
            provenance,
        }
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }

    /// One row per superstep, labelled with the model.
    pub fn write_csv<W: Write>(&self, out: W, frontier: Option<&[usize]>) -> Result<()> {
        let label = self.model.to_string();
        write_csv_all(&[(label.as_str(), self, frontier)], out)
    }
}

/// Per-superstep rows of several runs in one table. Machine costs are
/// `;`-joined. When a BFS frontier histogram is given, row `i` also carries
/// the number of vertices at distance `i − 1`.
pub fn write_csv_all<W: Write>(runs: &[(&str, &SimMetrics, Option<&[usize]>)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "run",
        "model",
        "superstep",
        "active_units",
        "logical_msgs_local",
        "logical_msgs_remote",
        "physical_msgs",
        "compute_cost_per_machine",
        "machine_max_cost",
        "aggregate",
        "frontier",
    ])?;
    for (label, metrics, frontier) in runs {
        for r in &metrics.supersteps {
            let costs: Vec<String> = r.compute_cost_per_machine.iter().map(u64::to_string).collect();
            w.write_record([
                label.to_string(),
                metrics.model.to_string(),
                r.index.to_string(),
                r.active_units.to_string(),
                r.logical_msgs_local.to_string(),
                r.logical_msgs_remote.to_string(),
                r.physical_msgs.to_string(),
                costs.join(";"),
                r.machine_max_cost.to_string(),
                r.aggregate.map(|a| format!("{a:.9}")).unwrap_or_default(),
                frontier
                    .and_then(|h| h.get(r.index - 1))
                    .map(usize::to_string)
                    .unwrap_or_default(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
