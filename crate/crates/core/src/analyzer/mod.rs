//! Checks the analytical bounds against built meta-graphs and simulated
//! runs, and compares predicted cost with simulated makespan.

mod cost;
mod validate;

use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub use cost::{
    correlation_report, expected_cost, spearman, Algo, CorrelationReport, CorrelationRun, ExpectedCost,
};
pub use validate::{validate, ValidationInput};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Eq,
    Le,
    Ge,
    /// Reported, not asserted.
    Info,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "==",
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Info => "~",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub claim_id: String,
    /// The analytical statement being checked, or `plumbing`.
    pub anchor: String,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    pub status: CheckStatus,
    pub notes: String,
}

impl Check {
    /// Exact comparison; pass `tolerance > 0` for float quantities.
    pub fn compare(
        claim_id: &str,
        anchor: &str,
        lhs: f64,
        relation: Relation,
        rhs: f64,
        tolerance: f64,
        notes: impl Into<String>,
    ) -> Self {
        let holds = match relation {
            Relation::Eq => (lhs - rhs).abs() <= tolerance,
            Relation::Le => lhs <= rhs + tolerance,
            Relation::Ge => lhs + tolerance >= rhs,
            Relation::Info => true,
        };
        let status = match (relation, holds) {
            (Relation::Info, _) => CheckStatus::Info,
            (_, true) => CheckStatus::Pass,
            (_, false) => CheckStatus::Fail,
        };
        Self {
            claim_id: claim_id.to_string(),
            anchor: anchor.to_string(),
            lhs,
            rhs,
            relation,
            status,
            notes: notes.into(),
        }
    }

    pub fn info(claim_id: &str, anchor: &str, value: f64, notes: impl Into<String>) -> Self {
        Self::compare(claim_id, anchor, value, Relation::Info, value, 0.0, notes)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    /// Sorted by claim id, then notes.
    pub checks: Vec<Check>,
}

impl BoundsReport {
    pub fn new(mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.claim_id.cmp(&b.claim_id).then_with(|| a.notes.cmp(&b.notes)));
        Self { checks }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    /// Claim ids of failing checks, deduplicated, in report order.
    pub fn failures(&self) -> Vec<&str> {
        let mut ids: Vec<&str> = self
            .checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .map(|c| c.claim_id.as_str())
            .collect();
        ids.dedup();
        ids
    }

    pub fn find(&self, claim_id: &str) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.claim_id == claim_id).collect()
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let width = self
            .checks
            .iter()
            .map(|c| c.claim_id.len())
            .max()
            .unwrap_or(5)
            .max(5);
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<6} {:<width$} {:>14} {:>2} {:<14} notes",
            "status", "claim", "lhs", "", "rhs"
        );
        for c in &self.checks {
            let status = match c.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Info => "INFO",
            };
            let _ = writeln!(
                s,
                "{status:<6} {:<width$} {:>14} {:>2} {:<14} {}",
                c.claim_id,
                fmt_num(c.lhs),
                c.relation.symbol(),
                fmt_num(c.rhs),
                c.notes
            );
        }
        s
    }
}

fn fmt_num(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x:.6e}")
    }
}
