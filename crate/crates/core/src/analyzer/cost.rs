use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::algorithms::DEFAULT_ITERATIONS;
use crate::error::{Error, Result};
use crate::metagraph::MetaGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Pr,
    Bfs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedCost {
    pub per_superstep: u64,
    /// PR only: `per_superstep × iterations`.
    pub total: Option<u64>,
    /// BFS: early supersteps touch only part of the largest subgraph, so
    /// the per-superstep figure overestimates them.
    pub wave_caveat: bool,
}

/// Cost predicted from the largest meta-vertex. PR charges
/// `weight_V + weight_E + outgoing meta-edge weight`, the cost units the
/// simulator uses for one subgraph superstep; BFS charges
/// `weight_V + weight_E`.
pub fn expected_cost(mg: &MetaGraph, algo: Algo) -> Result<ExpectedCost> {
    if mg.q() == 0 {
        return Err(Error::InvalidArgument("meta-graph has no meta-vertices".into()));
    }
    let mut out_weight = vec![0usize; mg.q()];
    for e in &mg.meta_edges {
        out_weight[e.src] += e.weight;
    }
    let per = |extra: bool| {
        mg.meta_vertices
            .iter()
            .map(|m| (m.weight_v + m.weight_e + if extra { out_weight[m.id] } else { 0 }) as u64)
            .max()
            .unwrap_or(0)
    };
    Ok(match algo {
        Algo::Pr => {
            let per_superstep = per(true);
            ExpectedCost {
                per_superstep,
                total: Some(per_superstep * DEFAULT_ITERATIONS as u64),
                wave_caveat: false,
            }
        }
        Algo::Bfs => ExpectedCost {
            per_superstep: per(false),
            total: None,
            wave_caveat: true,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationRun {
    pub label: String,
    pub predicted: f64,
    pub simulated: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub rows: Vec<CorrelationRun>,
    /// `None` when either axis has no spread.
    pub spearman: Option<f64>,
}

pub const MIN_CORRELATION_RUNS: usize = 5;

pub fn correlation_report(runs: &[CorrelationRun]) -> Result<CorrelationReport> {
    if runs.len() < MIN_CORRELATION_RUNS {
        return Err(Error::InvalidArgument(format!(
            "correlation needs at least {MIN_CORRELATION_RUNS} runs, got {}",
            runs.len()
        )));
    }
    let x: Vec<f64> = runs.iter().map(|r| r.predicted).collect();
    let y: Vec<f64> = runs.iter().map(|r| r.simulated).collect();
    Ok(CorrelationReport {
        rows: runs.to_vec(),
        spearman: spearman(&x, &y),
    })
}

impl CorrelationReport {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["label", "predicted", "simulated"])?;
        for r in &self.rows {
            w.write_record([r.label.clone(), r.predicted.to_string(), r.simulated.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Pearson correlation of the rank vectors, ties sharing their average rank.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len(), "paired samples");
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

fn ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            out[k] = avg;
        }
        i = j + 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_grid, path_graph};
    use crate::metagraph::build_metagraph;
    use crate::partition::{partition_hash, ClusterSpec, PartitionLayout, Strategy};

    fn run(label: &str, predicted: f64, simulated: f64) -> CorrelationRun {
        CorrelationRun {
            label: label.into(),
            predicted,
            simulated,
        }
    }

    #[test]
    fn p4_pr_prediction() {
        let g = path_graph(4).unwrap();
        let layout = PartitionLayout::new(
            Strategy::Dp,
            ClusterSpec::new(2, 1).unwrap(),
            vec![0, 0, 1, 1],
            vec![0, 1],
            1.03,
            0,
        )
        .unwrap();
        let mg = build_metagraph(&g, &layout).unwrap();
        let cost = expected_cost(&mg, Algo::Pr).unwrap();
        assert_eq!(cost.per_superstep, 5);
        assert_eq!(cost.total, Some(150));
    }

    #[test]
    fn whole_grid_in_one_meta_vertex() {
        let g = generate_grid(8, 8).unwrap();
        let layout = partition_hash(&g, ClusterSpec::new(1, 1).unwrap()).unwrap();
        let mg = build_metagraph(&g, &layout).unwrap();
        assert_eq!(expected_cost(&mg, Algo::Pr).unwrap().per_superstep, 288);
        let bfs = expected_cost(&mg, Algo::Bfs).unwrap();
        assert_eq!(bfs.per_superstep, 288);
        assert!(bfs.wave_caveat);
    }

    #[test]
    fn monotone_runs_correlate_perfectly() {
        let runs: Vec<_> = (0..5).map(|i| run("r", i as f64, (i * i) as f64)).collect();
        assert_eq!(correlation_report(&runs).unwrap().spearman, Some(1.0));
    }

    #[test]
    fn ties_get_average_ranks() {
        assert_eq!(ranks(&[10.0, 20.0, 10.0, 30.0]), vec![1.5, 3.0, 1.5, 4.0]);
        let runs = vec![run("a", 1.0, 1.0); 5];
        assert_eq!(correlation_report(&runs).unwrap().spearman, None);
    }

    #[test]
    fn refuses_short_suites() {
        let runs: Vec<_> = (0..4).map(|i| run("r", i as f64, i as f64)).collect();
        assert!(correlation_report(&runs).is_err());
    }

    /// Against the textbook formula `1 − 6Σd²/(n(n²−1))` on tie-free data.
    #[test]
    fn matches_rank_difference_formula() {
        let x = [3.0, 1.0, 4.0, 1.5, 5.0, 9.0, 2.6];
        let y = [2.0, 7.0, 1.0, 8.0, 2.8, 1.8, 2.9];
        let (rx, ry) = (ranks(&x), ranks(&y));
        let n = x.len() as f64;
        let d2: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - b).powi(2)).sum();
        let expected = 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
        assert!((spearman(&x, &y).unwrap() - expected).abs() < 1e-12);
    }
}
