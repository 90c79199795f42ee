use serde::{Deserialize, Serialize};

use super::Graph;

/// Cumulative fraction of vertices with degree ≤ `degree`, one row per
/// distinct degree in ascending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeCdf {
    pub rows: Vec<(usize, f64)>,
    pub mean_degree: f64,
}

/// `count(d) ≈ scale_alpha · d^exponent_beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerlawParams {
    pub exponent_beta: f64,
    pub scale_alpha: f64,
}

pub fn degree_cdf(g: &Graph) -> DegreeCdf {
    let hist = histogram(g);
    let n = g.n();
    let mut rows = Vec::new();
    let mut cumulative = 0usize;
    for (d, &count) in hist.iter().enumerate() {
        if count > 0 {
            cumulative += count;
            rows.push((d, cumulative as f64 / n as f64));
        }
    }
    DegreeCdf {
        rows,
        mean_degree: if n == 0 {
            0.0
        } else {
            g.directed_edge_count() as f64 / n as f64
        },
    }
}

impl DegreeCdf {
    /// Cumulative fraction at `degree` (0 below the smallest degree).
    pub fn at(&self, degree: usize) -> f64 {
        self.rows
            .iter()
            .take_while(|(d, _)| *d <= degree)
            .last()
            .map_or(0.0, |&(_, f)| f)
    }
}

/// Least-squares line through `(ln d, ln count(d))` over degrees `d ≥ 1` with
/// a non-zero count. `None` when fewer than two such degrees exist or the
/// slope is not negative.
pub fn fit_powerlaw(g: &Graph) -> Option<PowerlawParams> {
    let points: Vec<(f64, f64)> = histogram(g)
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &c)| c > 0)
        .map(|(d, &c)| ((d as f64).ln(), (c as f64).ln()))
        .collect();
    if points.len() < 2 {
        return None;
    }
    let k = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / k;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let slope = sxy / sxx;
    if !slope.is_finite() || slope >= 0.0 {
        return None;
    }
    Some(PowerlawParams {
        exponent_beta: slope,
        scale_alpha: (mean_y - slope * mean_x).exp(),
    })
}

fn histogram(g: &Graph) -> Vec<usize> {
    let max = (0..g.n()).map(|v| g.degree(v)).max().unwrap_or(0);
    let mut hist = vec![0usize; max + 1];
    for v in 0..g.n() {
        hist[g.degree(v)] += 1;
    }
    hist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle_graph, generate_grid, generate_powerlaw, star_graph};

    #[test]
    fn cycle_cdf() {
        let cdf = degree_cdf(&cycle_graph(4).unwrap());
        assert_eq!(cdf.rows, vec![(2, 1.0)]);
        assert_eq!(cdf.mean_degree, 2.0);
    }

    #[test]
    fn star_cdf() {
        let cdf = degree_cdf(&star_graph(3).unwrap());
        assert_eq!(cdf.rows, vec![(1, 0.75), (3, 1.0)]);
        assert_eq!(cdf.at(2), 0.75);
        assert_eq!(cdf.at(0), 0.0);
    }

    #[test]
    fn powerlaw_cdf_is_front_loaded() {
        let cdf = degree_cdf(&generate_powerlaw(10_000, 2, 7).unwrap());
        assert!(cdf.at(10) >= 0.9, "cdf(10) = {}", cdf.at(10));
        assert!(cdf.rows.windows(2).all(|w| w[0].1 <= w[1].1));
        assert_eq!(cdf.rows.last().unwrap().1, 1.0);
    }

    #[test]
    fn powerlaw_fit_exponent() {
        let fit = fit_powerlaw(&generate_powerlaw(10_000, 3, 7).unwrap()).unwrap();
        assert!(
            fit.exponent_beta > -4.0 && fit.exponent_beta < -1.5,
            "beta = {}",
            fit.exponent_beta
        );
        assert!(fit.scale_alpha > 0.0);
    }

    #[test]
    fn lattice_has_no_powerlaw_fit() {
        // degrees 2, 3, 4 with counts rising toward 4: positive slope
        assert!(fit_powerlaw(&generate_grid(10, 10).unwrap()).is_none());
        assert!(fit_powerlaw(&cycle_graph(5).unwrap()).is_none());
    }
}
