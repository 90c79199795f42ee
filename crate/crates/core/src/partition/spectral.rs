//! Laplacian spectrum and the eigenvalue lower bound on balanced edge cuts.

use serde::{Deserialize, Serialize};

use super::balance_cap;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest graph the dense eigensolve accepts.
pub const DONATH_CAP: usize = 2_000;

/// Jacobi stops once the off-diagonal Frobenius norm falls below this.
pub const JACOBI_TOLERANCE: f64 = 1e-9;

const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DonathBound {
    /// `½ · Σ_{i≤p} m_i · λ_i` over the `p` smallest eigenvalues, with part
    /// sizes `m_i` filled greedily at `ceil(n/p)`. Equals
    /// `(n / 2p) · Σ_{i≤p} λ_i` whenever `p` divides `n`.
    pub bound: f64,
    /// `(n / p) · Σ` of the `p` largest eigenvalues. Not a valid lower bound
    /// in general; reported for comparison only.
    pub printed_form: f64,
    /// Laplacian spectrum, ascending.
    pub eigenvalues: Vec<f64>,
}

/// Dense `L = D − A`, row-major.
pub fn laplacian(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let mut l = vec![0.0; n * n];
    for v in 0..n {
        l[v * n + v] = g.degree(v) as f64;
        for &w in g.neighbors(v) {
            l[v * n + w] = -1.0;
        }
    }
    l
}

/// Eigenvalues of a dense symmetric `n × n` matrix by cyclic Jacobi
/// rotations, ascending.
pub fn jacobi_eigenvalues(mut a: Vec<f64>, n: usize) -> Vec<f64> {
    assert_eq!(a.len(), n * n, "matrix must be n x n");
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].powi(2))
            .sum::<f64>()
            .sqrt();
        if off < JACOBI_TOLERANCE {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// Spectral lower bound on the minimum edge cut of a `p`-way partition with
/// parts of at most `ceil(n/p)` vertices.
pub fn donath_bound(g: &Graph, p: usize) -> Result<DonathBound> {
    let n = g.n();
    if n > DONATH_CAP {
        return Err(Error::OverCap {
            what: "spectral cut bound",
            size: n,
            cap: DONATH_CAP,
            hint: "the dense eigensolve is cubic in n",
        });
    }
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if p == 0 || p > n {
        return Err(Error::InvalidArgument(format!(
            "partition count must satisfy 1 <= p <= n, got p={p}, n={n}"
        )));
    }
    let eigenvalues = jacobi_eigenvalues(laplacian(g), n);
    let cap = balance_cap(n, p, 1.0);
    let sizes: Vec<usize> = (0..p).map(|i| cap.min(n - (i * cap).min(n))).collect();
    let bound = size_aware_bound(&eigenvalues, &sizes);
    let largest: f64 = eigenvalues[n - p..].iter().sum();
    Ok(DonathBound {
        bound,
        printed_form: n as f64 / p as f64 * largest,
        eigenvalues,
    })
}

/// `½ · Σ m_i · λ_i`, pairing the largest part sizes with the smallest
/// eigenvalues. A lower bound on the cut of any partition with these sizes;
/// the greedy sizes used by [`donath_bound`] minimize it over all partitions
/// whose parts stay within the cap.
pub fn size_aware_bound(eigenvalues: &[f64], sizes: &[usize]) -> f64 {
    let mut sizes = sizes.to_vec();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    0.5 * sizes
        .iter()
        .zip(eigenvalues)
        .map(|(&m, &lambda)| m as f64 * lambda)
        .sum::<f64>()
}
