//! Synthetic graphs: lattices stand in for spatial networks, preferential
//! attachment for powerlaw networks, plus the small shapes used as fixtures.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Graph;
use crate::error::{Error, Result};

/// 4-neighbor `width × height` lattice; vertex `(x, y)` has id `y·width + x`.
pub fn generate_grid(width: usize, height: usize) -> Result<Graph> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidArgument(format!(
            "grid dimensions must be positive, got {width}x{height}"
        )));
    }
    let id = |x: usize, y: usize| y * width + x;
    let mut edges = Vec::with_capacity(2 * width * height);
    for y in 0..height {
        for x in 0..width {
            if x + 1 < width {
                edges.push((id(x, y), id(x + 1, y)));
            }
            if y + 1 < height {
                edges.push((id(x, y), id(x, y + 1)));
            }
        }
    }
    Graph::from_edges(width * height, edges)
}

/// Preferential attachment.
///
/// Vertices `0..attach` start as a clique. Each later vertex links to
/// `attach` distinct earlier vertices drawn with probability proportional to
/// degree (uniformly while every earlier vertex still has degree 0);
/// duplicate draws are redrawn. The result is connected and has exactly
/// `attach·(attach−1)/2 + attach·(n−attach)` edges.
pub fn generate_powerlaw(n: usize, attach: usize, seed: u64) -> Result<Graph> {
    if attach == 0 || n <= attach {
        return Err(Error::InvalidArgument(format!(
            "powerlaw generator needs n > attach >= 1, got n={n}, attach={attach}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(attach * n);
    // one entry per arc endpoint, so a uniform pick is degree-proportional
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * attach * n);
    for u in 0..attach {
        for v in u + 1..attach {
            edges.push((u, v));
            endpoints.push(u);
            endpoints.push(v);
        }
    }
    let mut chosen = Vec::with_capacity(attach);
    for v in attach..n {
        chosen.clear();
        while chosen.len() < attach {
            let t = if endpoints.is_empty() {
                rng.gen_range(0..v)
            } else {
                endpoints[rng.gen_range(0..endpoints.len())]
            };
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for &t in &chosen {
            edges.push((v, t));
            endpoints.push(v);
            endpoints.push(t);
        }
    }
    Graph::from_edges(n, edges)
}

/// Uniform random simple graph with exactly `m` edges.
pub fn generate_gnm(n: usize, m: usize, seed: u64) -> Result<Graph> {
    let max_edges = n.saturating_mul(n.saturating_sub(1)) / 2;
    if n == 0 || m > max_edges {
        return Err(Error::InvalidArgument(format!(
            "G(n, m) needs n >= 1 and m <= n(n-1)/2, got n={n}, m={m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if seen.insert(key) {
            edges.push(key);
        }
    }
    Graph::from_edges(n, edges)
}

pub fn path_graph(n: usize) -> Result<Graph> {
    nonempty(n)?;
    Graph::from_edges(n, (1..n).map(|v| (v - 1, v)))
}

pub fn cycle_graph(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("cycle needs n >= 3, got {n}")));
    }
    Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n)))
}

/// `K_{1,leaves}` with the hub at vertex 0.
pub fn star_graph(leaves: usize) -> Result<Graph> {
    Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v)))
}

pub fn complete_graph(n: usize) -> Result<Graph> {
    nonempty(n)?;
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

/// Random permutation of `0..n`, used to relabel graphs before hashing.
pub fn random_permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    perm
}

fn nonempty(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("graph needs at least one vertex".into()));
    }
    Ok(())
}
