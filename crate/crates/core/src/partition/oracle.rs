use super::balance_cap;
use crate::error::{Error, Result};
use crate::graph::Graph;

pub const MINCUT_ORACLE_CAP: usize = 14;

/// Exact minimum edge cut over every assignment into `p` non-empty parts of
/// at most `ceil(balance_factor · n / p)` vertices, by enumeration.
pub fn mincut_oracle(g: &Graph, p: usize, balance_factor: f64) -> Result<usize> {
    let n = g.n();
    if n > MINCUT_ORACLE_CAP {
        return Err(Error::OverCap {
            what: "min-cut oracle",
            size: n,
            cap: MINCUT_ORACLE_CAP,
            hint: "enumeration is exponential; use a smaller graph",
        });
    }
    if !(2..=3).contains(&p) || p > n {
        return Err(Error::InvalidArgument(format!(
            "min-cut oracle supports p in {{2, 3}} with p <= n, got p={p}, n={n}"
        )));
    }
    let mut search = Search {
        g,
        p,
        cap: balance_cap(n, p, balance_factor),
        part: vec![usize::MAX; n],
        sizes: vec![0; p],
        best: usize::MAX,
    };
    search.visit(0, 0);
    if search.best == usize::MAX {
        return Err(Error::InvalidArgument(
            "no assignment satisfies the balance cap".into(),
        ));
    }
    Ok(search.best)
}

struct Search<'a> {
    g: &'a Graph,
    p: usize,
    cap: usize,
    part: Vec<usize>,
    sizes: Vec<usize>,
    best: usize,
}

impl Search<'_> {
    fn visit(&mut self, v: usize, cut: usize) {
        let n = self.g.n();
        if cut >= self.best {
            return;
        }
        let empty = self.sizes.iter().filter(|&&s| s == 0).count();
        if n - v < empty {
            return;
        }
        if v == n {
            self.best = cut;
            return;
        }
        // parts are interchangeable: v may open at most one new part
        let opened = self.sizes.iter().take_while(|&&s| s > 0).count();
        for i in 0..self.p.min(opened + 1) {
            if self.sizes[i] == self.cap {
                continue;
            }
            let added = self
                .g
                .neighbors(v)
                .iter()
                .filter(|&&w| w < v && self.part[w] != i)
                .count();
            self.part[v] = i;
            self.sizes[i] += 1;
            self.visit(v + 1, cut + added);
            self.sizes[i] -= 1;
            self.part[v] = usize::MAX;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, cycle_graph, path_graph};

    #[test]
    fn known_minimums() {
        assert_eq!(mincut_oracle(&cycle_graph(6).unwrap(), 2, 1.0).unwrap(), 2);
        assert_eq!(mincut_oracle(&complete_graph(4).unwrap(), 2, 1.0).unwrap(), 4);
        assert_eq!(mincut_oracle(&path_graph(4).unwrap(), 2, 1.0).unwrap(), 1);
        assert_eq!(mincut_oracle(&cycle_graph(9).unwrap(), 3, 1.0).unwrap(), 3);
    }

    #[test]
    fn refuses_large_graphs() {
        assert!(matches!(
            mincut_oracle(&path_graph(15).unwrap(), 2, 1.0),
            Err(Error::OverCap { .. })
        ));
        assert!(mincut_oracle(&path_graph(5).unwrap(), 4, 1.0).is_err());
    }

    /// Cross-check against plain enumeration of all p^n labelings.
    #[test]
    fn agrees_with_brute_force() {
        use crate::graph::generate_gnm;
        for seed in 0..20 {
            let n = 5 + (seed as usize % 4);
            let g = generate_gnm(n, n + 2, seed).unwrap();
            for p in [2, 3] {
                let cap = balance_cap(n, p, 1.0);
                let mut best = usize::MAX;
                for code in 0..p.pow(n as u32) {
                    let mut x = code;
                    let part: Vec<usize> = (0..n)
                        .map(|_| {
                            let d = x % p;
                            x /= p;
                            d
                        })
                        .collect();
                    let mut sizes = vec![0; p];
                    for &i in &part {
                        sizes[i] += 1;
                    }
                    if sizes.iter().any(|&s| s == 0 || s > cap) {
                        continue;
                    }
                    let cut = g.edges().filter(|&(u, v)| part[u] != part[v]).count();
                    best = best.min(cut);
                }
                assert_eq!(mincut_oracle(&g, p, 1.0).unwrap(), best);
            }
        }
    }
}
