use std::fmt;
use std::str::FromStr;

use metasketch::graph::{
    complete_graph, cycle_graph, generate_gnm, generate_grid, generate_powerlaw, path_graph, star_graph,
};
use metasketch::{Graph, Result};

/// A `--generate` argument such as `grid:16x16` or `powerlaw:1000,2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorSpec {
    Grid(usize, usize),
    Powerlaw(usize, usize),
    Gnm(usize, usize),
    Path(usize),
    Cycle(usize),
    Star(usize),
    Complete(usize),
}

impl GeneratorSpec {
    /// Only `powerlaw` and `gnm` use the seed.
    pub fn build(self, seed: u64) -> Result<Graph> {
        match self {
            GeneratorSpec::Grid(w, h) => generate_grid(w, h),
            GeneratorSpec::Powerlaw(n, a) => generate_powerlaw(n, a, seed),
            GeneratorSpec::Gnm(n, m) => generate_gnm(n, m, seed),
            GeneratorSpec::Path(n) => path_graph(n),
            GeneratorSpec::Cycle(n) => cycle_graph(n),
            GeneratorSpec::Star(leaves) => star_graph(leaves),
            GeneratorSpec::Complete(n) => complete_graph(n),
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::Grid(w, h) => write!(f, "grid:{w}x{h}"),
            GeneratorSpec::Powerlaw(n, a) => write!(f, "powerlaw:{n},{a}"),
            GeneratorSpec::Gnm(n, m) => write!(f, "gnm:{n},{m}"),
            GeneratorSpec::Path(n) => write!(f, "path:{n}"),
            GeneratorSpec::Cycle(n) => write!(f, "cycle:{n}"),
            GeneratorSpec::Star(l) => write!(f, "star:{l}"),
            GeneratorSpec::Complete(n) => write!(f, "complete:{n}"),
        }
    }
}

fn pair(s: &str, sep: char) -> Option<(usize, usize)> {
    let (a, b) = s.split_once(sep)?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

impl FromStr for GeneratorSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || {
            format!("invalid generator spec {s:?}; expected e.g. grid:16x16, powerlaw:1000,2, gnm:100,300, path:10, cycle:10, star:8 or complete:5")
        };
        let (kind, args) = s.split_once(':').ok_or_else(bad)?;
        let single = || args.trim().parse::<usize>().map_err(|_| bad());
        Ok(match kind.trim().to_ascii_lowercase().as_str() {
            "grid" => {
                let (w, h) = pair(&args.to_ascii_lowercase(), 'x').ok_or_else(bad)?;
                GeneratorSpec::Grid(w, h)
            }
            "powerlaw" => {
                let (n, a) = pair(args, ',').ok_or_else(bad)?;
                GeneratorSpec::Powerlaw(n, a)
            }
            "gnm" => {
                let (n, m) = pair(args, ',').ok_or_else(bad)?;
                GeneratorSpec::Gnm(n, m)
            }
            "path" => GeneratorSpec::Path(single()?),
            "cycle" => GeneratorSpec::Cycle(single()?),
            "star" => GeneratorSpec::Star(single()?),
            "complete" => GeneratorSpec::Complete(single()?),
            _ => return Err(bad()),
        })
    }
}
