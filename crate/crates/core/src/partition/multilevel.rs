//! Multilevel k-way partitioning: heavy-edge matching, greedy graph growing,
//! boundary FM refinement with rollback to the best prefix.

use std::cmp::Reverse;
use std::collections::{BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

const MAX_REFINE_PASSES: usize = 10;
const UNASSIGNED: usize = usize::MAX;

/// CSR graph with vertex and edge weights.
#[derive(Debug, Clone)]
struct WeightedGraph {
    offsets: Vec<usize>,
    adj: Vec<usize>,
    ewgt: Vec<u64>,
    vwgt: Vec<u64>,
}

impl WeightedGraph {
    fn from_graph(g: &Graph) -> Self {
        let mut offsets = Vec::with_capacity(g.n() + 1);
        let mut adj = Vec::with_capacity(g.directed_edge_count());
        offsets.push(0);
        for v in 0..g.n() {
            adj.extend_from_slice(g.neighbors(v));
            offsets.push(adj.len());
        }
        Self {
            ewgt: vec![1; adj.len()],
            vwgt: vec![1; g.n()],
            offsets,
            adj,
        }
    }

    fn n(&self) -> usize {
        self.vwgt.len()
    }

    fn total_weight(&self) -> u64 {
        self.vwgt.iter().sum()
    }

    fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        let range = self.offsets[v]..self.offsets[v + 1];
        self.adj[range.clone()]
            .iter()
            .copied()
            .zip(self.ewgt[range].iter().copied())
    }

    fn cut(&self, part: &[usize]) -> u64 {
        let mut cut = 0;
        for v in 0..self.n() {
            for (w, ew) in self.neighbors(v) {
                if v < w && part[v] != part[w] {
                    cut += ew;
                }
            }
        }
        cut
    }
}

pub(super) fn multilevel(g: &Graph, p: usize, cap: u64, seed: u64) -> Vec<usize> {
    let n = g.n();
    if p <= 1 {
        return vec![0; n];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let threshold = (30 * p).max(200);
    let max_vwgt = ((1.5 * n as f64 / threshold as f64).ceil() as u64).max(1);

    let mut levels: Vec<(WeightedGraph, Vec<usize>)> = Vec::new();
    let mut current = WeightedGraph::from_graph(g);
    while current.n() > threshold {
        let (coarse, cmap) = coarsen(&current, &mut rng, max_vwgt);
        // stalled: less than 5% reduction
        if coarse.n() * 20 > current.n() * 19 {
            break;
        }
        levels.push((current, cmap));
        current = coarse;
    }

    let trials = if current.n() <= 64 { 8 } else { 4 };
    let mut part = initial_partition(&current, p, cap, &mut rng, trials);
    while let Some((finer, cmap)) = levels.pop() {
        part = cmap.iter().map(|&c| part[c]).collect();
        refine(&finer, &mut part, p, cap);
    }
    part
}

/// One round of heavy-edge matching. Vertices are visited in seeded random
/// order; each unmatched vertex pairs with the unmatched neighbor joined by
/// the heaviest edge (lower id on ties) whose combined weight stays within
/// `max_vwgt`.
fn coarsen(g: &WeightedGraph, rng: &mut ChaCha8Rng, max_vwgt: u64) -> (WeightedGraph, Vec<usize>) {
    let n = g.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut mate = vec![UNASSIGNED; n];
    for &u in &order {
        if mate[u] != UNASSIGNED {
            continue;
        }
        let mut best: Option<(u64, usize)> = None;
        for (v, w) in g.neighbors(u) {
            if mate[v] != UNASSIGNED || g.vwgt[u] + g.vwgt[v] > max_vwgt {
                continue;
            }
            best = match best {
                Some((bw, bv)) if bw > w || (bw == w && bv < v) => Some((bw, bv)),
                _ => Some((w, v)),
            };
        }
        match best {
            Some((_, v)) => {
                mate[u] = v;
                mate[v] = u;
            }
            None => mate[u] = u,
        }
    }

    let mut cmap = vec![UNASSIGNED; n];
    let mut members: Vec<(usize, usize)> = Vec::new();
    for u in 0..n {
        if cmap[u] == UNASSIGNED {
            cmap[u] = members.len();
            cmap[mate[u]] = members.len();
            members.push((u, mate[u]));
        }
    }

    let cn = members.len();
    let mut offsets = Vec::with_capacity(cn + 1);
    let mut adj = Vec::new();
    let mut ewgt = Vec::new();
    let mut vwgt = Vec::with_capacity(cn);
    let mut slot = vec![UNASSIGNED; cn];
    offsets.push(0);
    for (c, &(a, b)) in members.iter().enumerate() {
        let start = adj.len();
        let fine: &[usize] = if a == b { &[a][..] } else { &[a, b][..] };
        let mut weight = 0;
        for &u in fine {
            weight += g.vwgt[u];
            for (v, w) in g.neighbors(u) {
                let cv = cmap[v];
                if cv == c {
                    continue;
                }
                if slot[cv] == UNASSIGNED {
                    slot[cv] = adj.len();
                    adj.push(cv);
                    ewgt.push(w);
                } else {
                    ewgt[slot[cv]] += w;
                }
            }
        }
        for &cv in &adj[start..] {
            slot[cv] = UNASSIGNED;
        }
        // keep neighbor lists sorted so scans break ties by id
        let mut pairs: Vec<(usize, u64)> = adj[start..]
            .iter()
            .copied()
            .zip(ewgt[start..].iter().copied())
            .collect();
        pairs.sort_unstable();
        for (i, (cv, w)) in pairs.into_iter().enumerate() {
            adj[start + i] = cv;
            ewgt[start + i] = w;
        }
        vwgt.push(weight);
        offsets.push(adj.len());
    }
    (
        WeightedGraph {
            offsets,
            adj,
            ewgt,
            vwgt,
        },
        cmap,
    )
}

/// Greedy graph growing, refined; best of `trials` by (overflow, cut).
/// Trial 0 seeds each part at the unassigned vertex farthest from what is
/// already assigned; later trials seed at random.
fn initial_partition(
    g: &WeightedGraph,
    p: usize,
    cap: u64,
    rng: &mut ChaCha8Rng,
    trials: usize,
) -> Vec<usize> {
    let mut best: Option<((u64, u64), Vec<usize>)> = None;
    for trial in 0..trials {
        let mut part = grow(g, p, rng, trial == 0);
        refine(g, &mut part, p, cap);
        let score = (overflow(g, &part, p, cap), g.cut(&part));
        if best.as_ref().is_none_or(|(s, _)| score < *s) {
            best = Some((score, part));
        }
    }
    best.expect("at least one trial").1
}

fn overflow(g: &WeightedGraph, part: &[usize], p: usize, cap: u64) -> u64 {
    let mut pw = vec![0u64; p];
    for (v, &i) in part.iter().enumerate() {
        pw[i] += g.vwgt[v];
    }
    pw.iter().map(|&w| w.saturating_sub(cap)).sum()
}

fn grow(g: &WeightedGraph, p: usize, rng: &mut ChaCha8Rng, farthest_seeds: bool) -> Vec<usize> {
    let n = g.n();
    let mut part = vec![UNASSIGNED; n];
    let mut unassigned = n;
    let mut remaining_weight = g.total_weight();
    let wdeg: Vec<u64> = (0..n).map(|v| g.neighbors(v).map(|(_, w)| w).sum()).collect();
    let mut conn = vec![0u64; n];
    for k in 0..p {
        if k == p - 1 {
            for x in part.iter_mut().filter(|x| **x == UNASSIGNED) {
                *x = k;
            }
            break;
        }
        let target = remaining_weight as f64 / (p - k) as f64;
        // leave at least one vertex for every later part
        let reserve = p - 1 - k;
        let mut weight = 0u64;
        let mut frontier: BTreeSet<(i64, usize)> = BTreeSet::new();
        let mut key: Vec<Option<i64>> = vec![None; n];
        let mut touched: Vec<usize> = Vec::new();
        loop {
            if unassigned <= reserve || (weight as f64) >= target {
                break;
            }
            let v = match frontier.pop_first() {
                Some((_, v)) => {
                    key[v] = None;
                    v
                }
                None => pick_seed(g, &part, rng, farthest_seeds),
            };
            let vw = g.vwgt[v];
            if weight > 0 && (weight + vw) as f64 - target > target - weight as f64 {
                break;
            }
            part[v] = k;
            unassigned -= 1;
            weight += vw;
            for (w, ew) in g.neighbors(v) {
                if part[w] != UNASSIGNED {
                    continue;
                }
                if conn[w] == 0 {
                    touched.push(w);
                }
                conn[w] += ew;
                if let Some(old) = key[w].take() {
                    frontier.remove(&(old, w));
                }
                // negated gain of pulling w into part k
                let gain = 2 * conn[w] as i64 - wdeg[w] as i64;
                key[w] = Some(-gain);
                frontier.insert((-gain, w));
            }
        }
        for w in touched {
            conn[w] = 0;
        }
        remaining_weight -= weight;
    }
    part
}

fn pick_seed(g: &WeightedGraph, part: &[usize], rng: &mut ChaCha8Rng, farthest: bool) -> usize {
    let free: Vec<usize> = (0..g.n()).filter(|&v| part[v] == UNASSIGNED).collect();
    if !farthest {
        return free[rng.gen_range(0..free.len())];
    }
    let assigned: Vec<usize> = (0..g.n()).filter(|&v| part[v] != UNASSIGNED).collect();
    // nothing assigned yet: pseudo-peripheral vertex of the first free one
    let sources = if assigned.is_empty() {
        vec![free[0]]
    } else {
        assigned
    };
    let dist = multi_source_bfs(g, &sources);
    let mut best = free[0];
    for &v in &free {
        let better = match (dist[v], dist[best]) {
            (None, Some(_)) => true,
            (Some(a), Some(b)) => a > b,
            _ => false,
        };
        if better {
            best = v;
        }
    }
    best
}

fn multi_source_bfs(g: &WeightedGraph, sources: &[usize]) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.n()];
    let mut queue = VecDeque::new();
    for &s in sources {
        dist[s] = Some(0);
        queue.push_back(s);
    }
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for (w, _) in g.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Part weights, vertex counts and a reusable connectivity scratch buffer.
struct RefineState {
    pw: Vec<u64>,
    counts: Vec<usize>,
    conn: Vec<u64>,
    touched: Vec<usize>,
}

impl RefineState {
    fn new(g: &WeightedGraph, part: &[usize], p: usize) -> Self {
        let mut pw = vec![0; p];
        let mut counts = vec![0; p];
        for (v, &i) in part.iter().enumerate() {
            pw[i] += g.vwgt[v];
            counts[i] += 1;
        }
        Self {
            pw,
            counts,
            conn: vec![0; p],
            touched: Vec::new(),
        }
    }

    fn load_conn(&mut self, g: &WeightedGraph, part: &[usize], v: usize) {
        for (w, ew) in g.neighbors(v) {
            let i = part[w];
            if self.conn[i] == 0 {
                self.touched.push(i);
            }
            self.conn[i] += ew;
        }
    }

    fn clear_conn(&mut self) {
        for i in self.touched.drain(..) {
            self.conn[i] = 0;
        }
    }

    /// Best feasible boundary move of `v`: (gain, target part).
    fn best_move(&mut self, g: &WeightedGraph, part: &[usize], v: usize, cap: u64) -> Option<(i64, usize)> {
        let from = part[v];
        if self.counts[from] <= 1 {
            return None;
        }
        self.load_conn(g, part, v);
        let internal = self.conn[from] as i64;
        let mut best: Option<(i64, usize)> = None;
        for &to in &self.touched {
            if to == from || self.pw[to] + g.vwgt[v] > cap {
                continue;
            }
            let gain = self.conn[to] as i64 - internal;
            best = match best {
                Some((bg, bt)) if bg > gain || (bg == gain && bt < to) => Some((bg, bt)),
                _ => Some((gain, to)),
            };
        }
        self.clear_conn();
        best
    }

    fn apply(&mut self, g: &WeightedGraph, part: &mut [usize], v: usize, to: usize) -> usize {
        let from = part[v];
        part[v] = to;
        self.pw[from] -= g.vwgt[v];
        self.pw[to] += g.vwgt[v];
        self.counts[from] -= 1;
        self.counts[to] += 1;
        from
    }
}

fn refine(g: &WeightedGraph, part: &mut [usize], p: usize, cap: u64) {
    let mut state = RefineState::new(g, part, p);
    rebalance(g, part, &mut state, cap);
    for _ in 0..MAX_REFINE_PASSES {
        if !fm_pass(g, part, &mut state, cap) {
            break;
        }
    }
}

/// Moves vertices out of parts above `cap`, cheapest cut increase first,
/// until every part fits or no feasible move remains.
fn rebalance(g: &WeightedGraph, part: &mut [usize], state: &mut RefineState, cap: u64) {
    loop {
        let Some(heavy) = (0..state.pw.len())
            .filter(|&i| state.pw[i] > cap)
            .max_by_key(|&i| (state.pw[i], std::cmp::Reverse(i)))
        else {
            return;
        };
        if state.counts[heavy] <= 1 {
            return;
        }
        let lightest = (0..state.pw.len())
            .filter(|&i| i != heavy)
            .min_by_key(|&i| (state.pw[i], i))
            .expect("p >= 2");
        // highest gain, then lowest vertex, then lowest target
        let mut best: Option<(i64, Reverse<usize>, Reverse<usize>)> = None;
        for v in (0..g.n()).filter(|&v| part[v] == heavy) {
            state.load_conn(g, part, v);
            let internal = state.conn[heavy] as i64;
            let mut candidates: Vec<usize> = state.touched.clone();
            candidates.push(lightest);
            for to in candidates {
                if to == heavy || state.pw[to] + g.vwgt[v] > cap {
                    continue;
                }
                let gain = state.conn[to] as i64 - internal;
                let key = (gain, Reverse(v), Reverse(to));
                if best.is_none_or(|b| key > b) {
                    best = Some(key);
                }
            }
            state.clear_conn();
        }
        match best {
            Some((_, Reverse(v), Reverse(to))) => {
                state.apply(g, part, v, to);
            }
            None => return,
        }
    }
}

/// One FM pass over boundary vertices. Moves are taken greedily by gain even
/// when negative; the pass then rolls back to the lowest-cut prefix. Returns
/// whether the cut improved.
fn fm_pass(g: &WeightedGraph, part: &mut [usize], state: &mut RefineState, cap: u64) -> bool {
    let n = g.n();
    let limit = 50.max(n / 20);
    let mut locked = vec![false; n];
    let mut key: Vec<Option<i64>> = vec![None; n];
    let mut queue: BTreeSet<(i64, usize)> = BTreeSet::new();
    for (v, slot) in key.iter_mut().enumerate() {
        if let Some((gain, _)) = state.best_move(g, part, v, cap) {
            *slot = Some(-gain);
            queue.insert((-gain, v));
        }
    }

    let mut moves: Vec<(usize, usize)> = Vec::new();
    let mut total = 0i64;
    let mut best_total = 0i64;
    let mut best_len = 0usize;
    while let Some((neg_gain, v)) = queue.pop_first() {
        key[v] = None;
        if locked[v] {
            continue;
        }
        let Some((gain, to)) = state.best_move(g, part, v, cap) else {
            continue;
        };
        if gain != -neg_gain {
            key[v] = Some(-gain);
            queue.insert((-gain, v));
            continue;
        }
        let from = state.apply(g, part, v, to);
        locked[v] = true;
        moves.push((v, from));
        total += gain;
        if total > best_total {
            best_total = total;
            best_len = moves.len();
        } else if moves.len() - best_len > limit {
            break;
        }
        for (w, _) in g.neighbors(v) {
            if locked[w] {
                continue;
            }
            if let Some(old) = key[w].take() {
                queue.remove(&(old, w));
            }
            if let Some((gw, _)) = state.best_move(g, part, w, cap) {
                key[w] = Some(-gw);
                queue.insert((-gw, w));
            }
        }
    }
    for &(v, from) in moves[best_len..].iter().rev() {
        state.apply(g, part, v, from);
    }
    best_total > 0
}
