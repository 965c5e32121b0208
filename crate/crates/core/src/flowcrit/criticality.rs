//! All-pairs total maximum flow and the arc criticality index
//! `r = 1 − m̃ / m̄`, where `m̄` sums the maximum flow over ordered pairs and
//! `m̃` is the same sum once one arc is deleted.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::maxflow::{FlowNetwork, FlowSolver, MaxFlowAlgorithm};
use crate::error::{Error, Result};
use crate::multinet::SupraAdjacency;

/// Above this many nodes the automatic mode samples pairs.
pub const EXACT_MODE_MAX_NODES: usize = 250;
pub const DEFAULT_SAMPLED_PAIRS: usize = 2_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CriticalityMode {
    /// Every ordered pair of distinct nodes.
    Exact,
    /// A seeded sample of ordered pairs, shared by the baseline and every
    /// arc removal.
    Sampled { pairs: usize, seed: u64 },
}

impl CriticalityMode {
    pub fn auto(node_count: usize, seed: u64) -> Self {
        if node_count > EXACT_MODE_MAX_NODES {
            CriticalityMode::Sampled { pairs: DEFAULT_SAMPLED_PAIRS, seed }
        } else {
            CriticalityMode::Exact
        }
    }

    /// Ordered `(source, target)` pairs, sorted.
    pub fn pairs(&self, node_count: usize) -> Vec<(usize, usize)> {
        match *self {
            CriticalityMode::Exact => all_pairs(node_count),
            CriticalityMode::Sampled { pairs, seed } => sample_pairs(node_count, pairs, seed),
        }
    }
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|s| (0..n).filter(move |&t| t != s).map(move |t| (s, t))).collect()
}

/// `min(count, n(n−1))` distinct ordered pairs drawn with ChaCha8 from
/// `seed`, returned in lexicographic order.
pub fn sample_pairs(n: usize, count: usize, seed: u64) -> Vec<(usize, usize)> {
    if n < 2 {
        return Vec::new();
    }
    let total = n * (n - 1);
    if count >= total {
        return all_pairs(n);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = sample(&mut rng, total, count).into_vec();
    picked.sort_unstable();
    picked
        .into_iter()
        .map(|ix| {
            let s = ix / (n - 1);
            let r = ix % (n - 1);
            (s, if r >= s { r + 1 } else { r })
        })
        .collect()
}

/// Maximum flow for every ordered pair; the diagonal is 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllPairsFlow {
    pub node_count: usize,
    /// Row-major `f[source * n + target]`.
    pub flows: Vec<f64>,
}

impl AllPairsFlow {
    pub fn get(&self, source: usize, target: usize) -> f64 {
        self.flows[source * self.node_count + target]
    }

    /// Sum over all ordered pairs in row-major order.
    pub fn total(&self) -> f64 {
        self.flows.iter().sum()
    }
}

/// All-pairs maximum flows (push-relabel), rows computed in parallel.
pub fn all_pairs_total(net: &FlowNetwork) -> (AllPairsFlow, f64) {
    let n = net.node_count();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|s| {
            let mut solver = FlowSolver::new(net);
            (0..n)
                .map(|t| {
                    if s == t {
                        0.0
                    } else {
                        solver.max_flow(s, t, MaxFlowAlgorithm::PushRelabel).expect("distinct in-range terminals")
                    }
                })
                .collect()
        })
        .collect();
    let apf = AllPairsFlow { node_count: n, flows: rows.concat() };
    let total = apf.total();
    (apf, total)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalityRow {
    pub tail: usize,
    pub head: usize,
    pub capacity: f64,
    pub removed_total: f64,
    pub index: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcCriticalityReport {
    pub baseline_total: f64,
    pub mode: CriticalityMode,
    pub pair_count: usize,
    /// Sorted by index descending, then `(tail, head)`.
    pub rows: Vec<CriticalityRow>,
}

impl ArcCriticalityReport {
    pub fn top(&self, k: usize) -> &[CriticalityRow] {
        &self.rows[..k.min(self.rows.len())]
    }
}

/// Deletes each arc in turn and recomputes the pair-set total.
///
/// For a pair whose baseline maximum flow leaves the deleted arc unused,
/// that flow stays feasible and optimal, so only pairs routing flow through
/// the arc are solved again. Per-pair values after deletion are capped at
/// the baseline value (deletion cannot raise a maximum flow; the cap only
/// absorbs rounding), which keeps `m̃ ≤ m̄` exactly.
pub fn arc_criticality(net: &FlowNetwork, mode: CriticalityMode) -> Result<ArcCriticalityReport> {
    let n = net.node_count();
    let pairs = mode.pairs(n);
    let baseline: Vec<(f64, Vec<usize>)> = pairs
        .par_iter()
        .map_init(
            || FlowSolver::new(net),
            |solver, &(s, t)| {
                let value = solver.max_flow(s, t, MaxFlowAlgorithm::Dinic).expect("distinct in-range terminals");
                (value, solver.used_arcs().collect())
            },
        )
        .collect();
    let baseline_total: f64 = baseline.iter().map(|b| b.0).sum();
    if baseline_total.is_nan() || baseline_total <= 0.0 {
        return Err(Error::ZeroBaseline);
    }
    let mut users: Vec<Vec<usize>> = vec![Vec::new(); net.arc_count()];
    for (p, (_, used)) in baseline.iter().enumerate() {
        for &a in used {
            users[a].push(p);
        }
    }
    let mut rows: Vec<CriticalityRow> = (0..net.arc_count())
        .into_par_iter()
        .map(|a| {
            let reduced = net.without_arc(a);
            let mut solver = FlowSolver::new(&reduced);
            let mut per_pair: Vec<f64> = baseline.iter().map(|b| b.0).collect();
            for &p in &users[a] {
                let (s, t) = pairs[p];
                let v = solver.max_flow(s, t, MaxFlowAlgorithm::Dinic).expect("distinct in-range terminals");
                per_pair[p] = v.min(baseline[p].0);
            }
            let removed_total: f64 = per_pair.iter().sum();
            let (tail, head, capacity) = net.arcs()[a];
            CriticalityRow { tail, head, capacity, removed_total, index: 1.0 - removed_total / baseline_total }
        })
        .collect();
    rows.sort_by(|a, b| b.index.total_cmp(&a.index).then((a.tail, a.head).cmp(&(b.tail, b.head))));
    Ok(ArcCriticalityReport { baseline_total, mode, pair_count: pairs.len(), rows })
}

/// Flow network on the `L` economies whose arcs are the summed sector flows
/// between each ordered pair of economies.
pub fn country_flow_network(w: &SupraAdjacency) -> Result<FlowNetwork> {
    FlowNetwork::from_dense(&w.aggregate_to_layers())
}

pub fn country_level_criticality(w: &SupraAdjacency, mode: CriticalityMode) -> Result<ArcCriticalityReport> {
    arc_criticality(&country_flow_network(w)?, mode)
}
