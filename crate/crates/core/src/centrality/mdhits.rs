//! Multi-dimensional HITS over a temporal multilayer network.
//!
//! With the arc weights `w_ij^{αβ}(t)` viewed as a 5-way tensor, each score
//! is a sum over the other four indices:
//!
//! ```text
//! x_i = Σ (w · y_j · b_α · z_β · u_t)^γ₁      node hub
//! y_j = Σ (w · x_i · b_α · z_β · u_t)^γ₂      node authority
//! b_α = Σ (w · x_i · y_j · z_β · u_t)^γ₃      layer broadcast
//! z_β = Σ (w · x_i · y_j · b_α · u_t)^γ₄      layer receive
//! u_t = Σ (w · x_i · y_j · b_α · z_β)^γ₅      time
//! ```
//!
//! One sweep updates the vectors in that order, each from the freshest
//! values of the others, and rescales it to unit 1-norm. All vectors start
//! uniform. Absent arcs contribute nothing (`0^γ = 0`), so an entity with no
//! incident weight anywhere in the tensor scores exactly 0.
//!
//! Sums run over fixed-size chunks of the arc list and the partial vectors
//! are added in chunk order, so results do not depend on the thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{l1_distance, normalize_l1};
use crate::error::{Error, Result};
use crate::multinet::{SupraAdjacency, TemporalMultilayerNetwork};

const CHUNK: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MdHitsConfig {
    pub gamma: [f64; 5],
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for MdHitsConfig {
    fn default() -> Self {
        Self { gamma: [0.2; 5], tol: 1e-10, max_iter: 1000 }
    }
}

impl MdHitsConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(g) = self.gamma.iter().find(|g| !(**g > 0.0 && **g <= 1.0)) {
            return Err(Error::validation(format!("gamma entries must lie in (0, 1], got {g}")));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::validation("tolerance must be positive"));
        }
        if self.max_iter == 0 {
            return Err(Error::validation("max_iter must be at least 1"));
        }
        Ok(())
    }
}

/// The five named score vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreSection {
    NodeHub,
    NodeAuthority,
    LayerBroadcast,
    LayerReceive,
    Time,
}

impl ScoreSection {
    pub const ALL: [ScoreSection; 5] = [
        ScoreSection::NodeHub,
        ScoreSection::NodeAuthority,
        ScoreSection::LayerBroadcast,
        ScoreSection::LayerReceive,
        ScoreSection::Time,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScoreSection::NodeHub => "node_hub",
            ScoreSection::NodeAuthority => "node_authority",
            ScoreSection::LayerBroadcast => "layer_broadcast",
            ScoreSection::LayerReceive => "layer_receive",
            ScoreSection::Time => "time",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MdHitsScores {
    pub node_hub: Vec<f64>,
    pub node_authority: Vec<f64>,
    pub layer_broadcast: Vec<f64>,
    pub layer_receive: Vec<f64>,
    pub time: Vec<f64>,
    pub gamma: [f64; 5],
    pub iterations: usize,
    pub residual: f64,
}

impl MdHitsScores {
    pub fn section(&self, section: ScoreSection) -> &[f64] {
        match section {
            ScoreSection::NodeHub => &self.node_hub,
            ScoreSection::NodeAuthority => &self.node_authority,
            ScoreSection::LayerBroadcast => &self.layer_broadcast,
            ScoreSection::LayerReceive => &self.layer_receive,
            ScoreSection::Time => &self.time,
        }
    }
}

/// Arc list of the whole tensor with the weights raised to each distinct
/// exponent once.
struct Tensor {
    node_src: Vec<u32>,
    node_dst: Vec<u32>,
    layer_src: Vec<u32>,
    layer_dst: Vec<u32>,
    period: Vec<u32>,
    powered: Vec<Vec<f64>>,
    /// Index into `powered` for each of the five exponents.
    slot: [usize; 5],
}

impl Tensor {
    fn new(net: &TemporalMultilayerNetwork, gamma: &[f64; 5]) -> Self {
        let shape = net.shape();
        let nnz = net.n_arcs();
        let mut t = Tensor {
            node_src: Vec::with_capacity(nnz),
            node_dst: Vec::with_capacity(nnz),
            layer_src: Vec::with_capacity(nnz),
            layer_dst: Vec::with_capacity(nnz),
            period: Vec::with_capacity(nnz),
            powered: Vec::new(),
            slot: [0; 5],
        };
        let mut weights = Vec::with_capacity(nnz);
        for (p, period) in net.periods().iter().enumerate() {
            for (h, k, w) in period.matrix.arcs() {
                let (a, i) = shape.split_index(h);
                let (b, j) = shape.split_index(k);
                t.node_src.push(i as u32);
                t.node_dst.push(j as u32);
                t.layer_src.push(a as u32);
                t.layer_dst.push(b as u32);
                t.period.push(p as u32);
                weights.push(w);
            }
        }
        let mut distinct: Vec<f64> = Vec::new();
        for (s, g) in gamma.iter().enumerate() {
            let pos = match distinct.iter().position(|d| d == g) {
                Some(pos) => pos,
                None => {
                    distinct.push(*g);
                    t.powered.push(if *g == 1.0 {
                        weights.clone()
                    } else {
                        weights.iter().map(|w| w.powf(*g)).collect()
                    });
                    distinct.len() - 1
                }
            };
            t.slot[s] = pos;
        }
        t
    }

    fn len(&self) -> usize {
        self.node_src.len()
    }

    /// `out[target(e)] += w_e^γ · Π_{other dims} v^γ`, one factor table per
    /// dimension (`None` for the target dimension).
    fn contract(&self, section: usize, factors: &[Option<Vec<f64>>; 5], out_len: usize) -> Vec<f64> {
        let w = &self.powered[self.slot[section]];
        let index: [&Vec<u32>; 5] = [&self.node_src, &self.node_dst, &self.layer_src, &self.layer_dst, &self.period];
        let target = index[section];
        let others: Vec<(&Vec<u32>, &Vec<f64>)> =
            (0..5).filter(|&d| d != section).map(|d| (index[d], factors[d].as_ref().expect("factor table"))).collect();
        let chunk_sum = |range: std::ops::Range<usize>| {
            let mut acc = vec![0.0; out_len];
            for e in range {
                let mut term = w[e];
                for (idx, f) in &others {
                    term *= f[idx[e] as usize];
                }
                acc[target[e] as usize] += term;
            }
            acc
        };
        let n = self.len();
        if n <= CHUNK {
            return chunk_sum(0..n);
        }
        let ranges: Vec<_> = (0..n).step_by(CHUNK).map(|s| s..(s + CHUNK).min(n)).collect();
        let partials: Vec<Vec<f64>> = ranges.into_par_iter().map(chunk_sum).collect();
        let mut out = vec![0.0; out_len];
        for p in partials {
            for (o, v) in out.iter_mut().zip(p) {
                *o += v;
            }
        }
        out
    }
}

fn powered(v: &[f64], g: f64) -> Vec<f64> {
    if g == 1.0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x.powf(g)).collect()
    }
}

/// MD-HITS on the whole temporal network.
pub fn md_hits(net: &TemporalMultilayerNetwork, config: &MdHitsConfig) -> Result<MdHitsScores> {
    config.validate()?;
    if net.n_arcs() == 0 {
        return Err(Error::EmptyNetwork);
    }
    let shape = net.shape();
    let tensor = Tensor::new(net, &config.gamma);
    let lens = [shape.n_nodes, shape.n_nodes, shape.n_layers, shape.n_layers, shape.n_periods];
    let mut vectors: [Vec<f64>; 5] = lens.map(|n| vec![1.0 / n as f64; n]);
    let mut trace = Vec::new();
    for sweep in 1..=config.max_iter {
        let mut change = 0.0f64;
        for section in 0..5 {
            let factors: [Option<Vec<f64>>; 5] =
                std::array::from_fn(|d| (d != section).then(|| powered(&vectors[d], config.gamma[section])));
            let mut next = tensor.contract(section, &factors, lens[section]);
            if normalize_l1(&mut next) == 0.0 {
                return Err(Error::EmptyNetwork);
            }
            change = change.max(l1_distance(&next, &vectors[section]));
            vectors[section] = next;
        }
        trace.push(change);
        if change <= config.tol {
            let [node_hub, node_authority, layer_broadcast, layer_receive, time] = vectors;
            return Ok(MdHitsScores {
                node_hub,
                node_authority,
                layer_broadcast,
                layer_receive,
                time,
                gamma: config.gamma,
                iterations: sweep,
                residual: change,
            });
        }
    }
    Err(Error::NotConverged {
        algorithm: "MD-HITS",
        iterations: config.max_iter,
        residual: trace.last().copied().unwrap_or(f64::NAN),
        trace,
    })
}

/// MD-HITS restricted to one period; the time vector is `[1]`.
pub fn md_hits_single_period(matrix: &SupraAdjacency, config: &MdHitsConfig) -> Result<MdHitsScores> {
    md_hits(&TemporalMultilayerNetwork::single(0, matrix.clone()), config)
}
