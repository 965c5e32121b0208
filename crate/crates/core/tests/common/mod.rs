//! Independent dense oracles shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeMap;

use enernet::leontief::FinalDemand;
use enernet::multinet::CsrMatrix;
use enernet::{EnergySource, MrioPeriod, NetworkShape, SourceClass, SupraAdjacency, TemporalMultilayerNetwork};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random period with every column of `A` summing to at most `rho_cap`, so
/// that `ρ(A) ≤ rho_cap`.
pub fn random_period(rng: &mut ChaCha8Rng, n: usize, l: usize, density: f64, rho_cap: f64) -> MrioPeriod {
    let shape = NetworkShape::new(n, l, 1).unwrap();
    let dim = n * l;
    let output: Vec<f64> = (0..dim).map(|_| rng.random_range(1.0..10.0)).collect();
    let mut triplets = Vec::new();
    for k in 0..dim {
        let mut col: Vec<(usize, f64)> = Vec::new();
        for h in 0..dim {
            if rng.random_bool(density) {
                col.push((h, rng.random_range(0.05..1.0)));
            }
        }
        let s: f64 = col.iter().map(|c| c.1).sum();
        if s > 0.0 {
            let share = rho_cap * rng.random_range(0.1..1.0);
            for c in &mut col {
                c.1 *= share * output[k] / s;
            }
        }
        triplets.extend(col.into_iter().map(|(h, u)| (h, k, u)));
    }
    let u = CsrMatrix::from_triplets(dim, dim, triplets).unwrap();
    let mut energy = BTreeMap::new();
    for src in EnergySource::ALL {
        if rng.random_bool(0.7) {
            let c: Vec<f64> =
                (0..dim).map(|_| if rng.random_bool(0.6) { rng.random_range(0.0..5.0) } else { 0.0 }).collect();
            energy.insert(src, c);
        }
    }
    let mut fd = Vec::new();
    for sector in 0..n {
        for src_layer in 0..l {
            for dst_layer in 0..l {
                if rng.random_bool(0.6) {
                    fd.push(FinalDemand { sector, src_layer, dst_layer, value: rng.random_range(0.1..3.0) });
                }
            }
        }
    }
    MrioPeriod::new(2000, shape, u, output, energy, fd).unwrap()
}

/// Raw per-position consumption summed over the sources of `class`.
pub fn class_consumption(period: &MrioPeriod, class: SourceClass) -> Vec<f64> {
    let dim = period.shape().supra_dim();
    let mut c = vec![0.0; dim];
    for (src, v) in period.energy() {
        if class.contains(*src) {
            for (a, b) in c.iter_mut().zip(v) {
                *a += b;
            }
        }
    }
    c
}

/// Embodied flows by explicit inversion of `I − A`, termwise:
/// `q[(α,i) → (β,j)] = Σ_ε c_{(ε,i)} L_{(ε,i),(α,j)} · d_j^{αβ}`.
pub fn dense_embodied_flows(period: &MrioPeriod, class: SourceClass) -> DMatrix<f64> {
    let shape = period.shape();
    let (n, l) = (shape.n_nodes, shape.n_layers);
    let dim = n * l;
    let o = period.total_output();
    let mut a = DMatrix::<f64>::zeros(dim, dim);
    for (h, k, u) in period.intermediate_use().iter() {
        if o[k] > 0.0 {
            a[(h, k)] = u / o[k];
        }
    }
    let inv = (DMatrix::<f64>::identity(dim, dim) - a).try_inverse().expect("I - A invertible");
    let c = class_consumption(period, class);
    let mut q = DMatrix::<f64>::zeros(dim, dim);
    for fd in period.final_demand() {
        let (alpha, beta, j) = (fd.src_layer, fd.dst_layer, fd.sector);
        for i in 0..n {
            let mut e = 0.0;
            for eps in 0..l {
                e += c[eps * n + i] * inv[(eps * n + i, alpha * n + j)];
            }
            q[(alpha * n + i, beta * n + j)] += e * fd.value;
        }
    }
    q
}

pub fn to_dense(w: &SupraAdjacency) -> DMatrix<f64> {
    let d = w.dim();
    let mut m = DMatrix::zeros(d, d);
    for (h, k, v) in w.arcs() {
        m[(h, k)] = v;
    }
    m
}

/// Dominant eigenpair of a symmetric positive semidefinite matrix, the
/// eigenvector scaled to unit 1-norm and made nonnegative. Also returns the
/// ratio of the second to the first eigenvalue.
pub fn dominant_symmetric(m: DMatrix<f64>) -> (Vec<f64>, f64) {
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let top = eig.eigenvectors.column(order[0]);
    let s: f64 = top.iter().sum();
    let v: Vec<f64> = top.iter().map(|x| x / s).collect();
    let ratio = if order.len() > 1 { eig.eigenvalues[order[1]].abs() / eig.eigenvalues[order[0]] } else { 0.0 };
    (v, ratio)
}

/// Dense 5-way tensor `w[t][α][β][i][j]`.
pub struct DenseTensor {
    pub n: usize,
    pub l: usize,
    pub t: usize,
    pub w: Vec<f64>,
}

impl DenseTensor {
    pub fn from_network(net: &TemporalMultilayerNetwork) -> Self {
        let s = net.shape();
        let (n, l, t) = (s.n_nodes, s.n_layers, s.n_periods);
        let mut w = vec![0.0; t * l * l * n * n];
        for (p, period) in net.periods().iter().enumerate() {
            for (h, k, v) in period.matrix.arcs() {
                let (a, i) = (h / n, h % n);
                let (b, j) = (k / n, k % n);
                w[(((p * l + a) * l + b) * n + i) * n + j] = v;
            }
        }
        Self { n, l, t, w }
    }

    fn at(&self, p: usize, a: usize, b: usize, i: usize, j: usize) -> f64 {
        self.w[(((p * self.l + a) * self.l + b) * self.n + i) * self.n + j]
    }
}

/// Naive MD-HITS: the five fixed-point updates over nested dense loops, in
/// the order hub, authority, broadcast, receive, time, each normalized to
/// unit 1-norm right after its update.
pub fn mdhits_oracle(t: &DenseTensor, gamma: [f64; 5], tol: f64, max_iter: usize) -> Option<[Vec<f64>; 5]> {
    let (n, l, tt) = (t.n, t.l, t.t);
    let mut x = vec![1.0 / n as f64; n];
    let mut y = x.clone();
    let mut b = vec![1.0 / l as f64; l];
    let mut z = b.clone();
    let mut u = vec![1.0 / tt as f64; tt];
    for _ in 0..max_iter {
        let mut change = 0.0f64;
        let mut step = |old: &mut Vec<f64>, new: Vec<f64>| {
            let s: f64 = new.iter().sum();
            let new: Vec<f64> = new.iter().map(|v| v / s).collect();
            let d: f64 = new.iter().zip(old.iter()).map(|(a, b)| (a - b).abs()).sum();
            change = change.max(d);
            *old = new;
        };
        let mut nx = vec![0.0; n];
        for (i, out) in nx.iter_mut().enumerate() {
            for j in 0..n {
                for a in 0..l {
                    for bb in 0..l {
                        for p in 0..tt {
                            let w = t.at(p, a, bb, i, j);
                            if w > 0.0 {
                                *out += (w * y[j] * b[a] * z[bb] * u[p]).powf(gamma[0]);
                            }
                        }
                    }
                }
            }
        }
        step(&mut x, nx);
        let mut ny = vec![0.0; n];
        for (j, out) in ny.iter_mut().enumerate() {
            for i in 0..n {
                for a in 0..l {
                    for bb in 0..l {
                        for p in 0..tt {
                            let w = t.at(p, a, bb, i, j);
                            if w > 0.0 {
                                *out += (w * x[i] * b[a] * z[bb] * u[p]).powf(gamma[1]);
                            }
                        }
                    }
                }
            }
        }
        step(&mut y, ny);
        let mut nb = vec![0.0; l];
        for (a, out) in nb.iter_mut().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    for bb in 0..l {
                        for p in 0..tt {
                            let w = t.at(p, a, bb, i, j);
                            if w > 0.0 {
                                *out += (w * x[i] * y[j] * z[bb] * u[p]).powf(gamma[2]);
                            }
                        }
                    }
                }
            }
        }
        step(&mut b, nb);
        let mut nz = vec![0.0; l];
        for (bb, out) in nz.iter_mut().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    for a in 0..l {
                        for p in 0..tt {
                            let w = t.at(p, a, bb, i, j);
                            if w > 0.0 {
                                *out += (w * x[i] * y[j] * b[a] * u[p]).powf(gamma[3]);
                            }
                        }
                    }
                }
            }
        }
        step(&mut z, nz);
        let mut nu = vec![0.0; tt];
        for (p, out) in nu.iter_mut().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    for a in 0..l {
                        for bb in 0..l {
                            let w = t.at(p, a, bb, i, j);
                            if w > 0.0 {
                                *out += (w * x[i] * y[j] * b[a] * z[bb]).powf(gamma[4]);
                            }
                        }
                    }
                }
            }
        }
        step(&mut u, nu);
        if change <= tol {
            return Some([x, y, b, z, u]);
        }
    }
    None
}

/// Random temporal network with positive weights on a random pattern; at
/// least one arc per period.
pub fn random_temporal(rng: &mut ChaCha8Rng, n: usize, l: usize, t: usize, density: f64) -> TemporalMultilayerNetwork {
    let shape = NetworkShape::new(n, l, 1).unwrap();
    let dim = n * l;
    let periods = (0..t)
        .map(|p| {
            let mut arcs = Vec::new();
            for h in 0..dim {
                for k in 0..dim {
                    if rng.random_bool(density) {
                        arcs.push((h, k, rng.random_range(0.01..10.0)));
                    }
                }
            }
            if arcs.is_empty() {
                arcs.push((rng.random_range(0..dim), rng.random_range(0..dim), 1.0));
            }
            (1990 + p as i32, SupraAdjacency::from_triplets(shape, arcs).unwrap())
        })
        .collect();
    TemporalMultilayerNetwork::new(periods).unwrap()
}

/// Minimum `s`–`t` cut by enumerating every vertex bipartition.
pub fn min_cut_exhaustive(n: usize, arcs: &[(usize, usize, f64)], s: usize, t: usize) -> f64 {
    let others: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << others.len()) {
        let mut source_side = vec![false; n];
        source_side[s] = true;
        for (bit, &v) in others.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                source_side[v] = true;
            }
        }
        let cut: f64 = arcs.iter().filter(|&&(u, v, _)| source_side[u] && !source_side[v]).map(|a| a.2).sum();
        best = best.min(cut);
    }
    best
}

/// `Σ_{s≠t}` of exhaustive min cuts.
pub fn all_pairs_min_cut(n: usize, arcs: &[(usize, usize, f64)]) -> f64 {
    let mut total = 0.0;
    for s in 0..n {
        for t in 0..n {
            if s != t {
                total += min_cut_exhaustive(n, arcs, s, t);
            }
        }
    }
    total
}

/// Random digraph with integer capacities in `1..=max_cap`.
pub fn random_digraph(rng: &mut ChaCha8Rng, n: usize, density: f64, max_cap: u32) -> Vec<(usize, usize, f64)> {
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.random_bool(density) {
                arcs.push((u, v, rng.random_range(1..=max_cap) as f64));
            }
        }
    }
    arcs
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
