use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use super::{l1_distance, normalize_l1};
use crate::error::{Error, Result};
use crate::multinet::CsrMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigScores {
    pub centrality: Vec<f64>,
    pub spectral_radius: f64,
    pub iterations: usize,
}

/// Strongly connected components of the nonzero pattern, each sorted, in
/// order of their smallest vertex.
pub fn strongly_connected_components(w: &CsrMatrix) -> Vec<Vec<usize>> {
    let n = w.n_rows();
    let mut g = DiGraph::<(), ()>::with_capacity(n, w.nnz());
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for (h, k, v) in w.iter() {
        if v > 0.0 {
            g.add_edge(nodes[h], nodes[k], ());
        }
    }
    let mut comps: Vec<Vec<usize>> = tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut c: Vec<usize> = c.into_iter().map(|ix| ix.index()).collect();
            c.sort_unstable();
            c
        })
        .collect();
    comps.sort_by_key(|c| c[0]);
    comps
}

fn check_input(w: &CsrMatrix) -> Result<()> {
    if w.n_rows() != w.n_cols() || w.n_rows() == 0 {
        return Err(Error::validation("eigenvector centrality needs a non-empty square matrix"));
    }
    if w.values().iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(Error::validation("eigenvector centrality needs a nonnegative matrix"));
    }
    if w.values().iter().all(|&v| v == 0.0) {
        return Err(Error::ZeroMatrix("eigenvector centrality input matrix"));
    }
    Ok(())
}

/// Perron vector `x = Wx/ρ` of an irreducible nonnegative matrix, with unit
/// 1-norm. Converged when `‖Wx − ρx‖₁ ≤ tol·ρ`.
///
/// The iteration runs on `W + σI` (σ half the mean row sum), which shares
/// the Perron vector but is primitive, so periodic graphs converge too.
pub fn eigenvector_centrality(w: &CsrMatrix, tol: f64, max_iter: usize) -> Result<EigScores> {
    check_input(w)?;
    let comps = strongly_connected_components(w);
    if comps.len() > 1 {
        return Err(Error::Reducible { components: comps.len() });
    }
    power_iteration(w, tol, max_iter)
}

/// Restricts the matrix to its largest strongly connected component (ties
/// go to the component with the smallest vertex) and scores it there;
/// every other vertex gets 0.
pub fn eigenvector_centrality_largest_scc(w: &CsrMatrix, tol: f64, max_iter: usize) -> Result<EigScores> {
    check_input(w)?;
    let comps = strongly_connected_components(w);
    let largest =
        comps.iter().max_by(|a, b| a.len().cmp(&b.len()).then(b[0].cmp(&a[0]))).expect("at least one component");
    let mut pos = vec![usize::MAX; w.n_rows()];
    for (p, &v) in largest.iter().enumerate() {
        pos[v] = p;
    }
    let sub = CsrMatrix::from_triplets(
        largest.len(),
        largest.len(),
        w.iter().filter(|&(h, k, _)| pos[h] != usize::MAX && pos[k] != usize::MAX).map(|(h, k, v)| (pos[h], pos[k], v)),
    )?;
    if sub.is_empty() {
        return Err(Error::ZeroMatrix("largest strongly connected component"));
    }
    let inner = power_iteration(&sub, tol, max_iter)?;
    let mut centrality = vec![0.0; w.n_rows()];
    for (p, &v) in largest.iter().enumerate() {
        centrality[v] = inner.centrality[p];
    }
    Ok(EigScores { centrality, ..inner })
}

fn power_iteration(w: &CsrMatrix, tol: f64, max_iter: usize) -> Result<EigScores> {
    let n = w.n_rows();
    let shift = 0.5 * w.sum() / n as f64;
    let mut x = vec![1.0 / n as f64; n];
    let mut trace = Vec::new();
    for iter in 1..=max_iter {
        let wx = w.mul_vec(&x);
        let rho: f64 = wx.iter().sum();
        let residual: f64 = wx.iter().zip(&x).map(|(a, b)| (a - rho * b).abs()).sum();
        trace.push(residual);
        if residual <= tol * rho {
            return Ok(EigScores { centrality: x, spectral_radius: rho, iterations: iter });
        }
        let mut next: Vec<f64> = wx.iter().zip(&x).map(|(a, b)| a + shift * b).collect();
        normalize_l1(&mut next);
        if l1_distance(&next, &x) == 0.0 {
            // fixed point in floating point but residual above tol
            break;
        }
        x = next;
    }
    Err(Error::NotConverged {
        algorithm: "eigenvector centrality",
        iterations: trace.len(),
        residual: trace.last().copied().unwrap_or(f64::NAN),
        trace,
    })
}
