use serde::{Deserialize, Serialize};

use super::{l1_distance, normalize_l1};
use crate::error::{Error, Result};
use crate::multinet::CsrMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HitsScores {
    pub hub: Vec<f64>,
    pub authority: Vec<f64>,
    pub iterations: usize,
}

/// Alternating iteration `y ← Wᵀx`, `x ← W y`, each half-step normalized to
/// unit 1-norm, starting from a uniform hub vector. Stops when both vectors
/// move by at most `tol` in 1-norm.
pub fn hits(w: &CsrMatrix, tol: f64, max_iter: usize) -> Result<HitsScores> {
    if w.n_rows() != w.n_cols() {
        return Err(Error::validation("HITS needs a square matrix"));
    }
    if w.values().iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(Error::validation("HITS needs a nonnegative matrix"));
    }
    if w.values().iter().all(|&v| v == 0.0) {
        return Err(Error::ZeroMatrix("HITS input matrix"));
    }
    let n = w.n_rows();
    let wt = w.transpose();
    let mut x = vec![1.0 / n as f64; n];
    let mut y = vec![0.0; n];
    let mut trace = Vec::new();
    for iter in 1..=max_iter {
        let mut y_new = wt.mul_vec(&x);
        normalize_l1(&mut y_new);
        let mut x_new = w.mul_vec(&y_new);
        normalize_l1(&mut x_new);
        let delta = l1_distance(&x_new, &x).max(l1_distance(&y_new, &y));
        x = x_new;
        y = y_new;
        trace.push(delta);
        if delta <= tol {
            return Ok(HitsScores { hub: x, authority: y, iterations: iter });
        }
    }
    Err(Error::NotConverged {
        algorithm: "HITS",
        iterations: max_iter,
        residual: trace.last().copied().unwrap_or(f64::NAN),
        trace,
    })
}
