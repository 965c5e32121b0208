//! Node, layer and time centralities.
//!
//! * [`eigenvector_centrality`]: Perron vector of an irreducible matrix.
//! * [`hits`]: hub and authority vectors of a single matrix.
//! * [`md_hits`]: the five-vector fixed point over a temporal multilayer
//!   network (node hub and authority, layer broadcast and receive, time).
//!
//! Every returned score vector is nonnegative with unit 1-norm.

mod eigen;
mod hits;
mod mdhits;
mod ranking;

pub use eigen::{eigenvector_centrality, eigenvector_centrality_largest_scc, strongly_connected_components, EigScores};
pub use hits::{hits, HitsScores};
pub use mdhits::{md_hits, md_hits_single_period, MdHitsConfig, MdHitsScores, ScoreSection};
pub use ranking::{rank, RankRow, RankingTable};

/// Default stopping rule for HITS and eigenvector centrality.
pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Divides by the 1-norm in place; returns the norm.
pub(crate) fn normalize_l1(v: &mut [f64]) -> f64 {
    let s: f64 = v.iter().sum();
    if s > 0.0 {
        v.iter_mut().for_each(|x| *x /= s);
    }
    s
}

pub(crate) fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}
