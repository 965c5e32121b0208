use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankRow {
    pub rank: usize,
    pub label: String,
    pub score: f64,
    /// Another row carries exactly the same score.
    pub tied: bool,
}

/// Entities sorted by score descending, ties broken by label ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingTable {
    pub rows: Vec<RankRow>,
}

impl RankingTable {
    pub fn top(&self, k: usize) -> &[RankRow] {
        &self.rows[..k.min(self.rows.len())]
    }

    pub fn labels(&self) -> Vec<&str> {
        self.rows.iter().map(|r| r.label.as_str()).collect()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

pub fn rank<S: AsRef<str>>(scores: &[f64], labels: &[S]) -> Result<RankingTable> {
    if scores.len() != labels.len() {
        return Err(Error::validation(format!("{} scores but {} labels", scores.len(), labels.len())));
    }
    if let Some(s) = scores.iter().find(|s| s.is_nan()) {
        return Err(Error::validation(format!("cannot rank score {s}")));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .unwrap_or(Ordering::Equal)
            .then_with(|| labels[a].as_ref().cmp(labels[b].as_ref()))
    });
    let rows = order
        .iter()
        .enumerate()
        .map(|(pos, &ix)| {
            let tied = (pos > 0 && scores[order[pos - 1]] == scores[ix])
                || (pos + 1 < order.len() && scores[order[pos + 1]] == scores[ix]);
            RankRow { rank: pos + 1, label: labels[ix].as_ref().to_string(), score: scores[ix], tied }
        })
        .collect();
    Ok(RankingTable { rows })
}
