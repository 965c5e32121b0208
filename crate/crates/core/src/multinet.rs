//! Node-aligned temporal multilayer networks.
//!
//! A period of the network is a supra-adjacency matrix of order `N·L`
//! (`N` sectors replicated on `L` economies). Block `(α, β)` holds the arcs
//! from sectors of economy `α` to sectors of economy `β`; the diagonal blocks
//! are the intra-layer networks.
//!
//! Storage is 0-based. [`flat_index`] and [`unflat_index`] expose the 1-based
//! convention `h = N·(α − 1) + i` used when talking about the model; every
//! other API in the crate takes 0-based indices.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of sectors, economies and time instants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NetworkShape {
    pub n_nodes: usize,
    pub n_layers: usize,
    pub n_periods: usize,
}

impl NetworkShape {
    pub fn new(n_nodes: usize, n_layers: usize, n_periods: usize) -> Result<Self> {
        if n_nodes == 0 || n_layers == 0 || n_periods == 0 {
            return Err(Error::validation(format!(
                "network shape must be positive, got N={n_nodes} L={n_layers} T={n_periods}"
            )));
        }
        Ok(Self { n_nodes, n_layers, n_periods })
    }

    /// Single-period shape with the same node and layer sets.
    pub fn single_period(self) -> Self {
        Self { n_periods: 1, ..self }
    }

    pub fn with_periods(self, n_periods: usize) -> Self {
        Self { n_periods, ..self }
    }

    /// Order of the supra-adjacency matrix, `N·L`.
    pub fn supra_dim(&self) -> usize {
        self.n_nodes * self.n_layers
    }

    /// 0-based supra index of `(layer, node)`.
    #[inline]
    pub fn supra_index(&self, layer: usize, node: usize) -> usize {
        debug_assert!(layer < self.n_layers && node < self.n_nodes);
        layer * self.n_nodes + node
    }

    /// 0-based `(layer, node)` of a supra index.
    #[inline]
    pub fn split_index(&self, h: usize) -> (usize, usize) {
        (h / self.n_nodes, h % self.n_nodes)
    }

    fn same_cross_section(&self, other: &NetworkShape) -> bool {
        self.n_nodes == other.n_nodes && self.n_layers == other.n_layers
    }
}

/// 1-based supra index of node `i` on layer `alpha`: `h = N·(alpha − 1) + i`.
pub fn flat_index(alpha: usize, i: usize, n_nodes: usize) -> Result<usize> {
    if n_nodes == 0 {
        return Err(Error::validation("number of nodes must be positive"));
    }
    if i == 0 || i > n_nodes {
        return Err(Error::Index { what: "node", value: i, bound: n_nodes });
    }
    if alpha == 0 {
        return Err(Error::Index { what: "layer", value: alpha, bound: usize::MAX });
    }
    Ok(n_nodes * (alpha - 1) + i)
}

/// Bounds-checked variant of [`flat_index`] that also validates `alpha ≤ L`.
pub fn flat_index_in(shape: &NetworkShape, alpha: usize, i: usize) -> Result<usize> {
    if alpha == 0 || alpha > shape.n_layers {
        return Err(Error::Index { what: "layer", value: alpha, bound: shape.n_layers });
    }
    flat_index(alpha, i, shape.n_nodes)
}

/// Inverse of [`flat_index`]: `alpha = ⌈h/N⌉`, `i = h − N·(alpha − 1)`.
pub fn unflat_index(h: usize, n_nodes: usize) -> Result<(usize, usize)> {
    if n_nodes == 0 {
        return Err(Error::validation("number of nodes must be positive"));
    }
    if h == 0 {
        return Err(Error::Index { what: "supra", value: h, bound: usize::MAX });
    }
    let alpha = h.div_ceil(n_nodes);
    Ok((alpha, h - n_nodes * (alpha - 1)))
}

/// Bounds-checked variant of [`unflat_index`] (`1 ≤ h ≤ N·L`).
pub fn unflat_index_in(shape: &NetworkShape, h: usize) -> Result<(usize, usize)> {
    if h == 0 || h > shape.supra_dim() {
        return Err(Error::Index { what: "supra", value: h, bound: shape.supra_dim() });
    }
    unflat_index(h, shape.n_nodes)
}

/// Compressed sparse row matrix with sorted, duplicate-free column indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsrMatrix {
    n_rows: usize,
    n_cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
    values: Vec<f64>,
}

impl CsrMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self { n_rows, n_cols, row_ptr: vec![0; n_rows + 1], col_idx: Vec::new(), values: Vec::new() }
    }

    /// Builds from `(row, col, value)` triplets. Duplicates are summed and
    /// entries that end up exactly zero are dropped.
    pub fn from_triplets<I>(n_rows: usize, n_cols: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut entries: Vec<(usize, usize, f64)> = Vec::new();
        for (r, c, v) in triplets {
            if r >= n_rows || c >= n_cols {
                return Err(Error::validation(format!("entry ({r}, {c}) outside a {n_rows}x{n_cols} matrix")));
            }
            if !v.is_finite() {
                return Err(Error::validation(format!("entry ({r}, {c}) is not finite: {v}")));
            }
            entries.push((r, c, v));
        }
        entries.sort_by_key(|a| (a.0, a.1));

        let mut row_ptr = vec![0usize; n_rows + 1];
        let mut col_idx = Vec::with_capacity(entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        let mut rows_of: Vec<usize> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            if last == Some((r, c)) {
                *values.last_mut().expect("previous entry") += v;
            } else {
                col_idx.push(c as u32);
                values.push(v);
                rows_of.push(r);
                last = Some((r, c));
            }
        }
        let mut keep_cols = Vec::with_capacity(col_idx.len());
        let mut keep_vals = Vec::with_capacity(values.len());
        for ((r, c), v) in rows_of.into_iter().zip(col_idx).zip(values) {
            if v != 0.0 {
                row_ptr[r + 1] += 1;
                keep_cols.push(c);
                keep_vals.push(v);
            }
        }
        for r in 0..n_rows {
            row_ptr[r + 1] += row_ptr[r];
        }
        Ok(Self { n_rows, n_cols, row_ptr, col_idx: keep_cols, values: keep_vals })
    }

    /// Builds from a row-major dense matrix, skipping zeros.
    pub fn from_dense(n_rows: usize, n_cols: usize, data: &[f64]) -> Result<Self> {
        if data.len() != n_rows * n_cols {
            return Err(Error::validation(format!(
                "dense buffer has {} values, expected {}",
                data.len(),
                n_rows * n_cols
            )));
        }
        Self::from_triplets(
            n_rows,
            n_cols,
            data.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(p, &v)| (p / n_cols, p % n_cols, v)),
        )
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Column indices and values of row `r`.
    #[inline]
    pub fn row(&self, r: usize) -> (&[u32], &[f64]) {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        (&self.col_idx[span.clone()], &self.values[span])
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        if r >= self.n_rows || c >= self.n_cols {
            return 0.0;
        }
        let (cols, vals) = self.row(r);
        match cols.binary_search(&(c as u32)) {
            Ok(p) => vals[p],
            Err(_) => 0.0,
        }
    }

    /// Row-major iteration over stored entries.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n_rows).flat_map(move |r| {
            let (cols, vals) = self.row(r);
            cols.iter().zip(vals).map(move |(&c, &v)| (r, c as usize, v))
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn transpose(&self) -> Self {
        let mut counts = vec![0usize; self.n_cols + 1];
        for &c in &self.col_idx {
            counts[c as usize + 1] += 1;
        }
        for c in 0..self.n_cols {
            counts[c + 1] += counts[c];
        }
        let row_ptr = counts.clone();
        let mut next = counts;
        let mut col_idx = vec![0u32; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        for (r, c, v) in self.iter() {
            let slot = next[c];
            col_idx[slot] = r as u32;
            values[slot] = v;
            next[c] += 1;
        }
        Self { n_rows: self.n_cols, n_cols: self.n_rows, row_ptr, col_idx, values }
    }

    /// `y = M x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.n_cols);
        (0..self.n_rows)
            .map(|r| {
                let (cols, vals) = self.row(r);
                cols.iter().zip(vals).map(|(&c, &v)| v * x[c as usize]).sum()
            })
            .collect()
    }

    /// Sum of each column.
    pub fn column_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.n_cols];
        for (_, c, v) in self.iter() {
            sums[c] += v;
        }
        sums
    }

    /// Keeps the entries for which `keep(row, col, value)` holds.
    pub fn filter<F>(&self, mut keep: F) -> Self
    where
        F: FnMut(usize, usize, f64) -> bool,
    {
        let mut row_ptr = vec![0usize; self.n_rows + 1];
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for r in 0..self.n_rows {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                if keep(r, c as usize, v) {
                    col_idx.push(c);
                    values.push(v);
                }
            }
            row_ptr[r + 1] = col_idx.len();
        }
        Self { n_rows: self.n_rows, n_cols: self.n_cols, row_ptr, col_idx, values }
    }

    /// Applies `f` to every stored value, keeping the sparsity pattern.
    pub fn map_values<F: FnMut(usize, usize, f64) -> f64>(&self, mut f: F) -> Self {
        let mut out = self.clone();
        for r in 0..self.n_rows {
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                out.values[p] = f(r, self.col_idx[p] as usize, self.values[p]);
            }
        }
        out
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.n_rows, self.n_cols);
        for (r, c, v) in self.iter() {
            m.data[r * self.n_cols + c] = v;
        }
        m
    }
}

/// Small row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix {
    pub n_rows: usize,
    pub n_cols: usize,
    pub data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self { n_rows, n_cols, data: vec![0.0; n_rows * n_cols] }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.n_cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.n_cols + c] = v;
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }
}

/// One period of a multilayer network: an `N·L × N·L` matrix of strictly
/// positive weights. Absent arcs weigh 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupraAdjacency {
    shape: NetworkShape,
    matrix: CsrMatrix,
}

impl SupraAdjacency {
    pub fn empty(shape: NetworkShape) -> Self {
        let dim = shape.supra_dim();
        Self { shape: shape.single_period(), matrix: CsrMatrix::zeros(dim, dim) }
    }

    /// Builds from 0-based `(h, k, w)` triplets. Negative or non-finite
    /// weights are rejected, zeros are dropped, duplicates are summed.
    pub fn from_triplets<I>(shape: NetworkShape, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let dim = shape.supra_dim();
        let mut checked = Vec::new();
        for (h, k, w) in triplets {
            if w < 0.0 || w.is_nan() {
                return Err(Error::validation(format!("arc ({h}, {k}) has negative or NaN weight {w}")));
            }
            checked.push((h, k, w));
        }
        let matrix = CsrMatrix::from_triplets(dim, dim, checked)?;
        Ok(Self { shape: shape.single_period(), matrix })
    }

    pub fn from_csr(shape: NetworkShape, matrix: CsrMatrix) -> Result<Self> {
        let dim = shape.supra_dim();
        if matrix.n_rows() != dim || matrix.n_cols() != dim {
            return Err(Error::validation(format!(
                "matrix is {}x{}, expected {dim}x{dim}",
                matrix.n_rows(),
                matrix.n_cols()
            )));
        }
        if let Some((h, k, w)) = matrix.iter().find(|&(_, _, w)| !(w > 0.0 && w.is_finite())) {
            return Err(Error::validation(format!("arc ({h}, {k}) has non-positive weight {w}")));
        }
        Ok(Self { shape: shape.single_period(), matrix })
    }

    pub fn shape(&self) -> NetworkShape {
        self.shape
    }

    pub fn dim(&self) -> usize {
        self.shape.supra_dim()
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn n_arcs(&self) -> usize {
        self.matrix.nnz()
    }

    pub fn weight(&self, h: usize, k: usize) -> f64 {
        self.matrix.get(h, k)
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.matrix.iter()
    }

    pub fn total_weight(&self) -> f64 {
        self.matrix.sum()
    }

    /// Drops arcs lighter than `threshold`.
    pub fn pruned(&self, threshold: f64) -> Self {
        Self { shape: self.shape, matrix: self.matrix.filter(|_, _, w| w >= threshold) }
    }

    /// Drops the diagonal `h = k` (the same sector in the same economy).
    pub fn without_self_loops(&self) -> Self {
        Self { shape: self.shape, matrix: self.matrix.filter(|h, k, _| h != k) }
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::validation(format!("scale factor must be positive, got {factor}")));
        }
        Ok(Self { shape: self.shape, matrix: self.matrix.map_values(|_, _, w| w * factor) })
    }

    /// Block `(alpha, beta)` as an `N × N` matrix (0-based layers).
    pub fn block_view(&self, alpha: usize, beta: usize) -> Result<CsrMatrix> {
        let n_layers = self.shape.n_layers;
        for layer in [alpha, beta] {
            if layer >= n_layers {
                return Err(Error::Index { what: "layer", value: layer + 1, bound: n_layers });
            }
        }
        let n = self.shape.n_nodes;
        let lo = (beta * n) as u32;
        let hi = ((beta + 1) * n) as u32;
        let mut triplets = Vec::new();
        for i in 0..n {
            let (cols, vals) = self.matrix.row(alpha * n + i);
            let start = cols.partition_point(|&c| c < lo);
            let end = cols.partition_point(|&c| c < hi);
            for p in start..end {
                triplets.push((i, (cols[p] - lo) as usize, vals[p]));
            }
        }
        CsrMatrix::from_triplets(n, n, triplets)
    }

    /// Country-level `L × L` matrix: entry `(α, β)` sums every sector arc
    /// from economy `α` to economy `β`.
    pub fn aggregate_to_layers(&self) -> DenseMatrix {
        let n_layers = self.shape.n_layers;
        let mut out = DenseMatrix::zeros(n_layers, n_layers);
        for (h, k, w) in self.matrix.iter() {
            let alpha = h / self.shape.n_nodes;
            let beta = k / self.shape.n_nodes;
            out.data[alpha * n_layers + beta] += w;
        }
        out
    }
}

/// Free-function form of [`SupraAdjacency::block_view`] using the 1-based
/// layer convention of [`flat_index`].
pub fn block_view(w: &SupraAdjacency, alpha: usize, beta: usize) -> Result<CsrMatrix> {
    if alpha == 0 || beta == 0 {
        return Err(Error::Index { what: "layer", value: 0, bound: w.shape().n_layers });
    }
    w.block_view(alpha - 1, beta - 1)
}

pub fn aggregate_to_layers(w: &SupraAdjacency) -> DenseMatrix {
    w.aggregate_to_layers()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Period {
    pub year: i32,
    pub matrix: SupraAdjacency,
}

/// Time-ordered sequence of node-aligned supra-adjacency matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemporalMultilayerNetwork {
    shape: NetworkShape,
    periods: Vec<Period>,
}

impl TemporalMultilayerNetwork {
    pub fn new(periods: Vec<(i32, SupraAdjacency)>) -> Result<Self> {
        let first = periods.first().ok_or_else(|| Error::validation("a temporal network needs at least one period"))?;
        let base = first.1.shape();
        for pair in periods.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(Error::validation(format!(
                    "period labels must be strictly increasing ({} then {})",
                    pair[0].0, pair[1].0
                )));
            }
        }
        for (year, m) in &periods {
            if !m.shape().same_cross_section(&base) {
                return Err(Error::validation(format!(
                    "period {year} has shape N={} L={}, expected N={} L={}",
                    m.shape().n_nodes,
                    m.shape().n_layers,
                    base.n_nodes,
                    base.n_layers
                )));
            }
        }
        let shape = base.with_periods(periods.len());
        Ok(Self { shape, periods: periods.into_iter().map(|(year, matrix)| Period { year, matrix }).collect() })
    }

    pub fn single(year: i32, matrix: SupraAdjacency) -> Self {
        Self { shape: matrix.shape(), periods: vec![Period { year, matrix }] }
    }

    pub fn shape(&self) -> NetworkShape {
        self.shape
    }

    pub fn periods(&self) -> &[Period] {
        &self.periods
    }

    pub fn years(&self) -> Vec<i32> {
        self.periods.iter().map(|p| p.year).collect()
    }

    pub fn period(&self, year: i32) -> Option<&SupraAdjacency> {
        self.periods.iter().find(|p| p.year == year).map(|p| &p.matrix)
    }

    pub fn n_arcs(&self) -> usize {
        self.periods.iter().map(|p| p.matrix.n_arcs()).sum()
    }

    /// Applies `f` to every period matrix.
    pub fn map_periods<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&SupraAdjacency) -> Result<SupraAdjacency>,
    {
        let periods = self.periods.iter().map(|p| Ok((p.year, f(&p.matrix)?))).collect::<Result<Vec<_>>>()?;
        Self::new(periods)
    }

    /// Periods whose label lies in `from..=to`.
    pub fn restrict_years(&self, from: i32, to: i32) -> Result<Self> {
        let periods: Vec<_> =
            self.periods.iter().filter(|p| (from..=to).contains(&p.year)).map(|p| (p.year, p.matrix.clone())).collect();
        if periods.is_empty() {
            return Err(Error::validation(format!("no periods in {from}:{to}")));
        }
        Self::new(periods)
    }
}

/// Sector and country codes labelling nodes and layers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityCodes {
    pub sector_codes: Vec<String>,
    pub country_codes: Vec<String>,
}

impl EntityCodes {
    pub fn new(sector_codes: Vec<String>, country_codes: Vec<String>) -> Result<Self> {
        for (kind, list) in [("sector", &sector_codes), ("country", &country_codes)] {
            if list.is_empty() {
                return Err(Error::validation(format!("{kind} code list is empty")));
            }
            let mut seen = HashSet::new();
            for code in list {
                if code.is_empty() {
                    return Err(Error::validation(format!("empty {kind} code")));
                }
                if !seen.insert(code.as_str()) {
                    return Err(Error::validation(format!("duplicate {kind} code {code:?}")));
                }
            }
        }
        Ok(Self { sector_codes, country_codes })
    }

    pub fn check_shape(&self, shape: &NetworkShape) -> Result<()> {
        if self.sector_codes.len() != shape.n_nodes || self.country_codes.len() != shape.n_layers {
            return Err(Error::validation(format!(
                "code lists have {} sectors and {} countries, network has N={} L={}",
                self.sector_codes.len(),
                self.country_codes.len(),
                shape.n_nodes,
                shape.n_layers
            )));
        }
        Ok(())
    }

    /// `COUNTRY:SECTOR` label of a 0-based supra index.
    pub fn node_label(&self, h: usize) -> String {
        let n = self.sector_codes.len();
        format!("{}:{}", self.country_codes[h / n], self.sector_codes[h % n])
    }

    /// Labels for every supra index, in index order.
    pub fn supra_labels(&self) -> Vec<String> {
        (0..self.sector_codes.len() * self.country_codes.len()).map(|h| self.node_label(h)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn shape(n: usize, l: usize) -> NetworkShape {
        NetworkShape::new(n, l, 1).unwrap()
    }

    #[test]
    fn flat_index_examples() {
        assert_eq!(flat_index(1, 1, 26).unwrap(), 1);
        assert_eq!(flat_index(2, 3, 26).unwrap(), 29);
        assert_eq!(unflat_index(29, 26).unwrap(), (2, 3));
        assert_eq!(unflat_index(26, 26).unwrap(), (1, 26));
        assert_eq!(unflat_index(27, 26).unwrap(), (2, 1));
    }

    #[test]
    fn flat_index_round_trip_grid() {
        let s = shape(3, 4);
        for alpha in 1..=4 {
            for i in 1..=3 {
                let h = flat_index_in(&s, alpha, i).unwrap();
                assert_eq!(unflat_index_in(&s, h).unwrap(), (alpha, i));
            }
        }
    }

    #[test]
    fn index_errors() {
        assert!(matches!(flat_index(1, 0, 26), Err(Error::Index { .. })));
        assert!(matches!(flat_index(1, 27, 26), Err(Error::Index { .. })));
        assert!(matches!(flat_index(0, 1, 26), Err(Error::Index { .. })));
        let s = shape(26, 2);
        assert!(matches!(flat_index_in(&s, 3, 1), Err(Error::Index { .. })));
        assert!(matches!(unflat_index_in(&s, 0), Err(Error::Index { .. })));
        assert!(matches!(unflat_index_in(&s, 53), Err(Error::Index { .. })));
        assert!(NetworkShape::new(0, 1, 1).is_err());
    }

    #[test]
    fn block_view_single_entry() {
        let s = shape(26, 2);
        // w_(29,1) in 1-based terms
        let w = SupraAdjacency::from_triplets(s, [(28, 0, 1.5)]).unwrap();
        let b21 = block_view(&w, 2, 1).unwrap();
        assert_eq!(b21.nnz(), 1);
        assert_eq!(b21.get(2, 0), 1.5);
        for (a, b) in [(1, 1), (1, 2), (2, 2)] {
            assert!(block_view(&w, a, b).unwrap().is_empty());
        }
        assert!(block_view(&w, 3, 1).is_err());
        assert!(block_view(&w, 0, 1).is_err());
    }

    #[test]
    fn empty_matrix_blocks_and_aggregate() {
        let w = SupraAdjacency::empty(shape(3, 2));
        for a in 0..2 {
            for b in 0..2 {
                assert!(w.block_view(a, b).unwrap().is_empty());
            }
        }
        assert!(w.aggregate_to_layers().data.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn aggregate_single_entry() {
        let s = shape(4, 2);
        let h = flat_index_in(&s, 2, 3).unwrap() - 1;
        let k = flat_index_in(&s, 1, 1).unwrap() - 1;
        let w = SupraAdjacency::from_triplets(s, [(h, k, 5.0)]).unwrap();
        let agg = aggregate_to_layers(&w);
        assert_eq!(agg.get(1, 0), 5.0);
        assert_eq!(agg.sum(), 5.0);
    }

    #[test]
    fn rejects_bad_weights_and_drops_zeros() {
        let s = shape(2, 1);
        assert!(SupraAdjacency::from_triplets(s, [(0, 1, -1.0)]).is_err());
        assert!(SupraAdjacency::from_triplets(s, [(0, 1, f64::NAN)]).is_err());
        assert!(SupraAdjacency::from_triplets(s, [(0, 2, 1.0)]).is_err());
        let w = SupraAdjacency::from_triplets(s, [(0, 1, 0.0), (1, 0, 2.0)]).unwrap();
        assert_eq!(w.n_arcs(), 1);
        assert_eq!(w.weight(0, 1), 0.0);
        assert_eq!(w.weight(1, 0), 2.0);
    }

    #[test]
    fn self_loops_kept_unless_dropped() {
        let w = SupraAdjacency::from_triplets(shape(2, 1), [(0, 0, 1.0), (0, 1, 2.0)]).unwrap();
        assert_eq!(w.n_arcs(), 2);
        assert_eq!(w.without_self_loops().n_arcs(), 1);
        assert_eq!(w.pruned(1.5).n_arcs(), 1);
    }

    #[test]
    fn temporal_network_validation() {
        let a = SupraAdjacency::empty(shape(2, 2));
        let b = SupraAdjacency::empty(shape(3, 2));
        assert!(TemporalMultilayerNetwork::new(vec![(1990, a.clone()), (1991, b)]).is_err());
        assert!(TemporalMultilayerNetwork::new(vec![(1991, a.clone()), (1990, a.clone())]).is_err());
        assert!(TemporalMultilayerNetwork::new(vec![]).is_err());
        let net = TemporalMultilayerNetwork::new(vec![(1990, a.clone()), (1991, a)]).unwrap();
        assert_eq!(net.shape().n_periods, 2);
    }

    #[test]
    fn entity_codes_unique() {
        assert!(EntityCodes::new(vec!["A".into(), "A".into()], vec!["X".into()]).is_err());
        let c = EntityCodes::new(vec!["A".into(), "B".into()], vec!["X".into()]).unwrap();
        assert_eq!(c.node_label(1), "X:B");
        assert!(c.check_shape(&shape(2, 1)).is_ok());
        assert!(c.check_shape(&shape(2, 2)).is_err());
    }

    #[test]
    fn csr_transpose_and_dense() {
        let m = CsrMatrix::from_triplets(2, 3, [(0, 2, 1.0), (1, 0, 2.0), (0, 2, 1.0)]).unwrap();
        assert_eq!(m.get(0, 2), 2.0);
        let t = m.transpose();
        assert_eq!(t.n_rows(), 3);
        assert_eq!(t.get(2, 0), 2.0);
        assert_eq!(t.get(0, 1), 2.0);
        assert_eq!(m.mul_vec(&[1.0, 1.0, 1.0]), vec![2.0, 2.0]);
        assert_eq!(m.column_sums(), vec![2.0, 0.0, 2.0]);
    }

    proptest! {
        #[test]
        fn index_bijection(n in 1usize..40, l in 1usize..40, seed in any::<u64>()) {
            let s = NetworkShape::new(n, l, 1).unwrap();
            let alpha = 1 + (seed as usize) % l;
            let i = 1 + (seed as usize / 7) % n;
            let h = flat_index_in(&s, alpha, i).unwrap();
            prop_assert!(h >= 1 && h <= n * l);
            prop_assert_eq!(unflat_index_in(&s, h).unwrap(), (alpha, i));
        }

        #[test]
        fn aggregation_and_blocks_partition_mass(
            entries in proptest::collection::vec((0usize..12, 0usize..12, 1u32..1000), 0..60)
        ) {
            // 4 nodes, 3 layers; integer weights make the sums exact
            let s = NetworkShape::new(4, 3, 1).unwrap();
            let w = SupraAdjacency::from_triplets(s, entries.iter().map(|&(h, k, v)| (h, k, v as f64))).unwrap();
            let direct: f64 = entries.iter().map(|e| e.2 as f64).sum();
            prop_assert_eq!(w.aggregate_to_layers().sum(), direct);
            let mut block_nnz = 0;
            for a in 0..3 {
                for b in 0..3 {
                    block_nnz += w.block_view(a, b).unwrap().nnz();
                }
            }
            prop_assert_eq!(block_nnz, w.n_arcs());
        }
    }
}
