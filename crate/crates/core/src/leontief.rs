//! Input coefficients, Leontief-inverse applications and embodied energy
//! flows.
//!
//! For a period with intermediate use `u`, total output `o`, energy
//! consumption `c` and final demand `d`, the arc from sector `i` of economy
//! `α` to sector `j` of economy `β` weighs
//!
//! ```text
//! q_ij^{αβ} = ( Σ_ε c_i^ε · l_{(ε,i),(α,j)} ) · d_j^{αβ}
//! ```
//!
//! where `l` are entries of `(I − A)⁻¹` and `a_hk = u_hk / o_k`. The inverse
//! is never formed: for a fixed source sector `i` the bracket, seen as a
//! function of the receiving position `(α, j)`, is the solution of
//! `(I − Aᵀ) y = c⁽ⁱ⁾` with `c⁽ⁱ⁾` the consumption vector restricted to the
//! rows of sector `i`. That is `N` sparse solves per period and source class.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multinet::{CsrMatrix, NetworkShape, SupraAdjacency, TemporalMultilayerNetwork};

/// Energy carriers of the consumption accounts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergySource {
    Coal,
    NaturalGas,
    Petroleum,
    Nuclear,
    BiomassWaste,
    Hydro,
    OtherRenewable,
}

impl EnergySource {
    pub const ALL: [EnergySource; 7] = [
        EnergySource::Coal,
        EnergySource::NaturalGas,
        EnergySource::Petroleum,
        EnergySource::Nuclear,
        EnergySource::BiomassWaste,
        EnergySource::Hydro,
        EnergySource::OtherRenewable,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EnergySource::Coal => "coal",
            EnergySource::NaturalGas => "natural_gas",
            EnergySource::Petroleum => "petroleum",
            EnergySource::Nuclear => "nuclear",
            EnergySource::BiomassWaste => "biomass_waste",
            EnergySource::Hydro => "hydro",
            EnergySource::OtherRenewable => "other_renewable",
        }
    }

    pub fn is_renewable(self) -> bool {
        matches!(self, EnergySource::BiomassWaste | EnergySource::Hydro | EnergySource::OtherRenewable)
    }

    pub fn class(self) -> SourceClass {
        if self.is_renewable() {
            SourceClass::Renewable
        } else {
            SourceClass::NonRenewable
        }
    }
}

impl fmt::Display for EnergySource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EnergySource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EnergySource::ALL
            .into_iter()
            .find(|src| src.as_str() == s)
            .ok_or_else(|| Error::validation(format!("unknown energy source {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceClass {
    Renewable,
    NonRenewable,
    All,
}

impl SourceClass {
    pub const EACH: [SourceClass; 3] = [SourceClass::All, SourceClass::Renewable, SourceClass::NonRenewable];

    pub fn contains(self, source: EnergySource) -> bool {
        match self {
            SourceClass::All => true,
            SourceClass::Renewable => source.is_renewable(),
            SourceClass::NonRenewable => !source.is_renewable(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SourceClass::Renewable => "renewable",
            SourceClass::NonRenewable => "nonrenewable",
            SourceClass::All => "all",
        }
    }
}

impl fmt::Display for SourceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SourceClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(SourceClass::All),
            "renewable" => Ok(SourceClass::Renewable),
            "nonrenewable" | "non_renewable" => Ok(SourceClass::NonRenewable),
            other => Err(Error::validation(format!("unknown source class {other:?}"))),
        }
    }
}

/// Final demand of sector `sector` traded from economy `src_layer` to
/// economy `dst_layer` (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FinalDemand {
    pub sector: usize,
    pub src_layer: usize,
    pub dst_layer: usize,
    pub value: f64,
}

/// Raw input-output accounts of one period.
#[derive(Debug, Clone, PartialEq)]
pub struct MrioPeriod {
    year: i32,
    shape: NetworkShape,
    intermediate_use: CsrMatrix,
    total_output: Vec<f64>,
    energy: BTreeMap<EnergySource, Vec<f64>>,
    final_demand: Vec<FinalDemand>,
}

fn check_value(what: &str, v: f64) -> Result<()> {
    if !v.is_finite() || v < 0.0 {
        return Err(Error::validation(format!("{what} must be finite and nonnegative, got {v}")));
    }
    Ok(())
}

/// Relative slack allowed when checking column use against output.
pub const COLUMN_USE_SLACK: f64 = 1e-12;

impl MrioPeriod {
    /// Validates and assembles a period. Final demand entries are sorted by
    /// `(src_layer, sector, dst_layer)`; zero-valued entries are dropped.
    pub fn new(
        year: i32,
        shape: NetworkShape,
        intermediate_use: CsrMatrix,
        total_output: Vec<f64>,
        energy: BTreeMap<EnergySource, Vec<f64>>,
        mut final_demand: Vec<FinalDemand>,
    ) -> Result<Self> {
        let shape = shape.single_period();
        let dim = shape.supra_dim();
        let at = |msg: String| Error::validation(format!("period {year}: {msg}"));
        if intermediate_use.n_rows() != dim || intermediate_use.n_cols() != dim {
            return Err(at(format!(
                "intermediate use is {}x{}, expected {dim}x{dim}",
                intermediate_use.n_rows(),
                intermediate_use.n_cols()
            )));
        }
        if total_output.len() != dim {
            return Err(at(format!("total output has length {}, expected {dim}", total_output.len())));
        }
        for (h, k, u) in intermediate_use.iter() {
            check_value(&format!("period {year}: intermediate use ({h}, {k})"), u)?;
        }
        for (k, &o) in total_output.iter().enumerate() {
            check_value(&format!("period {year}: total output {k}"), o)?;
        }
        for (k, (&used, &o)) in intermediate_use.column_sums().iter().zip(&total_output).enumerate() {
            if o == 0.0 && used > 0.0 {
                return Err(at(format!("column {k} has intermediate use {used} but zero output")));
            }
            if used > o * (1.0 + COLUMN_USE_SLACK) {
                return Err(at(format!("column {k} uses {used}, exceeding its output {o}")));
            }
        }
        for (src, c) in &energy {
            if c.len() != dim {
                return Err(at(format!("{src} consumption has length {}, expected {dim}", c.len())));
            }
            for (h, &v) in c.iter().enumerate() {
                check_value(&format!("period {year}: {src} consumption {h}"), v)?;
            }
        }
        for fd in &final_demand {
            if fd.sector >= shape.n_nodes || fd.src_layer >= shape.n_layers || fd.dst_layer >= shape.n_layers {
                return Err(at(format!(
                    "final demand (sector {}, {} -> {}) out of range",
                    fd.sector, fd.src_layer, fd.dst_layer
                )));
            }
            check_value(&format!("period {year}: final demand"), fd.value)?;
        }
        final_demand.retain(|fd| fd.value > 0.0);
        final_demand.sort_by_key(|fd| (fd.src_layer, fd.sector, fd.dst_layer));
        for pair in final_demand.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            if (a.src_layer, a.sector, a.dst_layer) == (b.src_layer, b.sector, b.dst_layer) {
                return Err(at(format!(
                    "duplicate final demand (sector {}, {} -> {})",
                    a.sector, a.src_layer, a.dst_layer
                )));
            }
        }
        Ok(Self { year, shape, intermediate_use, total_output, energy, final_demand })
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn shape(&self) -> NetworkShape {
        self.shape
    }

    pub fn intermediate_use(&self) -> &CsrMatrix {
        &self.intermediate_use
    }

    pub fn total_output(&self) -> &[f64] {
        &self.total_output
    }

    pub fn energy(&self) -> &BTreeMap<EnergySource, Vec<f64>> {
        &self.energy
    }

    pub fn final_demand(&self) -> &[FinalDemand] {
        &self.final_demand
    }

    /// Consumption vector of a class, indexed by supra position. `All` is
    /// the renewable plus the non-renewable vector.
    pub fn consumption(&self, class: SourceClass) -> Vec<f64> {
        let sum_of = |cls: SourceClass| {
            let mut out = vec![0.0; self.shape.supra_dim()];
            for (src, c) in &self.energy {
                if cls.contains(*src) {
                    for (o, v) in out.iter_mut().zip(c) {
                        *o += v;
                    }
                }
            }
            out
        };
        match class {
            SourceClass::All => {
                let mut all = sum_of(SourceClass::Renewable);
                for (a, b) in all.iter_mut().zip(sum_of(SourceClass::NonRenewable)) {
                    *a += b;
                }
                all
            }
            cls => sum_of(cls),
        }
    }

    /// Same accounts with every consumption vector multiplied by `factor`.
    pub fn with_scaled_energy(&self, factor: f64) -> Result<Self> {
        let energy = self.energy.iter().map(|(s, c)| (*s, c.iter().map(|v| v * factor).collect())).collect();
        Self::new(
            self.year,
            self.shape,
            self.intermediate_use.clone(),
            self.total_output.clone(),
            energy,
            self.final_demand.clone(),
        )
    }

    pub fn with_year(&self, year: i32) -> Self {
        Self { year, ..self.clone() }
    }
}

/// Solve direction for [`leontief_apply`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `(I − A) x = v`
    Forward,
    /// `(I − Aᵀ) x = v`
    Transposed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Convergence is declared at `‖v − (I − M)x‖₁ ≤ tol·(1 + ‖v‖₁)`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 10_000 }
    }
}

/// Input coefficient matrix `A` with its transpose cached for row access.
#[derive(Debug, Clone, PartialEq)]
pub struct InputCoefficients {
    matrix: CsrMatrix,
    transpose: CsrMatrix,
}

impl InputCoefficients {
    /// Wraps an arbitrary square nonnegative coefficient matrix.
    pub fn from_matrix(matrix: CsrMatrix) -> Result<Self> {
        if matrix.n_rows() != matrix.n_cols() {
            return Err(Error::validation("input coefficient matrix must be square"));
        }
        if let Some((h, k, a)) = matrix.iter().find(|e| !(e.2 >= 0.0 && e.2.is_finite())) {
            return Err(Error::validation(format!("coefficient ({h}, {k}) = {a} is not a nonnegative number")));
        }
        let transpose = matrix.transpose();
        Ok(Self { matrix, transpose })
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.n_rows()
    }

    /// Certified bounds `lower ≤ ρ(A) ≤ upper` from power iteration on
    /// `A + I` (Collatz–Wielandt quotients of a positive vector).
    pub fn spectral_radius_bounds(&self, iterations: usize) -> (f64, f64) {
        let n = self.dim();
        if n == 0 {
            return (0.0, 0.0);
        }
        let mut x = vec![1.0 / n as f64; n];
        let mut best = (0.0f64, f64::INFINITY);
        for _ in 0..iterations.max(1) {
            let ax = self.matrix.mul_vec(&x);
            let mut lo = f64::INFINITY;
            let mut hi = 0.0f64;
            for (axh, xh) in ax.iter().zip(&x) {
                let q = axh / xh;
                lo = lo.min(q);
                hi = hi.max(q);
            }
            best.0 = best.0.max(lo);
            best.1 = best.1.min(hi);
            if best.1 - best.0 <= 1e-12 * best.1.max(1.0) {
                break;
            }
            let mut next: Vec<f64> = ax.iter().zip(&x).map(|(a, b)| a + b).collect();
            let s: f64 = next.iter().sum();
            next.iter_mut().for_each(|v| *v /= s);
            x = next;
        }
        best
    }

    /// Errors when the economy is not productive (`ρ(A) ≥ 1`).
    pub fn check_productive(&self) -> Result<()> {
        let max_col = self.matrix.column_sums().into_iter().fold(0.0, f64::max);
        let max_row = (0..self.dim()).map(|r| self.matrix.row(r).1.iter().sum::<f64>()).fold(0.0, f64::max);
        if max_col < 1.0 || max_row < 1.0 {
            return Ok(());
        }
        let (lower, upper) = self.spectral_radius_bounds(2_000);
        if upper < 1.0 {
            return Ok(());
        }
        if lower >= 1.0 - 1e-12 {
            return Err(Error::NonProductive {
                period: None,
                detail: format!("spectral radius of the input coefficients is at least {lower:.12}"),
            });
        }
        // Undecided by the bounds; the solver reports divergence if any.
        Ok(())
    }
}

/// `a_hk = u_hk / o_k` for `o_k > 0`, else 0.
pub fn input_coefficients(period: &MrioPeriod) -> Result<InputCoefficients> {
    let o = period.total_output();
    let a = period.intermediate_use().filter(|_, k, _| o[k] > 0.0).map_values(|_, k, u| u / o[k]);
    InputCoefficients::from_matrix(a).map_err(|e| e.in_period(period.year()))
}

/// Solves `(I − A) x = v` or `(I − Aᵀ) x = v`, i.e. applies the Leontief
/// inverse (or its transpose) to `v`.
pub fn leontief_apply(a: &InputCoefficients, v: &[f64], direction: Direction) -> Result<Vec<f64>> {
    leontief_apply_with(a, v, direction, SolverConfig::default())
}

pub fn leontief_apply_with(
    a: &InputCoefficients,
    v: &[f64],
    direction: Direction,
    config: SolverConfig,
) -> Result<Vec<f64>> {
    if v.len() != a.dim() {
        return Err(Error::validation(format!("right-hand side has length {}, expected {}", v.len(), a.dim())));
    }
    a.check_productive()?;
    let m = match direction {
        Direction::Forward => &a.matrix,
        Direction::Transposed => &a.transpose,
    };
    gauss_seidel(m, v, config)
}

/// Gauss–Seidel for `(I − M) x = v`. After the tolerance is met the sweeps
/// continue while the residual keeps shrinking, so the result is accurate
/// to rounding on well-conditioned systems.
fn gauss_seidel(m: &CsrMatrix, v: &[f64], config: SolverConfig) -> Result<Vec<f64>> {
    let n = v.len();
    let v_norm: f64 = v.iter().map(|x| x.abs()).sum();
    let mut x = vec![0.0; n];
    if v_norm == 0.0 {
        return Ok(x);
    }
    let mut diag = vec![0.0; n];
    for (h, d) in diag.iter_mut().enumerate() {
        *d = 1.0 - m.get(h, h);
        if *d <= 0.0 {
            return Err(Error::NonProductive {
                period: None,
                detail: format!("diagonal coefficient of position {h} is at least 1"),
            });
        }
    }
    let target = config.tol * (1.0 + v_norm);
    let floor = 1e-15 * (1.0 + v_norm);
    let mut best = f64::INFINITY;
    let mut best_x = x.clone();
    let mut converged = false;
    let mut trace = Vec::new();
    for _ in 0..config.max_iter {
        for h in 0..n {
            let (cols, vals) = m.row(h);
            let mut acc = v[h];
            for (&k, &w) in cols.iter().zip(vals) {
                let k = k as usize;
                if k != h {
                    acc += w * x[k];
                }
            }
            x[h] = acc / diag[h];
        }
        let residual = residual_norm(m, &x, v);
        trace.push(residual);
        if !residual.is_finite() || residual > 1e12 * (1.0 + v_norm) {
            return Err(Error::NonProductive {
                period: None,
                detail: format!("Leontief solve diverged (residual {residual:e})"),
            });
        }
        if converged && residual >= best {
            break;
        }
        if residual < best {
            best = residual;
            best_x.copy_from_slice(&x);
        }
        if residual <= target {
            converged = true;
        }
        if converged && residual <= floor {
            break;
        }
    }
    if !converged {
        return Err(Error::NotConverged {
            algorithm: "Gauss-Seidel Leontief solve",
            iterations: config.max_iter,
            residual: best,
            trace,
        });
    }
    Ok(best_x)
}

fn residual_norm(m: &CsrMatrix, x: &[f64], v: &[f64]) -> f64 {
    let mut total = 0.0;
    for h in 0..x.len() {
        let (cols, vals) = m.row(h);
        let mx: f64 = cols.iter().zip(vals).map(|(&k, &w)| w * x[k as usize]).sum();
        total += (v[h] - (x[h] - mx)).abs();
    }
    total
}

/// Bracketed factor of the embodied flow: for each source sector `i` and
/// receiving supra position `k = (α, j)`, `Σ_ε c_i^ε l_{(ε,i),k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbodiedIntensity {
    shape: NetworkShape,
    class: SourceClass,
    /// Row-major `N × NL`.
    values: Vec<f64>,
}

impl EmbodiedIntensity {
    pub fn class(&self) -> SourceClass {
        self.class
    }

    /// Intensity reaching position `k` from sector `source_sector`.
    #[inline]
    pub fn get(&self, source_sector: usize, k: usize) -> f64 {
        self.values[source_sector * self.shape.supra_dim() + k]
    }

    pub fn row(&self, source_sector: usize) -> &[f64] {
        let dim = self.shape.supra_dim();
        &self.values[source_sector * dim..(source_sector + 1) * dim]
    }

    fn plus(&self, other: &EmbodiedIntensity, class: SourceClass) -> Self {
        Self { shape: self.shape, class, values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() }
    }
}

/// Solves the `N` sector-restricted systems for one consumption vector.
pub fn embodied_intensity(period: &MrioPeriod, a: &InputCoefficients, class: SourceClass) -> Result<EmbodiedIntensity> {
    let shape = period.shape();
    match class {
        SourceClass::All => {
            let r = embodied_intensity(period, a, SourceClass::Renewable)?;
            let nr = embodied_intensity(period, a, SourceClass::NonRenewable)?;
            Ok(r.plus(&nr, SourceClass::All))
        }
        cls => {
            let c = period.consumption(cls);
            intensity_from_consumption(shape, a, &c, cls).map_err(|e| e.in_period(period.year()))
        }
    }
}

fn intensity_from_consumption(
    shape: NetworkShape,
    a: &InputCoefficients,
    c: &[f64],
    class: SourceClass,
) -> Result<EmbodiedIntensity> {
    let dim = shape.supra_dim();
    a.check_productive()?;
    let config = SolverConfig::default();
    let rows = (0..shape.n_nodes)
        .into_par_iter()
        .map(|i| {
            let mut rhs = vec![0.0; dim];
            let mut any = false;
            for layer in 0..shape.n_layers {
                let h = shape.supra_index(layer, i);
                rhs[h] = c[h];
                any |= c[h] > 0.0;
            }
            if !any {
                return Ok(rhs);
            }
            gauss_seidel(&a.transpose, &rhs, config)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EmbodiedIntensity { shape, class, values: rows.concat() })
}

/// Embodied energy flow supra-adjacency of one period.
pub fn embodied_flow_matrix(period: &MrioPeriod, class: SourceClass) -> Result<SupraAdjacency> {
    let a = input_coefficients(period)?;
    let intensity = embodied_intensity(period, &a, class)?;
    flows_from_intensity(period, &intensity)
}

fn flows_from_intensity(period: &MrioPeriod, intensity: &EmbodiedIntensity) -> Result<SupraAdjacency> {
    let shape = period.shape();
    let mut triplets = Vec::new();
    for fd in period.final_demand() {
        let k_in = shape.supra_index(fd.src_layer, fd.sector);
        let k = shape.supra_index(fd.dst_layer, fd.sector);
        for i in 0..shape.n_nodes {
            let q = intensity.get(i, k_in) * fd.value;
            if q > 0.0 {
                triplets.push((shape.supra_index(fd.src_layer, i), k, q));
            }
        }
    }
    SupraAdjacency::from_triplets(shape, triplets)
}

/// Embodied flow networks for several classes, sharing the coefficient
/// matrix and the renewable / non-renewable solves.
pub fn embodied_flow_matrices(period: &MrioPeriod, classes: &[SourceClass]) -> Result<Vec<SupraAdjacency>> {
    let a = input_coefficients(period)?;
    let mut cache: BTreeMap<SourceClass, EmbodiedIntensity> = BTreeMap::new();
    let mut get = |cls: SourceClass| -> Result<EmbodiedIntensity> {
        if let Some(hit) = cache.get(&cls) {
            return Ok(hit.clone());
        }
        let value = match cls {
            SourceClass::All => {
                let r = embodied_intensity(period, &a, SourceClass::Renewable)?;
                let nr = embodied_intensity(period, &a, SourceClass::NonRenewable)?;
                cache.insert(SourceClass::Renewable, r.clone());
                cache.insert(SourceClass::NonRenewable, nr.clone());
                r.plus(&nr, SourceClass::All)
            }
            other => embodied_intensity(period, &a, other)?,
        };
        cache.insert(cls, value.clone());
        Ok(value)
    };
    classes.iter().map(|&cls| flows_from_intensity(period, &get(cls)?)).collect()
}

/// One supra-adjacency per period, ordered by year.
pub fn build_temporal_network(dataset: &[MrioPeriod], class: SourceClass) -> Result<TemporalMultilayerNetwork> {
    let mut nets = build_temporal_networks(dataset, &[class])?;
    Ok(nets.remove(0))
}

/// Builds one temporal network per requested class. Periods are processed
/// in parallel and reassembled in year order.
pub fn build_temporal_networks(
    dataset: &[MrioPeriod],
    classes: &[SourceClass],
) -> Result<Vec<TemporalMultilayerNetwork>> {
    let first = dataset.first().ok_or_else(|| Error::validation("dataset has no periods"))?;
    for p in dataset {
        if p.shape() != first.shape() {
            return Err(Error::validation(format!(
                "period {} has shape N={} L={}, expected N={} L={}",
                p.year(),
                p.shape().n_nodes,
                p.shape().n_layers,
                first.shape().n_nodes,
                first.shape().n_layers
            )));
        }
    }
    let mut order: Vec<&MrioPeriod> = dataset.iter().collect();
    order.sort_by_key(|p| p.year());
    let per_period = order.par_iter().map(|p| embodied_flow_matrices(p, classes)).collect::<Result<Vec<_>>>()?;
    (0..classes.len())
        .map(|c| {
            TemporalMultilayerNetwork::new(
                order.iter().zip(&per_period).map(|(p, mats)| (p.year(), mats[c].clone())).collect(),
            )
        })
        .collect()
}
