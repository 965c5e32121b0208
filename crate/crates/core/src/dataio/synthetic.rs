//! Seeded synthetic input-output datasets.

use std::collections::BTreeMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::codes::{bundled_countries, bundled_sectors, CodeList};
use super::dataset::{Dataset, Units};
use crate::error::{Error, Result};
use crate::leontief::{EnergySource, FinalDemand, MrioPeriod};
use crate::multinet::{CsrMatrix, NetworkShape};

fn default_rho_cap() -> f64 {
    0.8
}

fn default_first_year() -> i32 {
    1990
}

fn default_mix() -> BTreeMap<EnergySource, f64> {
    EnergySource::ALL.iter().map(|&s| (s, 1.0)).collect()
}

/// Parameters of [`generate_synthetic`]. Readable from TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSpec {
    pub n_sectors: usize,
    pub n_countries: usize,
    pub n_periods: usize,
    /// Probability that an intermediate-use entry is present.
    pub density: f64,
    /// Probability that a final-demand entry is present; defaults to `density`.
    #[serde(default)]
    pub demand_density: Option<f64>,
    pub seed: u64,
    /// Every column of the coefficient matrix sums to less than this.
    #[serde(default = "default_rho_cap")]
    pub rho_cap: f64,
    #[serde(default = "default_first_year")]
    pub first_year: i32,
    /// Relative weight of each energy source; zero-weight sources get no rows.
    #[serde(default = "default_mix")]
    pub mix: BTreeMap<EnergySource, f64>,
}

impl SyntheticSpec {
    pub fn new(shape: NetworkShape, density: f64, seed: u64) -> Self {
        Self {
            n_sectors: shape.n_nodes,
            n_countries: shape.n_layers,
            n_periods: shape.n_periods,
            density,
            demand_density: None,
            seed,
            rho_cap: default_rho_cap(),
            first_year: default_first_year(),
            mix: default_mix(),
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let spec: Self = toml::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e.span().map_or(0, |s| text[..s.start].lines().count().max(1) as u64),
            message: e.message().to_string(),
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn shape(&self) -> Result<NetworkShape> {
        NetworkShape::new(self.n_sectors, self.n_countries, self.n_periods)
    }

    pub fn validate(&self) -> Result<()> {
        self.shape()?;
        let unit = |v: f64| v > 0.0 && v <= 1.0;
        if !unit(self.density) {
            return Err(Error::validation(format!("density must lie in (0, 1], got {}", self.density)));
        }
        if let Some(d) = self.demand_density {
            if !unit(d) {
                return Err(Error::validation(format!("demand_density must lie in (0, 1], got {d}")));
            }
        }
        if !(self.rho_cap > 0.0 && self.rho_cap < 1.0) {
            return Err(Error::validation(format!("rho_cap must lie in (0, 1), got {}", self.rho_cap)));
        }
        if self.mix.values().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::validation("mix weights must be finite and nonnegative"));
        }
        if !self.mix.values().any(|w| *w > 0.0) {
            return Err(Error::validation("at least one mix weight must be positive"));
        }
        Ok(())
    }
}

fn code_list(bundled: CodeList, n: usize, prefix: char) -> CodeList {
    if n <= bundled.len() {
        bundled.prefix(n).expect("prefix of a valid list")
    } else {
        CodeList::from_codes((1..=n).map(|i| format!("{prefix}{i:03}"))).expect("generated codes are unique")
    }
}

/// Deterministic in `spec`. Each coefficient column is rescaled to sum to
/// a random fraction of `rho_cap`, which bounds the spectral radius by the
/// cap.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<Dataset> {
    spec.validate()?;
    let shape = spec.shape()?.single_period();
    let (n, l, dim) = (shape.n_nodes, shape.n_layers, shape.supra_dim());
    let demand_density = spec.demand_density.unwrap_or(spec.density);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut periods = Vec::with_capacity(spec.n_periods);
    for t in 0..spec.n_periods {
        let output: Vec<f64> = (0..dim).map(|_| rng.random_range(50.0..150.0)).collect();
        let mut triplets = Vec::new();
        for (k, &o_k) in output.iter().enumerate() {
            let start = triplets.len();
            let mut sum = 0.0;
            for h in 0..dim {
                if rng.random::<f64>() < spec.density {
                    let v = rng.random_range(0.1..1.0);
                    sum += v;
                    triplets.push((h, k, v));
                }
            }
            if sum > 0.0 {
                let fraction = spec.rho_cap * rng.random_range(0.2..1.0);
                let scale = fraction * o_k / sum;
                for e in &mut triplets[start..] {
                    e.2 *= scale;
                }
            }
        }
        let mut energy = BTreeMap::new();
        for (&src, &w) in &spec.mix {
            if w > 0.0 {
                let c: Vec<f64> = output.iter().map(|o| w * rng.random_range(0.01..1.0) * 0.1 * o).collect();
                energy.insert(src, c);
            }
        }
        let mut final_demand = Vec::new();
        for src_layer in 0..l {
            for sector in 0..n {
                let o = output[shape.supra_index(src_layer, sector)];
                for dst_layer in 0..l {
                    if rng.random::<f64>() < demand_density {
                        final_demand.push(FinalDemand {
                            sector,
                            src_layer,
                            dst_layer,
                            value: rng.random_range(0.05..0.5) * o / l as f64,
                        });
                    }
                }
            }
        }
        periods.push(MrioPeriod::new(
            spec.first_year + t as i32,
            shape,
            CsrMatrix::from_triplets(dim, dim, triplets)?,
            output,
            energy,
            final_demand,
        )?);
    }
    Ok(Dataset {
        sectors: code_list(bundled_sectors(), n, 'S'),
        countries: code_list(bundled_countries(), l, 'C'),
        units: Units::default(),
        periods,
    })
}
