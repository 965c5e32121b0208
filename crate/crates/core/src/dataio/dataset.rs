//! CSV input-output datasets: manifest, loading with per-row validation and
//! canonical saving.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::codes::{bundled_countries, bundled_sectors, CodeList};
use super::table::{create_file, fmt_f64, open_csv, write_csv, CsvRows};
use crate::error::{Error, Result};
use crate::leontief::{EnergySource, FinalDemand, MrioPeriod, COLUMN_USE_SLACK};
use crate::multinet::{CsrMatrix, EntityCodes, NetworkShape};

pub const TRANSACTIONS_HEADER: [&str; 6] = ["year", "src_country", "src_sector", "dst_country", "dst_sector", "value"];
pub const OUTPUTS_HEADER: [&str; 4] = ["year", "country", "sector", "total_output"];
pub const ENERGY_HEADER: [&str; 5] = ["year", "country", "sector", "source", "value"];
pub const FINAL_DEMAND_HEADER: [&str; 5] = ["year", "src_country", "sector", "dst_country", "value"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Units {
    pub energy: String,
    pub monetary: String,
}

impl Default for Units {
    fn default() -> Self {
        Self { energy: "TJ".into(), monetary: "kUSD".into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct YearRange {
    pub from: i32,
    pub to: i32,
}

impl YearRange {
    pub fn contains(&self, year: i32) -> bool {
        (self.from..=self.to).contains(&year)
    }
}

/// TOML description of a dataset. Relative paths resolve against the
/// directory of the manifest file. Absent code-list paths select the
/// bundled lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetManifest {
    pub transactions: PathBuf,
    pub outputs: PathBuf,
    pub energy: PathBuf,
    pub final_demand: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sectors: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub countries: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_sectors: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_countries: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub years: Option<YearRange>,
    #[serde(default)]
    pub units: Units,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl DatasetManifest {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut m: Self = toml::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e.span().map_or(0, |s| text[..s.start].lines().count().max(1) as u64),
            message: e.message().to_string(),
        })?;
        m.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(m)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    fn code_lists(&self) -> Result<(CodeList, CodeList)> {
        let sectors = match &self.sectors {
            Some(p) => CodeList::read(&self.resolve(p))?,
            None => bundled_sectors(),
        };
        let countries = match &self.countries {
            Some(p) => CodeList::read(&self.resolve(p))?,
            None => bundled_countries(),
        };
        for (declared, list, what) in
            [(self.n_sectors, &sectors, "sectors"), (self.n_countries, &countries, "countries")]
        {
            if let Some(n) = declared {
                if n != list.len() {
                    return Err(Error::validation(format!(
                        "manifest declares {n} {what} but the code list has {}",
                        list.len()
                    )));
                }
            }
        }
        if sectors.is_empty() || countries.is_empty() {
            return Err(Error::validation("code lists must not be empty"));
        }
        if let Some(r) = self.years {
            if r.from > r.to {
                return Err(Error::validation(format!("empty year range {}:{}", r.from, r.to)));
            }
        }
        Ok((sectors, countries))
    }
}

/// Loaded accounts with their code lists, periods sorted by year.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub sectors: CodeList,
    pub countries: CodeList,
    pub units: Units,
    pub periods: Vec<MrioPeriod>,
}

impl Dataset {
    pub fn shape(&self) -> NetworkShape {
        NetworkShape { n_nodes: self.sectors.len(), n_layers: self.countries.len(), n_periods: self.periods.len() }
    }

    pub fn codes(&self) -> EntityCodes {
        EntityCodes::new(self.sectors.codes(), self.countries.codes()).expect("code lists are unique")
    }

    pub fn years(&self) -> Vec<i32> {
        self.periods.iter().map(MrioPeriod::year).collect()
    }

    pub fn restrict_years(&self, range: YearRange) -> Result<Self> {
        let periods: Vec<MrioPeriod> = self.periods.iter().filter(|p| range.contains(p.year())).cloned().collect();
        if periods.is_empty() {
            return Err(Error::validation(format!("no periods in {}:{}", range.from, range.to)));
        }
        Ok(Self { periods, ..self.clone() })
    }
}

struct Resolver<'a> {
    sectors: &'a CodeList,
    countries: &'a CodeList,
    range: Option<YearRange>,
}

impl Resolver<'_> {
    fn country(&self, rows: &CsvRows, code: &str) -> Result<usize> {
        self.countries.index_of(code).ok_or_else(|| rows.error(format!("unknown country code {code:?}")))
    }

    fn sector(&self, rows: &CsvRows, code: &str) -> Result<usize> {
        self.sectors.index_of(code).ok_or_else(|| rows.error(format!("unknown sector code {code:?}")))
    }

    fn supra(&self, rows: &CsvRows, country: &str, sector: &str) -> Result<usize> {
        let l = self.country(rows, country)?;
        let n = self.sector(rows, sector)?;
        Ok(l * self.sectors.len() + n)
    }

    /// `None` when the row falls outside the manifest's year range.
    fn year(&self, rows: &CsvRows) -> Result<Option<i32>> {
        let y: i32 = rows.parse(0, "year")?;
        Ok(match self.range {
            Some(r) if !r.contains(y) => None,
            _ => Some(y),
        })
    }
}

fn period_slot<'a, T>(rows: &CsvRows, periods: &'a mut BTreeMap<i32, T>, year: i32) -> Result<&'a mut T> {
    periods.get_mut(&year).ok_or_else(|| rows.error(format!("year {year} has no total output rows")))
}

#[derive(Default)]
struct PeriodRows {
    output: Vec<f64>,
    use_entries: Vec<(usize, usize, f64, u64)>,
    energy: BTreeMap<EnergySource, Vec<f64>>,
    final_demand: Vec<(FinalDemand, u64)>,
}

/// Reads and validates every file named by the manifest.
pub fn load_dataset(manifest: &DatasetManifest) -> Result<Dataset> {
    let (sectors, countries) = manifest.code_lists()?;
    let dim = sectors.len() * countries.len();
    let res = Resolver { sectors: &sectors, countries: &countries, range: manifest.years };
    let mut periods: BTreeMap<i32, PeriodRows> = BTreeMap::new();

    let path = manifest.resolve(&manifest.outputs);
    let mut rows = open_csv(&path, &OUTPUTS_HEADER)?;
    let mut seen: HashMap<(i32, usize), u64> = HashMap::new();
    while let Some(rec) = rows.next_record()? {
        let (country, sector) = (rec.field(1).to_string(), rec.field(2).to_string());
        let Some(year) = res.year(&rows)? else { continue };
        let h = res.supra(&rows, &country, &sector)?;
        let v = rows.value(3, "total output")?;
        if let Some(first) = seen.insert((year, h), rows.line()) {
            return Err(
                rows.error(format!("duplicate total output for {country}:{sector} in {year} (first at line {first})"))
            );
        }
        let slot = periods.entry(year).or_insert_with(|| PeriodRows { output: vec![0.0; dim], ..Default::default() });
        slot.output[h] = v;
    }
    if periods.is_empty() {
        return Err(Error::validation(format!("{}: no periods in range", path.display())));
    }

    let path = manifest.resolve(&manifest.transactions);
    let mut rows = open_csv(&path, &TRANSACTIONS_HEADER)?;
    while let Some(rec) = rows.next_record()? {
        let f: Vec<String> = (1..5).map(|i| rec.field(i).to_string()).collect();
        let Some(year) = res.year(&rows)? else { continue };
        let h = res.supra(&rows, &f[0], &f[1])?;
        let k = res.supra(&rows, &f[2], &f[3])?;
        let v = rows.value(5, "transaction value")?;
        let line = rows.line();
        period_slot(&rows, &mut periods, year)?.use_entries.push((h, k, v, line));
    }
    for (year, p) in periods.iter_mut() {
        p.use_entries.sort_by_key(|e| (e.0, e.1));
        for w in p.use_entries.windows(2) {
            if (w[0].0, w[0].1) == (w[1].0, w[1].1) {
                return Err(Error::Parse {
                    path: path.clone(),
                    line: w[0].3.max(w[1].3),
                    message: format!(
                        "duplicate transaction {} -> {} in {year} (also at line {})",
                        sectors_label(&sectors, &countries, w[0].0),
                        sectors_label(&sectors, &countries, w[0].1),
                        w[0].3.min(w[1].3)
                    ),
                });
            }
        }
        let mut col_use = vec![0.0; dim];
        let mut col_line = vec![0u64; dim];
        for &(_, k, v, line) in &p.use_entries {
            col_use[k] += v;
            if v > 0.0 {
                col_line[k] = col_line[k].max(line);
            }
        }
        for k in 0..dim {
            let (used, o) = (col_use[k], p.output[k]);
            if (o == 0.0 && used > 0.0) || used > o * (1.0 + COLUMN_USE_SLACK) {
                return Err(Error::Parse {
                    path: path.clone(),
                    line: col_line[k],
                    message: format!(
                        "intermediate use of {} in {year} is {used}, exceeding its total output {o}",
                        sectors_label(&sectors, &countries, k)
                    ),
                });
            }
        }
    }

    let path = manifest.resolve(&manifest.energy);
    let mut rows = open_csv(&path, &ENERGY_HEADER)?;
    let mut seen: HashMap<(i32, usize, EnergySource), u64> = HashMap::new();
    while let Some(rec) = rows.next_record()? {
        let f: Vec<String> = (1..4).map(|i| rec.field(i).to_string()).collect();
        let Some(year) = res.year(&rows)? else { continue };
        let h = res.supra(&rows, &f[0], &f[1])?;
        let source: EnergySource = f[2].parse().map_err(|_| rows.error(format!("unknown energy source {:?}", f[2])))?;
        let v = rows.value(4, "energy consumption")?;
        if let Some(first) = seen.insert((year, h, source), rows.line()) {
            return Err(rows.error(format!(
                "duplicate {source} consumption for {}:{} in {year} (first at line {first})",
                f[0], f[1]
            )));
        }
        let slot = period_slot(&rows, &mut periods, year)?;
        slot.energy.entry(source).or_insert_with(|| vec![0.0; dim])[h] = v;
    }

    let path = manifest.resolve(&manifest.final_demand);
    let mut rows = open_csv(&path, &FINAL_DEMAND_HEADER)?;
    let mut seen: HashMap<(i32, usize, usize, usize), u64> = HashMap::new();
    while let Some(rec) = rows.next_record()? {
        let f: Vec<String> = (1..4).map(|i| rec.field(i).to_string()).collect();
        let Some(year) = res.year(&rows)? else { continue };
        let src_layer = res.country(&rows, &f[0])?;
        let sector = res.sector(&rows, &f[1])?;
        let dst_layer = res.country(&rows, &f[2])?;
        let value = rows.value(4, "final demand")?;
        if let Some(first) = seen.insert((year, src_layer, sector, dst_layer), rows.line()) {
            return Err(rows.error(format!(
                "duplicate final demand {}:{} -> {} in {year} (first at line {first})",
                f[0], f[1], f[2]
            )));
        }
        let line = rows.line();
        period_slot(&rows, &mut periods, year)?
            .final_demand
            .push((FinalDemand { sector, src_layer, dst_layer, value }, line));
    }

    let shape = NetworkShape::new(sectors.len(), countries.len(), 1)?;
    let periods = periods
        .into_iter()
        .map(|(year, p)| {
            let u = CsrMatrix::from_triplets(dim, dim, p.use_entries.iter().map(|e| (e.0, e.1, e.2)))?;
            MrioPeriod::new(year, shape, u, p.output, p.energy, p.final_demand.into_iter().map(|f| f.0).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Dataset { sectors, countries, units: manifest.units.clone(), periods })
}

fn sectors_label(sectors: &CodeList, countries: &CodeList, h: usize) -> String {
    let n = sectors.len();
    format!("{}:{}", countries.code(h / n), sectors.code(h % n))
}

/// Reads the manifest at `path` and loads it.
pub fn load_manifest(path: &Path) -> Result<Dataset> {
    load_dataset(&DatasetManifest::read(path)?)
}

/// File names used by [`save_dataset`].
pub const MANIFEST_FILE: &str = "manifest.toml";

/// Writes canonical CSVs plus a manifest into `dir`. Rows are ordered by
/// year then code-list position, zero values are omitted and numbers use
/// the shortest text that reads back to the same value, so saving a loaded
/// canonical dataset reproduces its files byte for byte.
pub fn save_dataset(dataset: &Dataset, dir: &Path) -> Result<DatasetManifest> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let n = dataset.sectors.len();
    let country = |h: usize| dataset.countries.code(h / n).to_string();
    let sector = |h: usize| dataset.sectors.code(h % n).to_string();

    let mut transactions = Vec::new();
    let mut outputs = Vec::new();
    let mut energy = Vec::new();
    let mut final_demand = Vec::new();
    for p in &dataset.periods {
        let y = p.year().to_string();
        for (h, k, v) in p.intermediate_use().iter() {
            transactions.push(vec![y.clone(), country(h), sector(h), country(k), sector(k), fmt_f64(v)]);
        }
        for (h, &o) in p.total_output().iter().enumerate() {
            if o != 0.0 {
                outputs.push(vec![y.clone(), country(h), sector(h), fmt_f64(o)]);
            }
        }
        for h in 0..p.total_output().len() {
            for (src, c) in p.energy() {
                if c[h] != 0.0 {
                    energy.push(vec![y.clone(), country(h), sector(h), src.to_string(), fmt_f64(c[h])]);
                }
            }
        }
        for fd in p.final_demand() {
            final_demand.push(vec![
                y.clone(),
                dataset.countries.code(fd.src_layer).to_string(),
                dataset.sectors.code(fd.sector).to_string(),
                dataset.countries.code(fd.dst_layer).to_string(),
                fmt_f64(fd.value),
            ]);
        }
    }
    write_csv(&dir.join("transactions.csv"), &TRANSACTIONS_HEADER, transactions)?;
    write_csv(&dir.join("outputs.csv"), &OUTPUTS_HEADER, outputs)?;
    write_csv(&dir.join("energy.csv"), &ENERGY_HEADER, energy)?;
    write_csv(&dir.join("final_demand.csv"), &FINAL_DEMAND_HEADER, final_demand)?;
    dataset.sectors.write(&dir.join("sectors.csv"))?;
    dataset.countries.write(&dir.join("countries.csv"))?;

    let manifest = DatasetManifest {
        transactions: "transactions.csv".into(),
        outputs: "outputs.csv".into(),
        energy: "energy.csv".into(),
        final_demand: "final_demand.csv".into(),
        sectors: Some("sectors.csv".into()),
        countries: Some("countries.csv".into()),
        n_sectors: Some(dataset.sectors.len()),
        n_countries: Some(dataset.countries.len()),
        years: None,
        units: dataset.units.clone(),
        base_dir: dir.to_path_buf(),
    };
    let text = toml::to_string(&manifest).map_err(|e| Error::validation(e.to_string()))?;
    let path = dir.join(MANIFEST_FILE);
    let mut w = create_file(&path)?;
    std::io::Write::write_all(&mut w, text.as_bytes())
        .and_then(|_| std::io::Write::flush(&mut w))
        .map_err(|e| Error::io(&path, e))?;
    Ok(manifest)
}
