//! Result tables and persisted network artifacts.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::dataset::TRANSACTIONS_HEADER;
use super::table::{create_file, fmt_f64, open_csv, write_csv, ExportFormat, Table};
use crate::centrality::{rank, MdHitsScores, RankingTable, ScoreSection};
use crate::error::{Error, Result};
use crate::flowcrit::ArcCriticalityReport;
use crate::leontief::SourceClass;
use crate::multinet::{EntityCodes, NetworkShape, SupraAdjacency, TemporalMultilayerNetwork};

pub fn ranking_table(table: &RankingTable) -> Table {
    let mut t = Table::new(&["rank", "label", "score"]);
    for r in &table.rows {
        t.push(vec![r.rank.into(), r.label.as_str().into(), r.score.into()]);
    }
    t
}

/// Labels of the entities scored by one MD-HITS section.
pub fn section_labels(section: ScoreSection, codes: &EntityCodes, years: &[i32]) -> Vec<String> {
    match section {
        ScoreSection::NodeHub | ScoreSection::NodeAuthority => codes.sector_codes.clone(),
        ScoreSection::LayerBroadcast | ScoreSection::LayerReceive => codes.country_codes.clone(),
        ScoreSection::Time => years.iter().map(i32::to_string).collect(),
    }
}

/// Five sections stacked in one table: `section,entity,score,rank`.
pub fn mdhits_table(scores: &MdHitsScores, codes: &EntityCodes, years: &[i32]) -> Result<Table> {
    let mut t = Table::new(&["section", "entity", "score", "rank"]);
    for section in ScoreSection::ALL {
        let labels = section_labels(section, codes, years);
        let ranked = rank(scores.section(section), &labels)?;
        for r in &ranked.rows {
            t.push(vec![section.as_str().into(), r.label.as_str().into(), r.score.into(), r.rank.into()]);
        }
    }
    Ok(t)
}

/// Long table of per-year runs: `section,entity,year,score,rank`.
pub fn mdhits_long_table(per_year: &[(i32, MdHitsScores)], codes: &EntityCodes) -> Result<Table> {
    let mut t = Table::new(&["section", "entity", "year", "score", "rank"]);
    for section in ScoreSection::ALL {
        for (year, scores) in per_year {
            let labels = section_labels(section, codes, &[*year]);
            let ranked = rank(scores.section(section), &labels)?;
            for r in &ranked.rows {
                t.push(vec![
                    section.as_str().into(),
                    r.label.as_str().into(),
                    (*year).into(),
                    r.score.into(),
                    r.rank.into(),
                ]);
            }
        }
    }
    Ok(t)
}

/// `year,measure,entity,score,rank` for per-period node scores.
pub fn node_score_table(rows: &[(i32, &str, RankingTable)]) -> Table {
    let mut t = Table::new(&["year", "measure", "entity", "score", "rank"]);
    for (year, measure, ranked) in rows {
        for r in &ranked.rows {
            t.push(vec![(*year).into(), (*measure).into(), r.label.as_str().into(), r.score.into(), r.rank.into()]);
        }
    }
    t
}

/// `tail_code,head_code,removed_total,index,rank`; `labels[v]` names node `v`.
pub fn criticality_table<S: AsRef<str>>(report: &ArcCriticalityReport, labels: &[S]) -> Table {
    let mut t = Table::new(&["tail_code", "head_code", "removed_total", "index", "rank"]);
    for (i, row) in report.rows.iter().enumerate() {
        t.push(vec![
            labels[row.tail].as_ref().into(),
            labels[row.head].as_ref().into(),
            row.removed_total.into(),
            row.index.into(),
            (i + 1).into(),
        ]);
    }
    t
}

/// One row of a criticality table read back from disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalityRecord {
    pub tail_code: String,
    pub head_code: String,
    pub removed_total: f64,
    pub index: f64,
    pub rank: usize,
}

pub fn read_criticality(path: &Path, format: ExportFormat) -> Result<Vec<CriticalityRecord>> {
    let t = Table::read(path, format)?;
    let col = |name: &str| {
        t.column(name).ok_or_else(|| Error::validation(format!("{}: missing column {name}", path.display())))
    };
    let (tail, head, removed, index, rank_col) =
        (col("tail_code")?, col("head_code")?, col("removed_total")?, col("index")?, col("rank")?);
    t.rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let bad = || Error::Parse {
                path: path.to_path_buf(),
                line: i as u64 + 2,
                message: "malformed criticality row".into(),
            };
            Ok(CriticalityRecord {
                tail_code: r[tail].as_str().ok_or_else(bad)?.to_string(),
                head_code: r[head].as_str().ok_or_else(bad)?.to_string(),
                removed_total: r[removed].as_f64().ok_or_else(bad)?,
                index: r[index].as_f64().ok_or_else(bad)?,
                rank: r[rank_col].as_i64().ok_or_else(bad)? as usize,
            })
        })
        .collect()
}

/// Sidecar describing a persisted network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkMeta {
    pub source_class: SourceClass,
    pub n_sectors: usize,
    pub n_countries: usize,
    pub years: Vec<i32>,
    pub sector_codes: Vec<String>,
    pub country_codes: Vec<String>,
}

pub fn network_paths(dir: &Path, class: SourceClass) -> (PathBuf, PathBuf) {
    (dir.join(format!("network_{}.csv", class.as_str())), dir.join(format!("network_{}.json", class.as_str())))
}

/// Writes `network_<class>.csv` (one row per arc and year) and its JSON
/// sidecar. Periods without arcs survive through the sidecar's year list.
pub fn save_network(
    net: &TemporalMultilayerNetwork,
    codes: &EntityCodes,
    class: SourceClass,
    dir: &Path,
) -> Result<(PathBuf, PathBuf)> {
    codes.check_shape(&net.shape())?;
    let (csv_path, meta_path) = network_paths(dir, class);
    let n = net.shape().n_nodes;
    let name = |h: usize| (codes.country_codes[h / n].clone(), codes.sector_codes[h % n].clone());
    let mut rows = Vec::with_capacity(net.n_arcs());
    for p in net.periods() {
        let y = p.year.to_string();
        for (h, k, w) in p.matrix.arcs() {
            let (hc, hs) = name(h);
            let (kc, ks) = name(k);
            rows.push(vec![y.clone(), hc, hs, kc, ks, fmt_f64(w)]);
        }
    }
    let mut header = TRANSACTIONS_HEADER;
    header[5] = "weight";
    write_csv(&csv_path, &header, rows)?;
    let meta = NetworkMeta {
        source_class: class,
        n_sectors: n,
        n_countries: net.shape().n_layers,
        years: net.years(),
        sector_codes: codes.sector_codes.clone(),
        country_codes: codes.country_codes.clone(),
    };
    let mut w = create_file(&meta_path)?;
    serde_json::to_writer_pretty(&mut w, &meta).map_err(|e| Error::validation(e.to_string()))?;
    std::io::Write::write_all(&mut w, b"\n")
        .and_then(|_| std::io::Write::flush(&mut w))
        .map_err(|e| Error::io(&meta_path, e))?;
    Ok((csv_path, meta_path))
}

pub fn load_network(dir: &Path, class: SourceClass) -> Result<(TemporalMultilayerNetwork, EntityCodes)> {
    let (csv_path, meta_path) = network_paths(dir, class);
    let file = File::open(&meta_path).map_err(|e| Error::io(&meta_path, e))?;
    let meta: NetworkMeta = serde_json::from_reader(BufReader::new(file)).map_err(|e| Error::Parse {
        path: meta_path.clone(),
        line: e.line() as u64,
        message: e.to_string(),
    })?;
    let codes = EntityCodes::new(meta.sector_codes.clone(), meta.country_codes.clone())?;
    let shape = NetworkShape::new(meta.n_sectors, meta.n_countries, 1)?;
    codes.check_shape(&shape)?;
    let sector = |c: &str| codes.sector_codes.iter().position(|s| s == c);
    let country = |c: &str| codes.country_codes.iter().position(|s| s == c);
    let mut per_year: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); meta.years.len()];
    let mut header = TRANSACTIONS_HEADER;
    header[5] = "weight";
    let mut rows = open_csv(&csv_path, &header)?;
    while let Some(rec) = rows.next_record()? {
        let f: Vec<String> = (1..5).map(|i| rec.field(i).to_string()).collect();
        let year: i32 = rows.parse(0, "year")?;
        let slot = meta
            .years
            .iter()
            .position(|&y| y == year)
            .ok_or_else(|| rows.error(format!("year {year} is not listed in the sidecar")))?;
        let supra = |c: &str, s: &str| match (country(c), sector(s)) {
            (Some(l), Some(i)) => Ok(shape.supra_index(l, i)),
            _ => Err(rows.error(format!("unknown code {c}:{s}"))),
        };
        let h = supra(&f[0], &f[1])?;
        let k = supra(&f[2], &f[3])?;
        let w = rows.value(5, "weight")?;
        per_year[slot].push((h, k, w));
    }
    let periods = meta
        .years
        .iter()
        .zip(per_year)
        .map(|(&y, t)| Ok((y, SupraAdjacency::from_triplets(shape, t)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok((TemporalMultilayerNetwork::new(periods)?, codes))
}
