//! Command-line front end. Every command is deterministic in its arguments:
//! output files carry no timestamps and parallel work is reassembled in a
//! fixed order.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::centrality::{
    eigenvector_centrality, eigenvector_centrality_largest_scc, hits, md_hits, md_hits_single_period, rank,
    MdHitsConfig, RankingTable, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use crate::dataio::{
    consumption_summary, criticality_table, generate_synthetic, load_manifest, load_network, mdhits_long_table,
    mdhits_table, node_score_table, save_dataset, save_network, Cell, ClassTotals, Dataset, ExportFormat,
    SyntheticSpec, Table, YearRange, MANIFEST_FILE,
};
use crate::error::{Error, Result};
use crate::flowcrit::{country_level_criticality, CriticalityMode, DEFAULT_SAMPLED_PAIRS};
use crate::leontief::{build_temporal_networks, SourceClass};
use crate::multinet::{EntityCodes, TemporalMultilayerNetwork};

#[derive(Debug, Parser)]
#[command(name = "enernet", version, about = "Embodied energy flow networks: build, rank and stress-test")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build embodied-flow networks and persist one artifact per source class.
    Build(BuildArgs),
    /// Multi-dimensional HITS over nodes, layers and periods.
    Mdhits(MdHitsArgs),
    /// HITS hub and authority scores per period.
    Hits(PowerArgs),
    /// Eigenvector centrality per period.
    Eig(EigArgs),
    /// Country-level arc criticality per period.
    Criticality(CriticalityArgs),
    /// Consumption totals, rankings and renewable incidence.
    Consumption(DataArgs),
    /// Write a synthetic dataset as canonical CSVs plus a manifest.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Dataset manifest (TOML).
    #[arg(long, group = "input")]
    pub manifest: Option<PathBuf>,
    /// Synthetic dataset spec (TOML).
    #[arg(long, group = "input")]
    pub synthetic_spec: Option<PathBuf>,
    /// Directory holding networks written by `build`.
    #[arg(long, group = "input")]
    pub network: Option<PathBuf>,
    /// Inclusive period filter, `A:B` or a single year.
    #[arg(long, value_parser = parse_years)]
    pub years: Option<YearRange>,
    /// Source classes, comma separated: all, renewable, nonrenewable.
    #[arg(long, value_delimiter = ',', value_parser = parse_class)]
    pub source: Vec<SourceClass>,
    /// Drop arcs lighter than this weight.
    #[arg(long, default_value_t = 0.0)]
    pub min_weight: f64,
    /// Drop arcs from a sector to itself in the same economy.
    #[arg(long)]
    pub drop_self_loops: bool,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
    /// Rows printed (and written to top-k tables) per ranking.
    #[arg(long, default_value_t = 10)]
    pub top: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for ExportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => ExportFormat::Csv,
            FormatArg::Json => ExportFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct MdHitsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Five exponents g1,..,g5 for node hub, node authority, layer
    /// broadcast, layer receive and time.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    pub gamma: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 1000)]
    pub max_iter: usize,
}

#[derive(Debug, Clone, Args)]
pub struct PowerArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
}

#[derive(Debug, Clone, Args)]
pub struct EigArgs {
    #[command(flatten)]
    pub power: PowerArgs,
    /// Score only the largest strongly connected component.
    #[arg(long)]
    pub largest_scc: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Exact up to 250 countries, sampled above.
    Auto,
    Exact,
    Sampled,
}

#[derive(Debug, Clone, Args)]
pub struct CriticalityArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    pub mode: ModeArg,
    /// Ordered pairs drawn in sampled mode.
    #[arg(long, default_value_t = DEFAULT_SAMPLED_PAIRS)]
    pub pairs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub synthetic_spec: PathBuf,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

fn parse_years(s: &str) -> std::result::Result<YearRange, String> {
    let (a, b) = s.split_once(':').unwrap_or((s, s));
    let from: i32 = a.trim().parse().map_err(|_| format!("bad year {a:?}"))?;
    let to: i32 = b.trim().parse().map_err(|_| format!("bad year {b:?}"))?;
    if from > to {
        return Err(format!("empty range {from}:{to}"));
    }
    Ok(YearRange { from, to })
}

fn parse_class(s: &str) -> std::result::Result<SourceClass, String> {
    SourceClass::from_str(s).map_err(|e| e.to_string())
}

/// Where a command takes its data from.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Manifest(PathBuf),
    Synthetic(PathBuf),
    Network(PathBuf),
}

/// Validated parameters shared by the analysis commands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: Input,
    pub classes: Vec<SourceClass>,
    pub years: Option<YearRange>,
    pub min_weight: f64,
    pub drop_self_loops: bool,
    pub out: PathBuf,
    pub format: ExportFormat,
    pub top: usize,
}

impl RunConfig {
    pub fn new(input: &InputArgs, output: &OutputArgs, default_classes: &[SourceClass]) -> Result<Self> {
        let chosen = [
            input.manifest.clone().map(Input::Manifest),
            input.synthetic_spec.clone().map(Input::Synthetic),
            input.network.clone().map(Input::Network),
        ];
        let mut given = chosen.into_iter().flatten();
        let source = given
            .next()
            .ok_or_else(|| Error::validation("one of --manifest, --synthetic-spec or --network is required"))?;
        if given.next().is_some() {
            return Err(Error::validation("--manifest, --synthetic-spec and --network are mutually exclusive"));
        }
        if !(input.min_weight.is_finite() && input.min_weight >= 0.0) {
            return Err(Error::validation(format!("--min-weight must be finite and >= 0, got {}", input.min_weight)));
        }
        let mut classes = if input.source.is_empty() { default_classes.to_vec() } else { input.source.clone() };
        let mut seen = Vec::new();
        classes.retain(|c| {
            let fresh = !seen.contains(c);
            seen.push(*c);
            fresh
        });
        Ok(Self {
            input: source,
            classes,
            years: input.years,
            min_weight: input.min_weight,
            drop_self_loops: input.drop_self_loops,
            out: output.out.clone(),
            format: output.format.into(),
            top: output.top,
        })
    }

    fn path(&self, stem: &str) -> PathBuf {
        self.out.join(format!("{stem}.{}", self.format.extension()))
    }

    /// Loads or generates the dataset; fails for network input.
    pub fn dataset(&self) -> Result<Dataset> {
        let d = match &self.input {
            Input::Manifest(p) => load_manifest(p)?,
            Input::Synthetic(p) => generate_synthetic(&SyntheticSpec::read(p)?)?,
            Input::Network(_) => {
                return Err(Error::validation("this command needs --manifest or --synthetic-spec"));
            }
        };
        match self.years {
            Some(r) => d.restrict_years(r),
            None => Ok(d),
        }
    }

    /// One network per requested class, filtered and pruned.
    pub fn networks(&self) -> Result<(EntityCodes, Vec<(SourceClass, TemporalMultilayerNetwork)>)> {
        let (codes, nets) = match &self.input {
            Input::Network(dir) => {
                let mut codes = None;
                let mut nets = Vec::new();
                for &class in &self.classes {
                    let (net, c) = load_network(dir, class)?;
                    let net = match self.years {
                        Some(r) => net.restrict_years(r.from, r.to)?,
                        None => net,
                    };
                    if codes.as_ref().is_some_and(|prev| prev != &c) {
                        return Err(Error::validation("network artifacts disagree on their code lists"));
                    }
                    codes = Some(c);
                    nets.push((class, net));
                }
                (codes.expect("at least one class"), nets)
            }
            _ => {
                let d = self.dataset()?;
                let built = build_temporal_networks(&d.periods, &self.classes)?;
                (d.codes(), self.classes.iter().copied().zip(built).collect())
            }
        };
        let nets = nets
            .into_iter()
            .map(|(class, net)| {
                let net = net.map_periods(|m| {
                    let mut m = if self.min_weight > 0.0 { m.pruned(self.min_weight) } else { m.clone() };
                    if self.drop_self_loops {
                        m = m.without_self_loops();
                    }
                    Ok(m)
                })?;
                if net.n_arcs() == 0 {
                    eprintln!("warning: the {class} network has no arcs in any period");
                }
                Ok((class, net))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((codes, nets))
    }
}

fn print_top(log: &mut dyn Write, title: &str, table: &RankingTable, k: usize) -> Result<()> {
    let io = |e| Error::io("<stdout>", e);
    writeln!(log, "{title}").map_err(io)?;
    for r in table.top(k) {
        writeln!(log, "  {:>3}  {:<12} {}", r.rank, r.label, r.score).map_err(io)?;
    }
    Ok(())
}

fn say(log: &mut dyn Write, line: impl AsRef<str>) -> Result<()> {
    writeln!(log, "{}", line.as_ref()).map_err(|e| Error::io("<stdout>", e))
}

fn write_table(cfg: &RunConfig, stem: &str, table: &Table, written: &mut Vec<PathBuf>) -> Result<()> {
    let p = cfg.path(stem);
    table.write(&p, cfg.format)?;
    written.push(p);
    Ok(())
}

/// Persists one network artifact per class plus a summary table.
pub fn cmd_build(cfg: &RunConfig, log: &mut dyn Write) -> Result<Vec<PathBuf>> {
    let (codes, nets) = cfg.networks()?;
    let mut written = Vec::new();
    let mut summary = Table::new(&["source", "year", "arcs", "total_weight"]);
    for (class, net) in &nets {
        let (csv, meta) = save_network(net, &codes, *class, &cfg.out)?;
        written.extend([csv, meta]);
        for p in net.periods() {
            summary.push(vec![
                class.as_str().into(),
                p.year.into(),
                p.matrix.n_arcs().into(),
                p.matrix.total_weight().into(),
            ]);
            say(
                log,
                format!(
                    "{:<12} {}  arcs {:>8}  total weight {}",
                    class.as_str(),
                    p.year,
                    p.matrix.n_arcs(),
                    p.matrix.total_weight()
                ),
            )?;
        }
    }
    write_table(cfg, "build_summary", &summary, &mut written)?;
    Ok(written)
}

pub fn cmd_mdhits(cfg: &RunConfig, config: &MdHitsConfig, log: &mut dyn Write) -> Result<Vec<PathBuf>> {
    config.validate()?;
    let (codes, nets) = cfg.networks()?;
    let mut written = Vec::new();
    for (class, net) in &nets {
        let whole = md_hits(net, config)?;
        write_table(
            cfg,
            &format!("mdhits_{}", class.as_str()),
            &mdhits_table(&whole, &codes, &net.years())?,
            &mut written,
        )?;
        say(log, format!("{class}: MD-HITS converged in {} sweeps", whole.iterations))?;
        print_top(log, "  node hub", &rank(&whole.node_hub, &codes.sector_codes)?, cfg.top)?;
        print_top(log, "  layer broadcast", &rank(&whole.layer_broadcast, &codes.country_codes)?, cfg.top)?;

        let mut per_year = Vec::new();
        for p in net.periods() {
            if p.matrix.n_arcs() == 0 {
                eprintln!("warning: {class} {} has no arcs; skipped in the per-year table", p.year);
                continue;
            }
            per_year.push((p.year, md_hits_single_period(&p.matrix, config)?));
        }
        write_table(
            cfg,
            &format!("mdhits_{}_by_year", class.as_str()),
            &mdhits_long_table(&per_year, &codes)?,
            &mut written,
        )?;
    }
    Ok(written)
}

pub fn cmd_hits(cfg: &RunConfig, tol: f64, max_iter: usize, log: &mut dyn Write) -> Result<Vec<PathBuf>> {
    let (codes, nets) = cfg.networks()?;
    let labels = codes.supra_labels();
    let mut written = Vec::new();
    for (class, net) in &nets {
        let mut rows = Vec::new();
        for p in net.periods() {
            if p.matrix.n_arcs() == 0 {
                eprintln!("warning: {class} {} has no arcs; skipped", p.year);
                continue;
            }
            let s = hits(p.matrix.matrix(), tol, max_iter)?;
            let hub = rank(&s.hub, &labels)?;
            print_top(log, &format!("{class} {} hub", p.year), &hub, cfg.top)?;
            rows.push((p.year, "hub", hub));
            rows.push((p.year, "authority", rank(&s.authority, &labels)?));
        }
        write_table(cfg, &format!("hits_{}", class.as_str()), &node_score_table(&rows), &mut written)?;
    }
    Ok(written)
}

pub fn cmd_eig(
    cfg: &RunConfig,
    tol: f64,
    max_iter: usize,
    largest_scc: bool,
    log: &mut dyn Write,
) -> Result<Vec<PathBuf>> {
    let (codes, nets) = cfg.networks()?;
    let labels = codes.supra_labels();
    let mut written = Vec::new();
    for (class, net) in &nets {
        let mut rows = Vec::new();
        for p in net.periods() {
            if p.matrix.n_arcs() == 0 {
                eprintln!("warning: {class} {} has no arcs; skipped", p.year);
                continue;
            }
            let s = if largest_scc {
                eigenvector_centrality_largest_scc(p.matrix.matrix(), tol, max_iter)?
            } else {
                eigenvector_centrality(p.matrix.matrix(), tol, max_iter)?
            };
            let ranked = rank(&s.centrality, &labels)?;
            print_top(log, &format!("{class} {} eigenvector (rho = {})", p.year, s.spectral_radius), &ranked, cfg.top)?;
            rows.push((p.year, "eigenvector", ranked));
        }
        write_table(cfg, &format!("eig_{}", class.as_str()), &node_score_table(&rows), &mut written)?;
    }
    Ok(written)
}

pub fn cmd_criticality(
    cfg: &RunConfig,
    mode: ModeArg,
    pairs: usize,
    seed: u64,
    log: &mut dyn Write,
) -> Result<Vec<PathBuf>> {
    let (codes, nets) = cfg.networks()?;
    let l = codes.country_codes.len();
    let mode = match mode {
        ModeArg::Auto => CriticalityMode::auto(l, seed),
        ModeArg::Exact => CriticalityMode::Exact,
        ModeArg::Sampled => CriticalityMode::Sampled { pairs, seed },
    };
    if let CriticalityMode::Sampled { pairs: 0, .. } = mode {
        return Err(Error::validation("--pairs must be at least 1"));
    }
    let mut written = Vec::new();
    for (class, net) in &nets {
        let mut summary = Table::new(&["year", "baseline_total", "mode", "pair_count", "arc_count"]);
        let mut top = Table::new(&["year", "rank", "tail_code", "head_code", "index"]);
        for p in net.periods() {
            let report = country_level_criticality(&p.matrix, mode).inspect_err(|_| {
                eprintln!("while scoring the {class} network of {}", p.year);
            })?;
            let stem = format!("criticality_{}_{}", class.as_str(), p.year);
            write_table(cfg, &stem, &criticality_table(&report, &codes.country_codes), &mut written)?;
            let mode_label = match report.mode {
                CriticalityMode::Exact => "exact".to_string(),
                CriticalityMode::Sampled { pairs, seed } => format!("sampled:{pairs}:{seed}"),
            };
            summary.push(vec![
                p.year.into(),
                report.baseline_total.into(),
                mode_label.into(),
                report.pair_count.into(),
                report.rows.len().into(),
            ]);
            say(log, format!("{class} {}: baseline total max flow {}", p.year, report.baseline_total))?;
            for (i, r) in report.top(cfg.top).iter().enumerate() {
                let (t, h) = (&codes.country_codes[r.tail], &codes.country_codes[r.head]);
                say(log, format!("  {:>3}  {t} -> {h}  {}", i + 1, r.index))?;
                top.push(vec![p.year.into(), (i + 1).into(), t.as_str().into(), h.as_str().into(), r.index.into()]);
            }
        }
        write_table(cfg, &format!("criticality_{}_summary", class.as_str()), &summary, &mut written)?;
        write_table(cfg, &format!("criticality_{}_top", class.as_str()), &top, &mut written)?;
    }
    Ok(written)
}

fn totals_cells(t: &ClassTotals) -> Vec<Cell> {
    vec![
        t.renewable.into(),
        t.nonrenewable.into(),
        t.all.into(),
        t.incidence().map_or(Cell::Str(String::new()), Cell::Float),
    ]
}

pub fn cmd_consumption(cfg: &RunConfig, log: &mut dyn Write) -> Result<Vec<PathBuf>> {
    let d = cfg.dataset()?;
    let s = consumption_summary(&d);
    let mut written = Vec::new();
    let totals = ["renewable", "nonrenewable", "all", "incidence"];

    let mut countries = Table::new(&[&["year", "country"][..], &totals].concat());
    let mut sectors = Table::new(&[&["year", "sector"][..], &totals].concat());
    let mut world =
        Table::new(&[&["year"][..], &totals, &["growth_renewable", "growth_nonrenewable", "growth_all"]].concat());
    let mut top = Table::new(&["year", "source", "rank", "country", "value"]);
    let mut top_by_sector = Table::new(&["year", "sector", "rank", "country", "value"]);
    let growth_classes = [SourceClass::Renewable, SourceClass::NonRenewable, SourceClass::All];
    let growth: Vec<Vec<(i32, Option<f64>)>> = growth_classes.iter().map(|&c| s.world_growth(c)).collect();
    for (t, p) in s.periods.iter().enumerate() {
        for (c, tot) in p.by_country.iter().enumerate() {
            let mut row: Vec<Cell> = vec![p.year.into(), s.country_codes[c].as_str().into()];
            row.extend(totals_cells(tot));
            countries.push(row);
        }
        for (i, tot) in p.by_sector.iter().enumerate() {
            let mut row: Vec<Cell> = vec![p.year.into(), s.sector_codes[i].as_str().into()];
            row.extend(totals_cells(tot));
            sectors.push(row);
        }
        let mut row: Vec<Cell> = vec![p.year.into()];
        row.extend(totals_cells(&p.world));
        for series in &growth {
            let g = t.checked_sub(1).and_then(|i| series[i].1);
            row.push(g.map_or(Cell::Str(String::new()), Cell::Float));
        }
        world.push(row);
        for class in SourceClass::EACH {
            let ranked = s.top_countries(p, class)?;
            for r in ranked.top(cfg.top) {
                top.push(vec![
                    p.year.into(),
                    class.as_str().into(),
                    r.rank.into(),
                    r.label.as_str().into(),
                    r.score.into(),
                ]);
            }
            if class == SourceClass::All {
                print_top(log, &format!("{} top countries, all sources", p.year), &ranked, cfg.top)?;
            }
        }
        for (i, code) in s.sector_codes.iter().enumerate() {
            let ranked = s.top_countries_in_sector(p, i, SourceClass::All)?;
            for r in ranked.top(cfg.top) {
                top_by_sector.push(vec![
                    p.year.into(),
                    code.as_str().into(),
                    r.rank.into(),
                    r.label.as_str().into(),
                    r.score.into(),
                ]);
            }
        }
        let inc = p.world.incidence().map_or("n/a".to_string(), |v| v.to_string());
        say(log, format!("{} world consumption {} (renewable incidence {inc})", p.year, p.world.all))?;
    }
    write_table(cfg, "consumption_countries", &countries, &mut written)?;
    write_table(cfg, "consumption_sectors", &sectors, &mut written)?;
    write_table(cfg, "consumption_world", &world, &mut written)?;
    write_table(cfg, "consumption_top", &top, &mut written)?;
    write_table(cfg, "consumption_top_by_sector", &top_by_sector, &mut written)?;
    Ok(written)
}

pub fn cmd_synth(spec_path: &Path, out: &Path, log: &mut dyn Write) -> Result<Vec<PathBuf>> {
    let spec = SyntheticSpec::read(spec_path)?;
    let d = generate_synthetic(&spec)?;
    save_dataset(&d, out)?;
    say(
        log,
        format!(
            "wrote {} periods, {} sectors x {} countries to {}",
            d.periods.len(),
            d.sectors.len(),
            d.countries.len(),
            out.display()
        ),
    )?;
    Ok(vec![out.join(MANIFEST_FILE)])
}

fn gamma_from(values: &Option<Vec<f64>>) -> Result<[f64; 5]> {
    match values {
        None => Ok(MdHitsConfig::default().gamma),
        Some(v) => v
            .as_slice()
            .try_into()
            .map_err(|_| Error::validation(format!("--gamma takes exactly 5 values, got {}", v.len()))),
    }
}

/// Runs a parsed command line.
pub fn run(cli: Cli, log: &mut dyn Write) -> Result<Vec<PathBuf>> {
    let all = [SourceClass::All];
    match cli.command {
        Command::Build(a) => cmd_build(&RunConfig::new(&a.input, &a.output, &SourceClass::EACH)?, log),
        Command::Mdhits(a) => {
            let config = MdHitsConfig { gamma: gamma_from(&a.gamma)?, tol: a.tol, max_iter: a.max_iter };
            cmd_mdhits(&RunConfig::new(&a.input, &a.output, &all)?, &config, log)
        }
        Command::Hits(a) => {
            check_power(a.tol, a.max_iter)?;
            cmd_hits(&RunConfig::new(&a.input, &a.output, &all)?, a.tol, a.max_iter, log)
        }
        Command::Eig(a) => {
            let p = a.power;
            check_power(p.tol, p.max_iter)?;
            cmd_eig(&RunConfig::new(&p.input, &p.output, &all)?, p.tol, p.max_iter, a.largest_scc, log)
        }
        Command::Criticality(a) => {
            cmd_criticality(&RunConfig::new(&a.input, &a.output, &all)?, a.mode, a.pairs, a.seed, log)
        }
        Command::Consumption(a) => cmd_consumption(&RunConfig::new(&a.input, &a.output, &all)?, log),
        Command::Synth(a) => cmd_synth(&a.synthetic_spec, &a.out, log),
    }
}

fn check_power(tol: f64, max_iter: usize) -> Result<()> {
    if tol.is_nan() || tol <= 0.0 || max_iter == 0 {
        return Err(Error::validation("--tol must be positive and --max-iter at least 1"));
    }
    Ok(())
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
