//! Energy consumption aggregates by country, sector and year.

use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use crate::centrality::{rank, RankingTable};
use crate::error::Result;
use crate::leontief::SourceClass;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ClassTotals {
    pub renewable: f64,
    pub nonrenewable: f64,
    pub all: f64,
}

impl ClassTotals {
    pub fn get(&self, class: SourceClass) -> f64 {
        match class {
            SourceClass::Renewable => self.renewable,
            SourceClass::NonRenewable => self.nonrenewable,
            SourceClass::All => self.all,
        }
    }

    /// Renewable share of the total; `None` when nothing is consumed.
    pub fn incidence(&self) -> Option<f64> {
        (self.all > 0.0).then(|| (self.renewable / self.all).clamp(0.0, 1.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodConsumption {
    pub year: i32,
    /// Indexed by supra position (country-major).
    pub entries: Vec<ClassTotals>,
    pub by_country: Vec<ClassTotals>,
    pub by_sector: Vec<ClassTotals>,
    pub world: ClassTotals,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsumptionSummary {
    pub sector_codes: Vec<String>,
    pub country_codes: Vec<String>,
    pub periods: Vec<PeriodConsumption>,
}

fn sum(parts: impl Iterator<Item = ClassTotals>) -> ClassTotals {
    parts.fold(ClassTotals::default(), |acc, t| ClassTotals {
        renewable: acc.renewable + t.renewable,
        nonrenewable: acc.nonrenewable + t.nonrenewable,
        all: acc.all + t.all,
    })
}

pub fn consumption_summary(dataset: &Dataset) -> ConsumptionSummary {
    let n = dataset.sectors.len();
    let l = dataset.countries.len();
    let periods = dataset
        .periods
        .iter()
        .map(|p| {
            let r = p.consumption(SourceClass::Renewable);
            let nr = p.consumption(SourceClass::NonRenewable);
            let all = p.consumption(SourceClass::All);
            let entries: Vec<ClassTotals> =
                (0..n * l).map(|h| ClassTotals { renewable: r[h], nonrenewable: nr[h], all: all[h] }).collect();
            let by_country = (0..l).map(|c| sum(entries[c * n..(c + 1) * n].iter().copied())).collect();
            let by_sector = (0..n).map(|s| sum((0..l).map(|c| entries[c * n + s]))).collect();
            let world = sum(entries.iter().copied());
            PeriodConsumption { year: p.year(), entries, by_country, by_sector, world }
        })
        .collect();
    ConsumptionSummary { sector_codes: dataset.sectors.codes(), country_codes: dataset.countries.codes(), periods }
}

impl ConsumptionSummary {
    pub fn years(&self) -> Vec<i32> {
        self.periods.iter().map(|p| p.year).collect()
    }

    pub fn period(&self, year: i32) -> Option<&PeriodConsumption> {
        self.periods.iter().find(|p| p.year == year)
    }

    /// World totals per year.
    pub fn world_series(&self) -> Vec<(i32, ClassTotals)> {
        self.periods.iter().map(|p| (p.year, p.world)).collect()
    }

    /// Relative change of the world total of `class` between consecutive
    /// periods; `None` where the earlier total is zero.
    pub fn world_growth(&self, class: SourceClass) -> Vec<(i32, Option<f64>)> {
        self.periods
            .windows(2)
            .map(|w| {
                let (a, b) = (w[0].world.get(class), w[1].world.get(class));
                (w[1].year, (a > 0.0).then(|| b / a - 1.0))
            })
            .collect()
    }

    pub fn top_countries(&self, period: &PeriodConsumption, class: SourceClass) -> Result<RankingTable> {
        let scores: Vec<f64> = period.by_country.iter().map(|t| t.get(class)).collect();
        rank(&scores, &self.country_codes)
    }

    pub fn top_sectors(&self, period: &PeriodConsumption, class: SourceClass) -> Result<RankingTable> {
        let scores: Vec<f64> = period.by_sector.iter().map(|t| t.get(class)).collect();
        rank(&scores, &self.sector_codes)
    }

    /// Countries ranked by their consumption in one sector.
    pub fn top_countries_in_sector(
        &self,
        period: &PeriodConsumption,
        sector: usize,
        class: SourceClass,
    ) -> Result<RankingTable> {
        let n = self.sector_codes.len();
        let scores: Vec<f64> =
            (0..self.country_codes.len()).map(|c| period.entries[c * n + sector].get(class)).collect();
        rank(&scores, &self.country_codes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::codes::CodeList;
    use crate::dataio::dataset::Units;
    use crate::leontief::{EnergySource, MrioPeriod};
    use crate::multinet::{CsrMatrix, NetworkShape};
    use std::collections::BTreeMap;

    fn dataset(energy: BTreeMap<EnergySource, Vec<f64>>) -> Dataset {
        let shape = NetworkShape::new(2, 2, 1).unwrap();
        let p = MrioPeriod::new(2000, shape, CsrMatrix::zeros(4, 4), vec![1.0; 4], energy, vec![]).unwrap();
        Dataset {
            sectors: CodeList::from_codes(["A", "B"]).unwrap(),
            countries: CodeList::from_codes(["X", "Y"]).unwrap(),
            units: Units::default(),
            periods: vec![p],
        }
    }

    #[test]
    fn single_renewable_entry() {
        let d = dataset([(EnergySource::Hydro, vec![0.0, 0.0, 7.0, 0.0])].into_iter().collect());
        let s = consumption_summary(&d);
        let p = &s.periods[0];
        assert_eq!(p.by_country[1].all, 7.0);
        assert_eq!(p.by_country[1].incidence(), Some(1.0));
        assert_eq!(p.by_country[0].incidence(), None);
        assert_eq!(p.by_sector[0].renewable, 7.0);
        assert_eq!(p.world.all, 7.0);
        let top = s.top_countries(p, SourceClass::All).unwrap();
        assert_eq!(top.labels(), vec!["Y", "X"]);
    }

    #[test]
    fn equal_split_gives_half() {
        let d = dataset(
            [(EnergySource::Hydro, vec![3.0, 0.0, 0.0, 0.0]), (EnergySource::Coal, vec![3.0, 0.0, 0.0, 0.0])]
                .into_iter()
                .collect(),
        );
        let s = consumption_summary(&d);
        assert_eq!(s.periods[0].by_country[0].incidence(), Some(0.5));
        assert_eq!(s.periods[0].world.nonrenewable, 3.0);
    }

    #[test]
    fn growth_series() {
        let mut d = dataset([(EnergySource::Coal, vec![1.0, 1.0, 0.0, 0.0])].into_iter().collect());
        let next = d.periods[0].with_scaled_energy(1.3).unwrap().with_year(2001);
        d.periods.push(next);
        let s = consumption_summary(&d);
        let g = s.world_growth(SourceClass::NonRenewable);
        assert_eq!(g.len(), 1);
        assert!((g[0].1.unwrap() - 0.3).abs() < 1e-12);
        assert_eq!(s.world_growth(SourceClass::Renewable)[0].1, None);
    }
}
