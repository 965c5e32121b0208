//! CSV ingestion, bundled code lists, synthetic datasets, consumption
//! aggregates and result export.

mod codes;
mod consumption;
mod dataset;
mod export;
mod synthetic;
mod table;

pub use codes::{bundled_countries, bundled_sectors, CodeEntry, CodeList};
pub use consumption::{consumption_summary, ClassTotals, ConsumptionSummary, PeriodConsumption};
pub use dataset::{
    load_dataset, load_manifest, save_dataset, Dataset, DatasetManifest, Units, YearRange, ENERGY_HEADER,
    FINAL_DEMAND_HEADER, MANIFEST_FILE, OUTPUTS_HEADER, TRANSACTIONS_HEADER,
};
pub use export::{
    criticality_table, load_network, mdhits_long_table, mdhits_table, network_paths, node_score_table, ranking_table,
    read_criticality, save_network, section_labels, CriticalityRecord, NetworkMeta,
};
pub use synthetic::{generate_synthetic, SyntheticSpec};
pub use table::{Cell, ExportFormat, Table};
