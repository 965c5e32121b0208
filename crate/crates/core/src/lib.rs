//! Embodied energy flows on temporal multilayer networks.
//!
//! Sectors are nodes, economies are layers and years are time instants.
//! [`leontief`] turns input-output accounts into per-period supra-adjacency
//! matrices, [`centrality`] scores nodes, layers and periods (HITS, MD-HITS,
//! eigenvector centrality) and [`flowcrit`] ranks arcs by how much their
//! removal lowers the all-pairs total maximum flow.

pub mod centrality;
pub mod cli;
pub mod dataio;
pub mod error;
pub mod flowcrit;
pub mod leontief;
pub mod multinet;

pub use error::{Error, Result};
pub use leontief::{EnergySource, MrioPeriod, SourceClass};
pub use multinet::{EntityCodes, NetworkShape, SupraAdjacency, TemporalMultilayerNetwork};
