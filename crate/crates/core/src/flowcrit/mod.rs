//! Maximum flow and the flow-based arc criticality index.

mod criticality;
mod maxflow;

pub use criticality::{
    all_pairs_total, arc_criticality, country_flow_network, country_level_criticality, sample_pairs, AllPairsFlow,
    ArcCriticalityReport, CriticalityMode, CriticalityRow, DEFAULT_SAMPLED_PAIRS, EXACT_MODE_MAX_NODES,
};
pub use maxflow::{max_flow, max_flow_with, FlowNetwork, FlowSolver, MaxFlowAlgorithm, MaxFlowSolution};
