//! CLI experiment machinery: scenario configuration, sweep execution,
//! result persistence and the closed-form vs quadrature gap table.

pub mod config;
pub mod emit;
pub mod presets;
pub mod runner;

pub use config::{
    load_config, log10_deg_to_rad, most_square_factorization, parse_config_str, Engine,
    ScenarioConfig, Topology,
};
pub use emit::{emit_results, parse_results_json, results_to_csv, results_to_json, OutputFormat};
pub use presets::{preset, preset_text, PRESET_NAMES};
pub use runner::{build_correlation, oracle_gap, oracle_gap_csv, run_experiment, run_scenario, OracleGapRow};

use serde::{Deserialize, Serialize};

/// One emitted statistic; every row is reproducible from the scenario config
/// and its seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub scenario: String,
    pub topology: String,
    pub engine: String,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub metric: String,
    pub statistic: String,
    pub value: f64,
    pub seed: u64,
}
