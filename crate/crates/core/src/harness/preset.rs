//! Named experiment plans.

use std::path::Path;

use crate::error::{MavError, Result};
use crate::harness::sweep::{execute_plan, Cell, Schedule, SweepReport};
use crate::society::SocietyConfig;

pub const PRESET_NAMES: [&str; 7] = [
    "figure2", "figure3", "figure4", "figure5", "figure6", "figure7", "figure8",
];

pub const P_CREATE_GRID: [&str; 5] = ["0", "0.25", "0.5", "0.75", "1"];
/// Creation probability grid with the 2:1 creation-to-imitation ratio added.
pub const P_CREATE_GRID_RATIO: [&str; 6] = ["0", "0.25", "0.5", "0.67", "0.75", "1"];
pub const MUTATION_RATE_GRID: [&str; 12] = [
    "0", "0.01", "0.04", "0.07", "0.1", "0.13", "0.17", "0.22", "0.33", "0.44", "0.55", "0.67",
];

/// Strategy ladder rungs as (label, mental simulation, imitation, knowledge ops).
pub const LADDER: [(&str, bool, bool, bool); 4] = [
    ("none", false, false, false),
    ("mental_simulation", true, false, false),
    ("imitation", true, true, false),
    ("knowledge_ops", true, true, true),
];

fn single_field(field: &str, values: &[&str]) -> Vec<Cell> {
    values.iter().map(|v| Cell::new([(field, *v)])).collect()
}

/// Cells of a named preset.
pub fn preset_cells(name: &str) -> Result<Vec<Cell>> {
    Ok(match name {
        "figure2" | "figure8" => single_field("p_create", &P_CREATE_GRID),
        "figure7" => single_field("p_create", &P_CREATE_GRID_RATIO),
        "figure3" => single_field("mutation_rate", &MUTATION_RATE_GRID),
        "figure4" => single_field("mutation_rate", &["0.01"]),
        "figure5" => single_field("mutation_rate", &["0.67"]),
        "figure6" => LADDER
            .iter()
            .map(|(_, ms, imitation, kops)| {
                Cell::new([
                    ("mental_simulation", ms.to_string()),
                    ("imitation_enabled", imitation.to_string()),
                    ("knowledge_ops", kops.to_string()),
                ])
            })
            .collect(),
        other => return Err(MavError::UnknownPreset(other.to_string())),
    })
}

/// Runs a preset with `replicates` seeds per cell into `out_dir`.
pub fn run_preset(
    name: &str,
    base_seed: u64,
    replicates: usize,
    out_dir: &Path,
) -> Result<SweepReport> {
    if replicates == 0 {
        return Err(MavError::Config("replicates must be at least 1".into()));
    }
    let cells = preset_cells(name)?;
    let base = SocietyConfig {
        seed: base_seed,
        ..SocietyConfig::default()
    };
    execute_plan(&base, &cells, replicates, out_dir, Schedule::Parallel)
}
