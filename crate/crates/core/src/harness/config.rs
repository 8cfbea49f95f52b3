//! `key = value` configuration files.
//!
//! One assignment per line, `#` starts a comment, blank lines are ignored.
//! Society keys are the [`SocietyConfig`] field names. Experiment files may
//! also set `replicates`, `output_dir`, and `sweep.<field> = v1, v2, ...`.

use std::path::PathBuf;

use crate::error::{MavError, Result};
use crate::society::SocietyConfig;

/// Society keys in canonical order (also the provenance header order).
pub const SOCIETY_KEYS: [&str; 11] = [
    "rows",
    "cols",
    "p_create",
    "mutation_rate",
    "mental_simulation",
    "imitation_enabled",
    "knowledge_ops",
    "iterations",
    "seed",
    "memory_backend",
    "fitness_backend",
];

pub const DEFAULT_REPLICATES: usize = 20;

fn parse_probability(value: &str) -> std::result::Result<f64, String> {
    let v: f64 = value
        .parse()
        .map_err(|_| format!("`{value}` is not a number"))?;
    if !(0.0..=1.0).contains(&v) {
        return Err(format!("{v} is outside [0, 1]"));
    }
    Ok(v)
}

fn parse_bool(value: &str) -> std::result::Result<bool, String> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(format!("`{value}` is not `true` or `false`")),
    }
}

fn parse_positive(value: &str) -> std::result::Result<usize, String> {
    match value.parse::<usize>() {
        Ok(0) => Err("must be at least 1".to_string()),
        Ok(n) => Ok(n),
        Err(_) => Err(format!("`{value}` is not a positive integer")),
    }
}

impl SocietyConfig {
    /// Assigns one field from its textual value.
    pub fn set_field(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        match key {
            "rows" => self.rows = parse_positive(value)?,
            "cols" => self.cols = parse_positive(value)?,
            "p_create" => self.p_create = parse_probability(value)?,
            "mutation_rate" => self.mutation_rate = parse_probability(value)?,
            "mental_simulation" => self.mental_simulation = parse_bool(value)?,
            "imitation_enabled" => self.imitation_enabled = parse_bool(value)?,
            "knowledge_ops" => self.knowledge_ops = parse_bool(value)?,
            "iterations" => self.iterations = parse_positive(value)?,
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| format!("`{value}` is not an unsigned 64-bit integer"))?
            }
            "memory_backend" => {
                self.memory_backend = value.parse().map_err(|e: MavError| e.to_string())?
            }
            "fitness_backend" => {
                self.fitness_backend = value.parse().map_err(|e: MavError| e.to_string())?
            }
            _ => return Err("unknown key".to_string()),
        }
        Ok(())
    }

    /// Every field as `(key, value)` text, in [`SOCIETY_KEYS`] order.
    /// Parsing these back with [`SocietyConfig::set_field`] reproduces the config.
    pub fn fields(&self) -> Vec<(&'static str, String)> {
        vec![
            ("rows", self.rows.to_string()),
            ("cols", self.cols.to_string()),
            ("p_create", self.p_create.to_string()),
            ("mutation_rate", self.mutation_rate.to_string()),
            ("mental_simulation", self.mental_simulation.to_string()),
            ("imitation_enabled", self.imitation_enabled.to_string()),
            ("knowledge_ops", self.knowledge_ops.to_string()),
            ("iterations", self.iterations.to_string()),
            ("seed", self.seed.to_string()),
            ("memory_backend", self.memory_backend.to_string()),
            ("fitness_backend", self.fitness_backend.to_string()),
        ]
    }
}

/// A multi-run experiment: a base config, swept fields and replicate count.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub base: SocietyConfig,
    /// `(field, values)` in file order; the run set is their cartesian product.
    pub sweep_params: Vec<(String, Vec<String>)>,
    pub replicates: usize,
    pub output_dir: Option<PathBuf>,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            base: SocietyConfig::default(),
            sweep_params: Vec::new(),
            replicates: DEFAULT_REPLICATES,
            output_dir: None,
        }
    }
}

struct Assignment<'a> {
    line: usize,
    key: &'a str,
    value: &'a str,
}

fn assignments(text: &str) -> impl Iterator<Item = Result<Assignment<'_>>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            return None;
        }
        Some(match content.split_once('=') {
            Some((key, value)) if !key.trim().is_empty() => Ok(Assignment {
                line,
                key: key.trim(),
                value: value.trim(),
            }),
            _ => Err(MavError::ConfigLine {
                line,
                key: content.to_string(),
                message: "expected `key = value`".to_string(),
            }),
        })
    })
}

fn line_error(a: &Assignment<'_>, message: String) -> MavError {
    MavError::ConfigLine {
        line: a.line,
        key: a.key.to_string(),
        message,
    }
}

/// Parses a society configuration; absent keys keep their defaults.
pub fn parse_config(text: &str) -> Result<SocietyConfig> {
    let mut config = SocietyConfig::default();
    for a in assignments(text) {
        let a = a?;
        config
            .set_field(a.key, a.value)
            .map_err(|m| line_error(&a, m))?;
    }
    config.validate()?;
    Ok(config)
}

/// Parses an experiment file (society keys plus experiment keys).
pub fn parse_experiment(text: &str) -> Result<ExperimentSpec> {
    let mut spec = ExperimentSpec::default();
    for a in assignments(text) {
        let a = a?;
        if let Some(field) = a.key.strip_prefix("sweep.") {
            if !SOCIETY_KEYS.contains(&field) {
                return Err(line_error(&a, format!("`{field}` is not a society field")));
            }
            let values: Vec<String> = a
                .value
                .split(',')
                .map(|v| v.trim().to_string())
                .filter(|v| !v.is_empty())
                .collect();
            if values.is_empty() {
                return Err(line_error(&a, "sweep needs at least one value".to_string()));
            }
            let mut probe = SocietyConfig::default();
            for v in &values {
                probe.set_field(field, v).map_err(|m| line_error(&a, m))?;
            }
            if spec.sweep_params.iter().any(|(k, _)| k == field) {
                return Err(line_error(&a, "field swept twice".to_string()));
            }
            spec.sweep_params.push((field.to_string(), values));
            continue;
        }
        match a.key {
            "replicates" => {
                spec.replicates = parse_positive(a.value).map_err(|m| line_error(&a, m))?
            }
            "output_dir" => spec.output_dir = Some(PathBuf::from(a.value)),
            key => spec
                .base
                .set_field(key, a.value)
                .map_err(|m| line_error(&a, m))?,
        }
    }
    spec.base.validate()?;
    Ok(spec)
}

/// Recovers the config from a time-series file's `# key = value` header.
pub fn config_from_header(text: &str) -> Result<SocietyConfig> {
    let header: String = text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .map(|l| format!("{}\n", l.trim_start_matches('#')))
        .collect();
    parse_config(&header)
}
