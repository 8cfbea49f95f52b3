//! Configuration, sweeps, presets and CSV output.

pub mod analysis;
pub mod config;
pub mod preset;
pub mod sweep;
pub mod timeseries;
