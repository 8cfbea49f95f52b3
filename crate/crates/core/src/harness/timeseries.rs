//! Per-run time-series CSV.
//!
//! Layout: one `# key = value` line per config field, a header row, then one
//! row per iteration. Floats are written with six decimals.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{MavError, Result};
use crate::society::{MetricsRecord, SocietyConfig};

pub const HEADER: &str = "iteration,mean_fitness,max_fitness_current,max_fitness_so_far,diversity,\
mean_act_la,mean_act_ra,mean_act_ll,mean_act_rl,mean_act_head,mean_act_tail";

pub fn render_timeseries(records: &[MetricsRecord], config: &SocietyConfig) -> String {
    let mut out = String::with_capacity(80 * (records.len() + 16));
    for (key, value) in config.fields() {
        let _ = writeln!(out, "# {key} = {value}");
    }
    out.push_str(HEADER);
    out.push('\n');
    for r in records {
        let _ = write!(
            out,
            "{},{:.6},{:.6},{:.6},{}",
            r.iteration, r.mean_fitness, r.max_fitness_current, r.max_fitness_so_far, r.diversity
        );
        for a in r.mean_locus_activation {
            // -0.000000 and 0.000000 must not differ between runs
            let a = if a == 0.0 { 0.0 } else { a };
            let _ = write!(out, ",{a:.6}");
        }
        out.push('\n');
    }
    out
}

pub fn write_timeseries(
    records: &[MetricsRecord],
    config: &SocietyConfig,
    path: &Path,
) -> Result<()> {
    if records.is_empty() {
        return Err(MavError::Config(
            "refusing to write an empty time series".into(),
        ));
    }
    std::fs::write(path, render_timeseries(records, config)).map_err(|e| MavError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::config_from_header;
    use crate::society::run;

    #[test]
    fn layout() {
        let config = SocietyConfig {
            iterations: 99,
            rows: 4,
            cols: 4,
            ..Default::default()
        };
        let records = run(&config).unwrap();
        let text = render_timeseries(&records, &config);
        let lines: Vec<&str> = text.lines().collect();
        let comments = lines.iter().take_while(|l| l.starts_with('#')).count();
        assert_eq!(comments, 11);
        assert_eq!(lines[comments], HEADER);
        let rows = &lines[comments + 1..];
        assert_eq!(rows.len(), 100);
        for (i, row) in rows.iter().enumerate() {
            let cols: Vec<&str> = row.split(',').collect();
            assert_eq!(cols.len(), 11);
            assert_eq!(cols[0].parse::<usize>().unwrap(), i);
            assert_eq!(cols[1].split('.').nth(1).unwrap().len(), 6);
        }
    }

    #[test]
    fn header_reproduces_the_run() {
        let config = SocietyConfig {
            iterations: 40,
            seed: 1234,
            p_create: 0.75,
            ..Default::default()
        };
        let text = render_timeseries(&run(&config).unwrap(), &config);
        let again = config_from_header(&text).unwrap();
        assert_eq!(again, config);
        assert_eq!(render_timeseries(&run(&again).unwrap(), &again), text);
    }

    #[test]
    fn empty_series_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let err = write_timeseries(&[], &SocietyConfig::default(), &dir.path().join("x.csv"));
        assert!(err.is_err());
    }
}
