//! Checkpoint statistics over a run's metrics series.

use std::collections::BTreeMap;

use crate::society::MetricsRecord;

/// Band (in activation units) a settled locus mean must stay within.
pub const STABILITY_BAND: f64 = 0.05;
/// Minimum number of consecutive in-band iterations that count as settled.
pub const STABILITY_WINDOW: usize = 20;
/// Diversity is considered stabilized over this many final iterations.
pub const DIVERSITY_TAIL: usize = 50;

/// First iteration at which every agent implements an optimal action.
pub fn convergence_iteration(records: &[MetricsRecord], agents: usize) -> Option<usize> {
    records
        .iter()
        .find(|r| r.optimal_count == agents)
        .map(|r| r.iteration)
}

/// First iteration at which mean fitness reaches `target` (within 1e-9).
pub fn first_reaching(records: &[MetricsRecord], target: f64) -> Option<usize> {
    records
        .iter()
        .find(|r| r.mean_fitness >= target - 1e-9)
        .map(|r| r.iteration)
}

/// Most frequent diversity over the last `DIVERSITY_TAIL` records; ties go
/// to the smaller value.
pub fn stabilized_diversity(records: &[MetricsRecord]) -> usize {
    let start = records.len().saturating_sub(DIVERSITY_TAIL);
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for r in &records[start..] {
        *counts.entry(r.diversity).or_default() += 1;
    }
    counts
        .into_iter()
        .max_by(|(d1, c1), (d2, c2)| c1.cmp(c2).then(d2.cmp(d1)))
        .map(|(d, _)| d)
        .unwrap_or(0)
}

/// Settling iteration of a series: the earliest index after which every
/// value stays within `band` of the final value. `None` if that tail is
/// shorter than `window` values.
pub fn settling_index(series: &[f64], band: f64, window: usize) -> Option<usize> {
    let last = *series.last()?;
    let mut start = series.len();
    for (i, v) in series.iter().enumerate().rev() {
        if (v - last).abs() > band {
            break;
        }
        start = i;
    }
    (series.len() - start >= window).then_some(start)
}

/// Settling iteration of each locus' mean activation.
pub fn locus_stabilization(records: &[MetricsRecord]) -> [Option<usize>; 6] {
    std::array::from_fn(|locus| {
        let series: Vec<f64> = records
            .iter()
            .map(|r| r.mean_locus_activation[locus])
            .collect();
        settling_index(&series, STABILITY_BAND, STABILITY_WINDOW).map(|i| records[i].iteration)
    })
}

/// Linear-interpolation quantile of sorted data (`q` in [0, 1]).
/// Infinite values sort last and propagate.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty data");
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi || sorted[lo] == sorted[hi] {
        return sorted[lo];
    }
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Median, first and third quartile.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quartiles {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub n: usize,
}

pub fn quartiles(values: &[f64]) -> Quartiles {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Quartiles {
        median: quantile(&sorted, 0.5),
        q1: quantile(&sorted, 0.25),
        q3: quantile(&sorted, 0.75),
        n: sorted.len(),
    }
}

pub fn median(values: &[f64]) -> f64 {
    quartiles(values).median
}
