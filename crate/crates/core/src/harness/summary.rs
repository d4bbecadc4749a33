use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{EncodingStrategy, MetricsRecord};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeSummary {
    pub mean: f64,
    pub median: f64,
    pub stddev: f64,
}

/// Per-column means over a group of records.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassMeans {
    pub n1q: f64,
    pub n2q: f64,
    pub n3q: f64,
    pub total: f64,
    pub depth_max: f64,
    pub depth_mean: f64,
    pub n_nonlocal: f64,
    pub conn_minus_1: f64,
    pub compile_time_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrategySummary {
    pub strategy: EncodingStrategy,
    pub records: usize,
    pub circuits: usize,
    pub compile_time_s: TimeSummary,
    pub means: ClassMeans,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WidthBinSummary {
    pub strategy: EncodingStrategy,
    pub width_bin: usize,
    pub records: usize,
    pub means: ClassMeans,
}

/// Table-style aggregate of a benchmark run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub strategies: Vec<StrategySummary>,
    pub width_bins: Vec<WidthBinSummary>,
    /// Circuits lacking a record for some (strategy, k) that other
    /// strategies have; left out of every aggregate.
    pub excluded_circuits: Vec<String>,
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Median; the mean of the two middle values for even lengths.
pub fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len().is_multiple_of(2) {
        (v[m - 1] + v[m]) / 2.0
    } else {
        v[m]
    }
}

/// Sample standard deviation (n - 1 denominator); 0 below two samples.
pub fn sample_stddev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let mu = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - mu) * (x - mu)).sum();
    (ss / (xs.len() - 1) as f64).sqrt()
}

/// Width rounded to the nearest power of two (in log scale).
pub fn width_bin(width: usize) -> usize {
    if width <= 1 {
        return 1;
    }
    1usize << (width as f64).log2().round() as u32
}

fn class_means(rs: &[&MetricsRecord]) -> ClassMeans {
    let col = |f: fn(&MetricsRecord) -> f64| mean(&rs.iter().map(|r| f(r)).collect::<Vec<_>>());
    ClassMeans {
        n1q: col(|r| r.n1q as f64),
        n2q: col(|r| r.n2q as f64),
        n3q: col(|r| r.n3q as f64),
        total: col(|r| r.total_gates() as f64),
        depth_max: col(|r| r.depth_max as f64),
        depth_mean: col(|r| r.depth_mean),
        n_nonlocal: col(|r| r.n_nonlocal as f64),
        conn_minus_1: col(|r| r.conn_minus_1 as f64),
        compile_time_s: col(|r| r.compile_time_s),
    }
}

impl Summary {
    pub fn from_records(records: &[MetricsRecord]) -> Summary {
        let strategies: BTreeSet<EncodingStrategy> = records.iter().map(|r| r.strategy).collect();
        let mut seen: BTreeMap<&str, BTreeMap<usize, BTreeSet<EncodingStrategy>>> = BTreeMap::new();
        for r in records {
            seen.entry(&r.circuit_id).or_default().entry(r.k).or_default().insert(r.strategy);
        }
        let excluded: BTreeSet<&str> = seen
            .iter()
            .filter(|(_, by_k)| by_k.values().any(|s| *s != strategies))
            .map(|(id, _)| *id)
            .collect();
        let kept: Vec<&MetricsRecord> =
            records.iter().filter(|r| !excluded.contains(r.circuit_id.as_str())).collect();

        let mut by_strategy = Vec::new();
        let mut by_bin = Vec::new();
        for &s in &strategies {
            let group: Vec<&MetricsRecord> = kept.iter().copied().filter(|r| r.strategy == s).collect();
            if group.is_empty() {
                continue;
            }
            let times: Vec<f64> = group.iter().map(|r| r.compile_time_s).collect();
            let circuits: BTreeSet<&str> = group.iter().map(|r| r.circuit_id.as_str()).collect();
            by_strategy.push(StrategySummary {
                strategy: s,
                records: group.len(),
                circuits: circuits.len(),
                compile_time_s: TimeSummary { mean: mean(&times), median: median(&times), stddev: sample_stddev(&times) },
                means: class_means(&group),
            });
            let bins: BTreeSet<usize> = group.iter().map(|r| width_bin(r.width)).collect();
            for bin in bins {
                let members: Vec<&MetricsRecord> = group.iter().copied().filter(|r| width_bin(r.width) == bin).collect();
                by_bin.push(WidthBinSummary { strategy: s, width_bin: bin, records: members.len(), means: class_means(&members) });
            }
        }
        Summary {
            strategies: by_strategy,
            width_bins: by_bin,
            excluded_circuits: excluded.into_iter().map(String::from).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serialises")
    }

    pub fn strategy(&self, s: EncodingStrategy) -> Option<&StrategySummary> {
        self.strategies.iter().find(|x| x.strategy == s)
    }
}
