//! Encoding strategies, the compile pipeline and the benchmark sweep.

mod record;
mod summary;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::Circuit;
use crate::distributor::{distribute, distributed_metrics, reassemble, DistributeError, DistributedCircuit, DistributedMetrics};
use crate::optimizer::optimize;
use crate::partitioner::{build_hypergraph, connectivity_minus_one, cut_cost, partition, Partition, PartitionError, DEFAULT_EPSILON};
use crate::sim::{unitary_equal_up_to_phase, SimError, MAX_ORACLE_WIDTH};

pub use record::{read_csv, read_csv_from, write_csv, write_csv_to, MetricsRecord, CSV_HEADER};
pub use summary::{median, sample_stddev, width_bin, ClassMeans, StrategySummary, Summary, TimeSummary, WidthBinSummary};

/// Tolerance of the semantic-preservation oracle.
pub const VERIFY_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EncodingStrategy {
    Baseline,
    Global,
    Local,
    Hybrid,
}

impl EncodingStrategy {
    pub const ALL: [EncodingStrategy; 4] = [
        EncodingStrategy::Baseline,
        EncodingStrategy::Global,
        EncodingStrategy::Local,
        EncodingStrategy::Hybrid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EncodingStrategy::Baseline => "baseline",
            EncodingStrategy::Global => "global",
            EncodingStrategy::Local => "local",
            EncodingStrategy::Hybrid => "hybrid",
        }
    }

    fn optimizes_before(self) -> bool {
        matches!(self, EncodingStrategy::Global | EncodingStrategy::Hybrid)
    }

    fn optimizes_after(self) -> bool {
        matches!(self, EncodingStrategy::Local | EncodingStrategy::Hybrid)
    }
}

impl fmt::Display for EncodingStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EncodingStrategy {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        EncodingStrategy::ALL
            .into_iter()
            .find(|e| e.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| HarnessError::UnknownStrategy(s.to_string()))
    }
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown strategy {0:?} (expected baseline, global, local or hybrid)")]
    UnknownStrategy(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("partitioning failed: {0}")]
    Partition(#[from] PartitionError),
    #[error("distribution failed: {0}")]
    Distribute(#[from] DistributeError),
    #[error("oracle failed: {0}")]
    Sim(#[from] SimError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {msg}")]
    Csv { path: String, msg: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub qpu_counts: Vec<usize>,
    pub epsilon: f64,
    pub seed: u64,
    pub strategies: Vec<EncodingStrategy>,
    /// Worker threads for the metrics phase; `None` uses all cores.
    pub jobs: Option<usize>,
    /// Timed repetitions per record; the minimum is reported.
    pub timing_repeats: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            qpu_counts: (2..=10).collect(),
            epsilon: DEFAULT_EPSILON,
            seed: 0,
            strategies: EncodingStrategy::ALL.to_vec(),
            jobs: None,
            timing_repeats: 3,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::Config(m.to_string()));
        if self.qpu_counts.is_empty() {
            return bad("no QPU counts given");
        }
        if self.qpu_counts.iter().any(|&k| k < 2) {
            return bad("every QPU count must be at least 2");
        }
        if !self.epsilon.is_finite() || self.epsilon < 0.0 {
            return bad("epsilon must be finite and non-negative");
        }
        if self.strategies.is_empty() {
            return bad("no strategies selected");
        }
        if self.timing_repeats == 0 {
            return bad("timing repeats must be at least 1");
        }
        if self.jobs == Some(0) {
            return bad("jobs must be at least 1");
        }
        Ok(())
    }
}

/// Output of one pipeline run.
#[derive(Clone, Debug)]
pub struct Compiled {
    /// The circuit that was partitioned (optimised first for Global/Hybrid).
    pub partitioned_circuit: Circuit,
    pub partition: Partition,
    pub distributed: DistributedCircuit,
    pub metrics: DistributedMetrics,
    pub cut_cost: u64,
    pub conn_minus_1: u64,
}

/// Runs one encoding: optional global optimisation, a single partitioning
/// step, distribution, then optional per-subcircuit optimisation.
pub fn compile(c: &Circuit, s: EncodingStrategy, k: usize, epsilon: f64, seed: u64) -> Result<Compiled, HarnessError> {
    let source = if s.optimizes_before() { optimize(c).0 } else { c.clone() };
    let h = build_hypergraph(&source);
    let p = partition(&h, k, epsilon, seed)?;
    let mut d = distribute(&source, &p)?;
    if s.optimizes_after() {
        d = d.map_subcircuits(|sub| optimize(sub).0)?;
    }
    Ok(Compiled {
        metrics: distributed_metrics(&d),
        cut_cost: cut_cost(&h, &p),
        conn_minus_1: connectivity_minus_one(&h, &p),
        partitioned_circuit: source,
        partition: p,
        distributed: d,
    })
}

fn record_of(c: &Circuit, s: EncodingStrategy, k: usize, compiled: &Compiled, seconds: f64) -> MetricsRecord {
    let m = &compiled.metrics;
    MetricsRecord {
        circuit_id: c.id().to_string(),
        width: c.width(),
        strategy: s,
        k,
        n1q: m.counts.one,
        n2q: m.counts.two,
        n3q: m.counts.three,
        depth_max: m.depth_max,
        depth_mean: m.depth_mean,
        n_nonlocal: m.n_nonlocal,
        conn_minus_1: compiled.conn_minus_1,
        compile_time_s: seconds,
    }
}

fn timed(c: &Circuit, s: EncodingStrategy, k: usize, epsilon: f64, seed: u64, repeats: usize) -> Result<(Compiled, f64), HarnessError> {
    let mut best = f64::INFINITY;
    let mut result = None;
    for _ in 0..repeats.max(1) {
        let start = Instant::now();
        let compiled = compile(c, s, k, epsilon, seed)?;
        best = best.min(start.elapsed().as_secs_f64());
        result = Some(compiled);
    }
    Ok((result.unwrap(), best.max(f64::MIN_POSITIVE)))
}

/// Compiles and times one record (minimum over three runs).
pub fn run_encoding(c: &Circuit, s: EncodingStrategy, k: usize, epsilon: f64, seed: u64) -> Result<MetricsRecord, HarnessError> {
    let (compiled, seconds) = timed(c, s, k, epsilon, seed, 3)?;
    Ok(record_of(c, s, k, &compiled, seconds))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub circuit_id: String,
    pub strategy: EncodingStrategy,
    pub k: usize,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Skipped {
    pub circuit_id: String,
    pub width: usize,
    pub k: usize,
}

#[derive(Clone, Debug)]
pub struct BenchmarkOutcome {
    pub records: Vec<MetricsRecord>,
    pub failures: Vec<Failure>,
    pub skipped: Vec<Skipped>,
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool, HarnessError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| HarnessError::Config(format!("thread pool: {e}")))
}

/// One record per (circuit, strategy, k), in that order. Metrics are
/// computed in parallel; timing then runs serially, one record at a time.
/// Configurations with `k` above the circuit width are skipped.
pub fn run_benchmark(cfg: &RunConfig, corpus: &[Circuit]) -> Result<BenchmarkOutcome, HarnessError> {
    cfg.validate()?;
    if corpus.is_empty() {
        return Err(HarnessError::EmptyCorpus);
    }
    let mut jobs = Vec::new();
    let mut skipped = Vec::new();
    for c in corpus {
        for &s in &cfg.strategies {
            for &k in &cfg.qpu_counts {
                if k > c.width() {
                    if s == cfg.strategies[0] {
                        log::info!("skipping {} (width {}) at k = {k}", c.id(), c.width());
                        skipped.push(Skipped { circuit_id: c.id().to_string(), width: c.width(), k });
                    }
                    continue;
                }
                jobs.push((c, s, k));
            }
        }
    }

    let metrics: Vec<Result<Compiled, HarnessError>> = pool(cfg.jobs)?.install(|| {
        jobs.par_iter().map(|&(c, s, k)| compile(c, s, k, cfg.epsilon, cfg.seed)).collect()
    });

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (&(c, s, k), result) in jobs.iter().zip(metrics) {
        let outcome = result.and_then(|compiled| {
            let (_, seconds) = timed(c, s, k, cfg.epsilon, cfg.seed, cfg.timing_repeats)?;
            Ok(record_of(c, s, k, &compiled, seconds))
        });
        match outcome {
            Ok(r) => records.push(r),
            Err(e) => {
                log::warn!("{} / {s} / k = {k} failed: {e}", c.id());
                failures.push(Failure { circuit_id: c.id().to_string(), strategy: s, k, error: e.to_string() });
            }
        }
    }
    Ok(BenchmarkOutcome { records, failures, skipped })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyFailure {
    pub circuit_id: String,
    pub strategy: EncodingStrategy,
    pub k: usize,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub circuits: usize,
    pub checks: usize,
    pub failures: Vec<VerifyFailure>,
}

/// Semantic-preservation suite: for every circuit of width at most
/// `max_width`, every strategy and every feasible `k`, the reassembled
/// pipeline output must equal the input up to global phase.
pub fn verify(corpus: &[Circuit], cfg: &RunConfig, max_width: usize) -> Result<VerifyReport, HarnessError> {
    cfg.validate()?;
    if max_width > MAX_ORACLE_WIDTH {
        return Err(HarnessError::Config(format!("oracle width is capped at {MAX_ORACLE_WIDTH}")));
    }
    let selected: Vec<&Circuit> = corpus.iter().filter(|c| c.width() <= max_width).collect();
    let jobs: Vec<(&Circuit, EncodingStrategy, usize)> = selected
        .iter()
        .flat_map(|&c| {
            cfg.strategies
                .iter()
                .flat_map(move |&s| cfg.qpu_counts.iter().filter(move |&&k| k <= c.width()).map(move |&k| (c, s, k)))
        })
        .collect();
    let outcomes: Vec<Option<VerifyFailure>> = pool(cfg.jobs)?.install(|| {
        jobs.par_iter()
            .map(|&(c, s, k)| {
                let fail = |reason: String| Some(VerifyFailure { circuit_id: c.id().to_string(), strategy: s, k, reason });
                let compiled = match compile(c, s, k, cfg.epsilon, cfg.seed) {
                    Ok(x) => x,
                    Err(e) => return fail(e.to_string()),
                };
                let back = match reassemble(&compiled.distributed) {
                    Ok(x) => x,
                    Err(e) => return fail(e.to_string()),
                };
                match unitary_equal_up_to_phase(c, &back, VERIFY_TOL) {
                    Ok(true) => None,
                    Ok(false) => fail("unitary differs".into()),
                    Err(e) => fail(e.to_string()),
                }
            })
            .collect()
    });
    Ok(VerifyReport {
        circuits: selected.len(),
        checks: jobs.len(),
        failures: outcomes.into_iter().flatten().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{generate, Family};

    #[test]
    fn strategy_names_round_trip() {
        for s in EncodingStrategy::ALL {
            assert_eq!(s.name().parse::<EncodingStrategy>().unwrap(), s);
        }
        assert!("greedy".parse::<EncodingStrategy>().is_err());
    }

    #[test]
    fn ghz_at_full_split() {
        for n in [4, 8] {
            let c = generate(Family::Ghz, n, 0).unwrap();
            for s in EncodingStrategy::ALL {
                let r = run_encoding(&c, s, n, 0.03, 1).unwrap();
                assert_eq!(r.n_nonlocal, n - 1, "{s}");
                assert!(r.compile_time_s > 0.0);
            }
        }
    }

    #[test]
    fn local_keeps_cut_structure() {
        let c = generate(Family::Random, 16, 4).unwrap();
        for k in 2..=6 {
            let base = compile(&c, EncodingStrategy::Baseline, k, 0.03, 9).unwrap();
            let local = compile(&c, EncodingStrategy::Local, k, 0.03, 9).unwrap();
            assert_eq!(base.metrics.n_nonlocal, local.metrics.n_nonlocal);
            assert_eq!(base.partition, local.partition);
            assert_eq!(base.metrics.n_nonlocal as u64, base.cut_cost);
        }
    }

    #[test]
    fn hybrid_on_fixpoint_matches_baseline() {
        let c = generate(Family::Ghz, 8, 0).unwrap();
        let base = compile(&c, EncodingStrategy::Baseline, 3, 0.03, 2).unwrap();
        let hybrid = compile(&c, EncodingStrategy::Hybrid, 3, 0.03, 2).unwrap();
        assert_eq!(base.metrics, hybrid.metrics);
    }

    #[test]
    fn benchmark_record_count_and_skips() {
        let corpus = vec![generate(Family::Qft, 16, 0).unwrap(), generate(Family::Ghz, 4, 0).unwrap()];
        let cfg = RunConfig { timing_repeats: 1, ..RunConfig::default() };
        let out = run_benchmark(&cfg, &corpus).unwrap();
        assert_eq!(out.records.len(), 36 + 4 * 3);
        assert_eq!(out.skipped.len(), 6);
        assert!(out.failures.is_empty());
        assert_eq!(out.records[0].strategy, EncodingStrategy::Baseline);
        assert_eq!(out.records[0].k, 2);
    }

    #[test]
    fn config_validation() {
        let cfg = RunConfig { qpu_counts: vec![1, 2], ..RunConfig::default() };
        assert!(cfg.validate().is_err());
        assert!(run_benchmark(&RunConfig::default(), &[]).is_err());
    }

    #[test]
    fn verify_small_corpus() {
        let corpus = vec![generate(Family::QaoaRing, 4, 0).unwrap(), generate(Family::Random, 5, 1).unwrap()];
        let report = verify(&corpus, &RunConfig::default(), 10).unwrap();
        assert_eq!(report.circuits, 2);
        assert_eq!(report.checks, 4 * (3 + 4));
        assert!(report.failures.is_empty(), "{:?}", report.failures);
    }
}
