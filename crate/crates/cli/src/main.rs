use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dqcopt::frontend::corpus::MAX_WIDTH;
use dqcopt::frontend::{load_corpus, write_corpus, CorpusError, CorpusSpec};
use dqcopt::harness::{self, EncodingStrategy, HarnessError, RunConfig, Summary};

/// Environment variable consulted for `--seed` when the flag is absent.
const SEED_ENV: &str = "DQCOPT_SEED";

#[derive(Parser)]
#[command(name = "dqcopt", version, about = "Distributed quantum circuit compilation benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the benchmark corpus as QASM files.
    GenCorpus {
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = MAX_WIDTH)]
        max_width: usize,
    },
    /// Run every strategy over every circuit and QPU count.
    Run {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        sweep: SweepArgs,
        /// Timed repetitions per record (minimum reported).
        #[arg(long, default_value_t = 3)]
        repeats: usize,
    },
    /// Recompute the aggregate summary from a results CSV.
    Summarize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check that every pipeline output is equivalent to its input.
    Verify {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 10)]
        max_width: usize,
        #[command(flatten)]
        sweep: SweepArgs,
    },
}

#[derive(Args)]
struct SweepArgs {
    /// QPU counts: inclusive range `A..B` or comma list.
    #[arg(long, default_value = "2..10", value_parser = parse_qpus)]
    qpus: QpuCounts,
    #[arg(long, default_value_t = 0.03)]
    epsilon: f64,
    /// `all` or a comma list of baseline, global, local, hybrid.
    #[arg(long, default_value = "all", value_parser = parse_strategies)]
    strategies: Strategies,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for the metrics phase.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Clone)]
struct QpuCounts(Vec<usize>);

#[derive(Clone)]
struct Strategies(Vec<EncodingStrategy>);

fn parse_qpus(s: &str) -> Result<QpuCounts, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("invalid QPU count {t:?}"));
    let counts = if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        if a > b {
            return Err(format!("empty range {s:?}"));
        }
        (a..=b).collect()
    } else {
        s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if counts.iter().any(|&k| k < 2) {
        return Err("QPU counts must be at least 2".into());
    }
    Ok(QpuCounts(counts))
}

fn parse_strategies(s: &str) -> Result<Strategies, String> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(Strategies(EncodingStrategy::ALL.to_vec()));
    }
    let mut out = Vec::new();
    for part in s.split(',') {
        let st: EncodingStrategy = part.parse().map_err(|e: HarnessError| e.to_string())?;
        if !out.contains(&st) {
            out.push(st);
        }
    }
    Ok(Strategies(out))
}

enum Failure {
    User(String),
    Internal(String),
}

impl From<CorpusError> for Failure {
    fn from(e: CorpusError) -> Self {
        Failure::User(e.to_string())
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Partition(_) | HarnessError::Distribute(_) | HarnessError::Sim(_) => {
                Failure::Internal(e.to_string())
            }
            _ => Failure::User(e.to_string()),
        }
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::User(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

fn config(sweep: SweepArgs, repeats: usize) -> Result<RunConfig, Failure> {
    let cfg = RunConfig {
        qpu_counts: sweep.qpus.0,
        epsilon: sweep.epsilon,
        seed: resolve_seed(sweep.seed)?,
        strategies: sweep.strategies.0,
        jobs: sweep.jobs,
        timing_repeats: repeats,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn summary_path(csv: &Path) -> PathBuf {
    let stem = csv.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "results".into());
    csv.with_file_name(format!("{stem}.summary.json"))
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::User(format!("{}: {e}", path.display())))
}

fn execute(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::GenCorpus { out, seed, max_width } => {
            let spec = CorpusSpec::standard(resolve_seed(seed)?).with_max_width(max_width);
            let circuits = spec.circuits()?;
            std::fs::create_dir_all(&out).map_err(|e| Failure::User(format!("{}: {e}", out.display())))?;
            write_corpus(&out, &circuits)?;
            eprintln!("wrote {} circuits to {}", circuits.len(), out.display());
        }
        Command::Run { corpus, out, sweep, repeats } => {
            let cfg = config(sweep, repeats)?;
            let circuits = load_corpus(&corpus)?;
            let outcome = harness::run_benchmark(&cfg, &circuits)?;
            harness::write_csv(&out, &outcome.records)?;
            let summary = Summary::from_records(&outcome.records);
            let json_path = summary_path(&out);
            write_text(&json_path, &summary.to_json())?;
            eprintln!(
                "{} records, {} skipped (k > width), {} failed; wrote {} and {}",
                outcome.records.len(),
                outcome.skipped.len(),
                outcome.failures.len(),
                out.display(),
                json_path.display()
            );
            for f in &outcome.failures {
                eprintln!("  failed: {} {} k={}: {}", f.circuit_id, f.strategy, f.k, f.error);
            }
        }
        Command::Summarize { input, out } => {
            let records = harness::read_csv(&input)?;
            let summary = Summary::from_records(&records);
            write_text(&out, &summary.to_json())?;
            println!("{:<10} {:>8} {:>12} {:>12} {:>12}", "strategy", "records", "mean_s", "median_s", "stddev_s");
            for s in &summary.strategies {
                let t = &s.compile_time_s;
                println!("{:<10} {:>8} {:>12.6} {:>12.6} {:>12.6}", s.strategy, s.records, t.mean, t.median, t.stddev);
            }
        }
        Command::Verify { corpus, max_width, sweep } => {
            let cfg = config(sweep, 1)?;
            let circuits = load_corpus(&corpus)?;
            let report = harness::verify(&circuits, &cfg, max_width)?;
            for f in &report.failures {
                println!("FAIL {} {} k={}: {}", f.circuit_id, f.strategy, f.k, f.reason);
            }
            println!(
                "verified {} circuits, {} checks: {} passed, {} failed",
                report.circuits,
                report.checks,
                report.checks - report.failures.len(),
                report.failures.len()
            );
            if !report.failures.is_empty() {
                return Err(Failure::Internal("semantic preservation check failed".into()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::User(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}
