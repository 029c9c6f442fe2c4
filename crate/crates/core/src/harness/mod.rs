//! Tuning, validation and final benchmark phases.
//!
//! Every run is identified by its coordinates (algorithm, size, phase,
//! config, replication) and seeded from them, so results do not depend on
//! scheduling and any run can be replayed in isolation.

mod plan;
mod report;
mod store;

use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::presets::published_config;
use crate::solver::{solve, Algorithm, AlgorithmConfig, SolverError};
use crate::tuning::{
    build_design, expand_design, grid_warnings, select_config, ConfigAggregate, FactorGrid, OrthogonalArray,
    TuningError,
};

pub use plan::{derive_seed, ExperimentPlan, Phase, DEFAULT_PLAN_TOML, MAX_REPLICATIONS, MAX_SIZE, OFF_DESIGN};
pub use report::{render_report, Report};
pub use store::{read_results, write_results, Manifest, RESULTS_CSV, SCHEMA_VERSION, TUNING_CSV, MANIFEST_JSON};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("plan: {0}")]
    Plan(String),
    #[error("{algorithm} at n={n} with {config}: {source}")]
    Solver { algorithm: Algorithm, n: usize, config: String, source: SolverError },
    #[error(transparent)]
    Tuning(#[from] TuningError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {message}")]
    Format { path: String, message: String },
    #[error("{path}: schema version {found}, expected {expected}")]
    SchemaMismatch { path: String, found: u32, expected: u32 },
    #[error("no tuned configuration for {algorithm} at n={n}; run `queens-bench tune --algorithms {key} --sizes {n}` first", key = algorithm.key())]
    MissingTunedConfig { algorithm: Algorithm, n: usize },
    #[error("no published configuration for {algorithm} at n={n}")]
    NoPublishedConfig { algorithm: Algorithm, n: usize },
    #[error("cannot aggregate: {0}")]
    Aggregate(String),
    #[error("integrity: {0}")]
    Integrity(String),
}

impl HarnessError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        HarnessError::Io { path: path.display().to_string(), source }
    }

    pub(crate) fn format(path: &Path, message: impl ToString) -> Self {
        HarnessError::Format { path: path.display().to_string(), message: message.to_string() }
    }
}

/// One finished run, as persisted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub algorithm: Algorithm,
    pub n: usize,
    pub phase: Phase,
    /// Design row of the configuration; empty for published configurations.
    pub config_id: Option<usize>,
    pub replication: u32,
    pub seed: u64,
    pub cost: u64,
    pub nfe: u64,
    pub iterations: u64,
    pub elapsed_ms: f64,
    pub capped: bool,
}

impl RunRow {
    /// Sort key matching the order of the persisted files.
    pub fn key(&self) -> (Algorithm, usize, Phase, usize, u32) {
        (self.algorithm, self.n, self.phase, self.config_id.unwrap_or(usize::MAX), self.replication)
    }
}

/// A run waiting to be executed.
#[derive(Debug, Clone)]
pub struct Trial {
    pub algorithm: Algorithm,
    pub n: usize,
    pub phase: Phase,
    pub config_id: Option<usize>,
    pub replication: u32,
    pub seed: u64,
    pub config: AlgorithmConfig,
}

impl Trial {
    pub fn new(
        plan: &ExperimentPlan,
        n: usize,
        phase: Phase,
        config_id: Option<usize>,
        replication: u32,
        config: &AlgorithmConfig,
    ) -> Self {
        let algorithm = config.algorithm();
        let slot = config_id.map_or(OFF_DESIGN, |c| c as u64);
        Self {
            algorithm,
            n,
            phase,
            config_id,
            replication,
            seed: derive_seed(plan.master_seed, algorithm, n, phase, slot, replication),
            config: config.clone(),
        }
    }
}

/// Runs `trials` on up to `workers` threads (0 means one per core) and
/// returns the rows in input order.
pub fn execute(trials: &[Trial], nfe_cap: u64, workers: usize) -> Result<Vec<RunRow>, HarnessError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| HarnessError::Plan(format!("cannot start worker pool: {e}")))?;
    let done = AtomicUsize::new(0);
    let total = trials.len();
    pool.install(|| {
        trials
            .par_iter()
            .map(|t| {
                let r = solve(t.n, &t.config, t.seed, nfe_cap).map_err(|source| HarnessError::Solver {
                    algorithm: t.algorithm,
                    n: t.n,
                    config: t.config.describe(),
                    source,
                })?;
                let finished = done.fetch_add(1, Ordering::Relaxed) + 1;
                log::debug!("{} n={} {} run {finished}/{total}: cost {} nfe {}", t.algorithm, t.n, t.phase, r.cost, r.nfe);
                Ok(RunRow {
                    algorithm: t.algorithm,
                    n: t.n,
                    phase: t.phase,
                    config_id: t.config_id,
                    replication: t.replication,
                    seed: t.seed,
                    cost: r.cost,
                    nfe: r.nfe,
                    iterations: r.iterations,
                    elapsed_ms: r.elapsed.as_secs_f64() * 1000.0,
                    capped: r.capped,
                })
            })
            .collect()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConfigSource {
    /// Chosen by the Taguchi/TOPSIS search.
    Tuned,
    /// Taken from the published tuned tables.
    Published,
}

/// A design row with its tuning outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub config_id: usize,
    pub config: AlgorithmConfig,
    pub mean_cost: f64,
    pub mean_nfe: f64,
    pub min_cost: u64,
    pub max_cost: u64,
    pub closeness: f64,
    pub rank: usize,
}

/// Outcome of tuning one algorithm at one size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuningReport {
    pub algorithm: Algorithm,
    pub n: usize,
    pub source: ConfigSource,
    pub design: Option<OrthogonalArray>,
    pub candidates: Vec<Candidate>,
    pub chosen_id: Option<usize>,
    pub chosen: AlgorithmConfig,
    pub warnings: Vec<String>,
}

/// Runs every design row `tuning_replications` times and picks the TOPSIS
/// winner over (mean cost, mean NFE).
pub fn run_tuning_phase(
    plan: &ExperimentPlan,
    algorithm: Algorithm,
    n: usize,
    workers: usize,
) -> Result<(TuningReport, Vec<RunRow>), HarnessError> {
    let grid = FactorGrid::for_algorithm(algorithm);
    let design = build_design(&grid)?;
    let configs = expand_design(&design, &grid)?;
    let trials: Vec<Trial> = configs
        .iter()
        .enumerate()
        .flat_map(|(id, cfg)| {
            (0..plan.tuning_replications).map(move |rep| Trial::new(plan, n, Phase::Tuning, Some(id), rep, cfg))
        })
        .collect();
    log::info!("tuning {algorithm} at n={n}: {} configs x {} runs", configs.len(), plan.tuning_replications);
    let rows = execute(&trials, plan.nfe_cap, workers)?;

    let reps = plan.tuning_replications as usize;
    let aggregates: Vec<ConfigAggregate> = configs
        .iter()
        .zip(rows.chunks(reps))
        .map(|(cfg, chunk)| ConfigAggregate {
            config: cfg.clone(),
            mean_cost: mean(chunk.iter().map(|r| r.cost)),
            mean_nfe: mean(chunk.iter().map(|r| r.nfe)),
        })
        .collect();
    let (best, ranking) = select_config(&aggregates, plan.weights)?;
    let ranks = ranking.ranks();
    let candidates = aggregates
        .into_iter()
        .zip(rows.chunks(reps))
        .enumerate()
        .map(|(id, (agg, chunk))| Candidate {
            config_id: id,
            config: agg.config,
            mean_cost: agg.mean_cost,
            mean_nfe: agg.mean_nfe,
            min_cost: chunk.iter().map(|r| r.cost).min().unwrap_or(0),
            max_cost: chunk.iter().map(|r| r.cost).max().unwrap_or(0),
            closeness: ranking.closeness[id],
            rank: ranks[id],
        })
        .collect();
    let chosen = configs[best].clone();
    log::info!("{algorithm} at n={n}: chose config {best} ({})", chosen.describe());
    let report = TuningReport {
        algorithm,
        n,
        source: ConfigSource::Tuned,
        design: Some(design),
        candidates,
        chosen_id: Some(best),
        chosen,
        warnings: Vec::new(),
    };
    Ok((report, rows))
}

/// A tuning report that simply adopts the published configuration.
pub fn published_choice(algorithm: Algorithm, n: usize) -> Result<TuningReport, HarnessError> {
    let chosen = published_config(algorithm, n).ok_or(HarnessError::NoPublishedConfig { algorithm, n })?;
    let warnings = grid_warnings(&chosen);
    for w in &warnings {
        log::warn!("n={n}: {w}");
    }
    Ok(TuningReport {
        algorithm,
        n,
        source: ConfigSource::Published,
        design: None,
        candidates: Vec::new(),
        chosen_id: None,
        chosen,
        warnings,
    })
}

fn fresh_runs(
    plan: &ExperimentPlan,
    choice: &TuningReport,
    phase: Phase,
    replications: u32,
    workers: usize,
) -> Result<(Vec<RunRow>, Vec<SummaryRow>), HarnessError> {
    let trials: Vec<Trial> = (0..replications)
        .map(|rep| Trial::new(plan, choice.n, phase, choice.chosen_id, rep, &choice.chosen))
        .collect();
    log::info!("{phase} runs for {} at n={}: {replications}", choice.algorithm, choice.n);
    let rows = execute(&trials, plan.nfe_cap, workers)?;
    let summary = aggregate(&rows)?;
    Ok((rows, summary))
}

/// `validation_replications` fresh runs of the chosen configuration.
pub fn run_validation_phase(
    plan: &ExperimentPlan,
    choice: &TuningReport,
    workers: usize,
) -> Result<(Vec<RunRow>, Vec<SummaryRow>), HarnessError> {
    fresh_runs(plan, choice, Phase::Validation, plan.validation_replications, workers)
}

/// `final_replications` fresh runs of the chosen configuration; these feed
/// the reported min/avg/max tables.
pub fn run_final_phase(
    plan: &ExperimentPlan,
    choice: &TuningReport,
    workers: usize,
) -> Result<(Vec<RunRow>, Vec<SummaryRow>), HarnessError> {
    fresh_runs(plan, choice, Phase::Final, plan.final_replications, workers)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Cost,
    Nfe,
}

impl Metric {
    pub fn label(self) -> &'static str {
        match self {
            Metric::Cost => "Cost",
            Metric::Nfe => "NFE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub algorithm: Algorithm,
    pub n: usize,
    pub phase: Phase,
    pub metric: Metric,
    pub min: u64,
    pub avg: f64,
    pub max: u64,
    pub replications: usize,
}

fn mean(values: impl Iterator<Item = u64>) -> f64 {
    let (sum, count) = values.fold((0u128, 0u64), |(s, c), v| (s + v as u128, c + 1));
    sum as f64 / count as f64
}

/// Min/avg/max of cost and NFE over runs of one (algorithm, size, phase).
pub fn aggregate(records: &[RunRow]) -> Result<Vec<SummaryRow>, HarnessError> {
    let first = records.first().ok_or_else(|| HarnessError::Aggregate("no records".into()))?;
    if let Some(r) = records.iter().find(|r| (r.algorithm, r.n, r.phase) != (first.algorithm, first.n, first.phase)) {
        return Err(HarnessError::Aggregate(format!(
            "mixed records: {} n={} {} and {} n={} {}",
            first.algorithm, first.n, first.phase, r.algorithm, r.n, r.phase
        )));
    }
    let row = |metric, get: fn(&RunRow) -> u64| SummaryRow {
        algorithm: first.algorithm,
        n: first.n,
        phase: first.phase,
        metric,
        min: records.iter().map(get).min().unwrap(),
        avg: mean(records.iter().map(get)),
        max: records.iter().map(get).max().unwrap(),
        replications: records.len(),
    };
    Ok(vec![row(Metric::Cost, |r| r.cost), row(Metric::Nfe, |r| r.nfe)])
}

/// Summaries of every (algorithm, size) group of `phase` in `records`, in
/// report order.
pub fn summarize(records: &[RunRow], phase: Phase) -> Vec<SummaryRow> {
    let mut groups: std::collections::BTreeMap<(Algorithm, usize), Vec<RunRow>> = Default::default();
    for r in records.iter().filter(|r| r.phase == phase) {
        groups.entry((r.algorithm, r.n)).or_default().push(r.clone());
    }
    groups.values().flat_map(|g| aggregate(g).expect("non-empty homogeneous group")).collect()
}
