//! The seven solvers behind one entry point.
//!
//! Every solver sees fitness only through [`Search::eval`], which owns the
//! NFE counter, the safety cap and the global best. That keeps the reported
//! NFE exact and the reported best monotone regardless of what the
//! individual algorithm does with its own population.

mod brado;
mod config;
mod ga;
mod ica;
mod local;
mod pso;

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::problem::{ClashCounter, Cost, Objective, Placement};

pub use brado::{run_brado, CountryGraph};
pub use config::{
    Algorithm, AlgorithmConfig, BradoConfig, GaConfig, IcaConfig, IlsConfig, LsConfig, MlsConfig,
    PsoConfig,
};
pub use ga::run_ga;
pub use ica::run_ica;
pub use local::{run_ils, run_ls, run_mls};
pub use pso::run_pso;

/// Safety ceiling on evaluations per run.
pub const DEFAULT_NFE_CAP: u64 = 1_000_000;

pub type Rng = ChaCha8Rng;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("board size must be at least 1")]
    EmptyBoard,
    #[error("invalid {algorithm} configuration: {reason}")]
    InvalidConfig { algorithm: Algorithm, reason: String },
}

/// Why a search stopped before its own loop finished.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Halt {
    /// An evaluation returned cost 0.
    Solved,
    /// The NFE cap was reached; no further evaluation is allowed.
    Capped,
}

/// One completed outer iteration as seen by the stall rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    /// Restart index for ILS/MLS, always 0 otherwise. The stall counter is
    /// reset at each phase boundary.
    pub phase: u32,
    /// The cost the stall rule watches: the current solution for the
    /// single-solution methods, the population best otherwise.
    pub incumbent: Cost,
    /// Best cost seen so far in the whole run.
    pub best: Cost,
    /// Number of live solutions (agents, colonies plus imperialists, ...).
    pub population: usize,
}

/// Strict-improvement stall counter.
#[derive(Debug, Clone)]
pub struct StopState {
    pub best_so_far: Cost,
    pub stall_counter: u32,
    pub max_stall: u32,
}

impl StopState {
    pub fn new(initial: Cost, max_stall: u32) -> Self {
        Self { best_so_far: initial, stall_counter: 0, max_stall }
    }

    /// Records the cost reached by one iteration; returns true on strict
    /// improvement.
    pub fn observe(&mut self, cost: Cost) -> bool {
        if cost < self.best_so_far {
            self.best_so_far = cost;
            self.stall_counter = 0;
            true
        } else {
            self.stall_counter += 1;
            false
        }
    }

    pub fn stalled(&self) -> bool {
        self.stall_counter >= self.max_stall
    }
}

/// Evaluation gateway and bookkeeping for one run.
pub struct Search<'o> {
    objective: &'o mut dyn Objective,
    pub rng: Rng,
    nfe: u64,
    nfe_cap: u64,
    best: Option<(Cost, Vec<usize>)>,
    iterations: u64,
    trace: Option<Vec<TraceStep>>,
}

impl<'o> Search<'o> {
    pub fn new(objective: &'o mut dyn Objective, seed: u64, nfe_cap: u64, keep_trace: bool) -> Self {
        Self {
            objective,
            rng: Rng::seed_from_u64(seed),
            nfe: 0,
            nfe_cap,
            best: None,
            iterations: 0,
            trace: keep_trace.then(Vec::new),
        }
    }

    /// Scores `columns`, updating the NFE counter and the global best.
    ///
    /// Returns `Err(Halt::Solved)` once a zero-cost placement is scored and
    /// `Err(Halt::Capped)` instead of evaluating when the cap is reached.
    pub fn eval(&mut self, columns: &[usize]) -> Result<Cost, Halt> {
        if self.nfe >= self.nfe_cap {
            return Err(Halt::Capped);
        }
        let cost = self.objective.cost(columns);
        self.nfe += 1;
        match &mut self.best {
            Some((b, cols)) if cost < *b => {
                *b = cost;
                cols.clear();
                cols.extend_from_slice(columns);
            }
            None => self.best = Some((cost, columns.to_vec())),
            _ => {}
        }
        if cost == 0 {
            Err(Halt::Solved)
        } else {
            Ok(cost)
        }
    }

    pub fn best_cost(&self) -> Option<Cost> {
        self.best.as_ref().map(|(c, _)| *c)
    }

    pub fn best_columns(&self) -> Option<&[usize]> {
        self.best.as_ref().map(|(_, cols)| cols.as_slice())
    }

    pub fn nfe(&self) -> u64 {
        self.nfe
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    /// Closes one outer iteration.
    pub fn step(&mut self, phase: u32, incumbent: Cost, population: usize) {
        self.iterations += 1;
        let best = self.best_cost().unwrap_or(incumbent);
        if let Some(trace) = &mut self.trace {
            trace.push(TraceStep { phase, incumbent, best, population });
        }
    }

    fn take_trace(&mut self) -> Vec<TraceStep> {
        self.trace.take().unwrap_or_default()
    }
}

/// Result of one solver execution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: Algorithm,
    pub n: usize,
    pub seed: u64,
    pub best: Placement,
    pub cost: Cost,
    pub nfe: u64,
    pub iterations: u64,
    pub elapsed: Duration,
    /// The NFE cap stopped the run.
    pub capped: bool,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub nfe_cap: u64,
    pub keep_trace: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { nfe_cap: DEFAULT_NFE_CAP, keep_trace: false }
    }
}

#[derive(Debug, Clone)]
pub struct SolveOutput {
    pub record: RunRecord,
    pub trace: Vec<TraceStep>,
}

/// Runs `config` on an `n`-board with the clash cost.
pub fn solve(n: usize, config: &AlgorithmConfig, seed: u64, nfe_cap: u64) -> Result<RunRecord, SolverError> {
    let mut counter = ClashCounter::new();
    let opts = SolveOptions { nfe_cap, keep_trace: false };
    solve_with(n, config, seed, &opts, &mut counter).map(|out| out.record)
}

/// Like [`solve`] but scoring through a caller-supplied objective.
pub fn solve_with(
    n: usize,
    config: &AlgorithmConfig,
    seed: u64,
    opts: &SolveOptions,
    objective: &mut dyn Objective,
) -> Result<SolveOutput, SolverError> {
    if n == 0 {
        return Err(SolverError::EmptyBoard);
    }
    config.validate()?;
    let started = Instant::now();
    // At least one evaluation always happens so the record has a best.
    let mut search = Search::new(objective, seed, opts.nfe_cap.max(1), opts.keep_trace);
    let halt = match config {
        AlgorithmConfig::Brado(c) => run_brado(n, c, &mut search),
        AlgorithmConfig::Ga(c) => run_ga(n, c, &mut search),
        AlgorithmConfig::Ica(c) => run_ica(n, c, &mut search),
        AlgorithmConfig::Pso(c) => run_pso(n, c, &mut search),
        AlgorithmConfig::Ils(c) => run_ils(n, c, &mut search),
        AlgorithmConfig::Ls(c) => run_ls(n, c, &mut search),
        AlgorithmConfig::Mls(c) => run_mls(n, c, &mut search),
    };
    let elapsed = started.elapsed();
    let (cost, columns) = search.best.take().expect("every solver evaluates at least once");
    let record = RunRecord {
        algorithm: config.algorithm(),
        n,
        seed,
        best: Placement::from_trusted(columns),
        cost,
        nfe: search.nfe,
        iterations: search.iterations,
        elapsed,
        capped: matches!(halt, Err(Halt::Capped)),
    };
    Ok(SolveOutput { record, trace: search.take_trace() })
}
