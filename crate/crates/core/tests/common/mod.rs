#![allow(dead_code)]

use queens_bench::problem::{ClashCounter, Cost, Objective};
use queens_bench::solver::{solve_with, Algorithm, AlgorithmConfig, SolveOptions};
use queens_bench::tuning::FactorGrid;

/// Counts every call that reaches the objective.
#[derive(Default)]
pub struct Counting {
    inner: ClashCounter,
    pub calls: u64,
}

impl Objective for Counting {
    fn cost(&mut self, columns: &[usize]) -> Cost {
        self.calls += 1;
        self.inner.cost(columns)
    }
}

/// A configuration drawn from the tuning grid; `picks[i]` selects the level
/// of factor `i` modulo its level count.
pub fn grid_config(algorithm: Algorithm, picks: &[usize]) -> AlgorithmConfig {
    let grid = FactorGrid::for_algorithm(algorithm);
    let levels: Vec<usize> = grid.factors.iter().zip(picks).map(|(f, &p)| p % f.levels.len()).collect();
    grid.config_at(&levels).expect("grid levels form a valid config")
}

fn expected_population(config: &AlgorithmConfig) -> usize {
    match config {
        AlgorithmConfig::Brado(c) => c.p0,
        AlgorithmConfig::Ga(c) => c.pop_size,
        AlgorithmConfig::Ica(c) => c.pop_size,
        AlgorithmConfig::Pso(c) => c.pop_size,
        _ => 1,
    }
}

/// Runs one solve with a trace and checks NFE exactness, monotone best,
/// the stall bound and population conservation.
pub fn check_run(n: usize, config: &AlgorithmConfig, seed: u64, nfe_cap: u64) -> Result<(), String> {
    let mut objective = Counting::default();
    let opts = SolveOptions { nfe_cap, keep_trace: true };
    let out = solve_with(n, config, seed, &opts, &mut objective).map_err(|e| e.to_string())?;
    let r = &out.record;
    let ctx = format!("{} seed {seed}", config.describe());

    if objective.calls != r.nfe {
        return Err(format!("{ctx}: objective saw {} calls, record says {}", objective.calls, r.nfe));
    }
    if r.nfe > nfe_cap || (r.capped && r.nfe != nfe_cap) {
        return Err(format!("{ctx}: nfe {} against cap {nfe_cap} (capped {})", r.nfe, r.capped));
    }
    if r.iterations != out.trace.len() as u64 {
        return Err(format!("{ctx}: {} iterations but {} trace steps", r.iterations, out.trace.len()));
    }
    let mut check = ClashCounter::new();
    if check.cost(r.best.columns()) != r.cost {
        return Err(format!("{ctx}: reported cost {} does not match the reported placement", r.cost));
    }

    let mut previous_best = Cost::MAX;
    for (i, step) in out.trace.iter().enumerate() {
        if step.best > previous_best {
            return Err(format!("{ctx}: best rose from {previous_best} to {} at step {i}", step.best));
        }
        if step.best > step.incumbent {
            return Err(format!("{ctx}: best {} above incumbent {} at step {i}", step.best, step.incumbent));
        }
        previous_best = step.best;
    }
    if let Some(last) = out.trace.last() {
        if r.cost > last.best {
            return Err(format!("{ctx}: final cost {} above traced best {}", r.cost, last.best));
        }
    }

    let max_stall = config.max_stall() as usize;
    let phases = out.trace.chunk_by(|a, b| a.phase == b.phase).collect::<Vec<_>>();
    for (k, steps) in phases.iter().enumerate() {
        let mut best = steps[0].incumbent;
        let mut stall = 0;
        for s in &steps[1..] {
            if s.incumbent < best {
                best = s.incumbent;
                stall = 0;
            } else {
                stall += 1;
                if stall > max_stall {
                    return Err(format!("{ctx}: phase {} ran {stall} steps without improvement", s.phase));
                }
            }
        }
        let finished = k + 1 < phases.len() || (r.cost > 0 && !r.capped);
        if finished && stall != max_stall {
            return Err(format!("{ctx}: phase {} stopped after {stall} idle steps, expected {max_stall}", steps[0].phase));
        }
    }

    let population = expected_population(config);
    if let Some(s) = out.trace.iter().find(|s| s.population != population) {
        return Err(format!("{ctx}: population {} at phase {}, expected {population}", s.population, s.phase));
    }
    Ok(())
}

/// A CSV file with the `elapsed_ms` column removed.
pub fn without_elapsed(path: &std::path::Path) -> String {
    let text = std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().expect("header").split(',').collect();
    let skip = header.iter().position(|&h| h == "elapsed_ms").expect("elapsed_ms column");
    std::iter::once(header.join(","))
        .chain(lines.map(|l| l.split(',').enumerate().filter(|&(i, _)| i != skip).map(|(_, f)| f).collect::<Vec<_>>().join(",")))
        .map(|l| l + "\n")
        .collect()
}
