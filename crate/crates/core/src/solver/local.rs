//! Single-solution methods: LS, ILS and MLS.

use rand::Rng;
use super::{Halt, IlsConfig, LsConfig, MlsConfig, Search, StopState};
use crate::problem::{perturb_in_place, random_columns, Cost, InitMethod};

/// Moves one random row to a different random column. Returns the undo
/// information `(row, previous column)`.
fn reassign_one_row<R: Rng + ?Sized>(columns: &mut [usize], rng: &mut R) -> (usize, usize) {
    let n = columns.len();
    let row = rng.gen_range(0..n);
    let old = columns[row];
    if n > 1 {
        // Uniform over the n - 1 other columns.
        let mut col = rng.gen_range(0..n - 1);
        if col >= old {
            col += 1;
        }
        columns[row] = col;
    }
    (row, old)
}

/// Plain local search: each iteration scores one `perturb(current, radius)`
/// neighbour and keeps it only if strictly better.
pub fn run_ls(n: usize, cfg: &LsConfig, s: &mut Search) -> Result<(), Halt> {
    let mut current = random_columns(n, InitMethod::UniformColumns, &mut s.rng);
    let mut current_cost = s.eval(&current)?;
    s.step(0, current_cost, 1);

    let mut stop = StopState::new(current_cost, cfg.max_stall);
    let mut candidate = current.to_vec();
    while !stop.stalled() {
        candidate.copy_from_slice(&current);
        perturb_in_place(&mut candidate, cfg.radius, &mut s.rng);
        let cost = s.eval(&candidate)?;
        if cost < current_cost {
            std::mem::swap(&mut current, &mut candidate);
            current_cost = cost;
        }
        stop.observe(current_cost);
        s.step(0, current_cost, 1);
    }
    Ok(())
}

/// First-improvement descent over single-row reassignments, in place.
fn first_improvement(
    current: &mut [usize],
    mut current_cost: Cost,
    params: &DescentParams,
    phase: u32,
    s: &mut Search,
) -> Result<Cost, Halt> {
    let mut stop = StopState::new(current_cost, params.max_stall);
    while !stop.stalled() {
        let (row, old) = reassign_one_row(current, &mut s.rng);
        let cost = s.eval(current)?;
        if cost < current_cost {
            current_cost = cost;
        } else {
            current[row] = old;
        }
        stop.observe(current_cost);
        s.step(phase, current_cost, 1);
    }
    Ok(current_cost)
}

/// Steepest descent over a sampled neighbourhood: each step scores `n`
/// independent `perturb(current, radius)` neighbours and moves to the best
/// one if it is strictly better, in place.
fn sampled_steepest_descent(
    current: &mut [usize],
    mut current_cost: Cost,
    params: &DescentParams,
    phase: u32,
    s: &mut Search,
) -> Result<Cost, Halt> {
    let n = current.len();
    let mut stop = StopState::new(current_cost, params.max_stall);
    let mut candidate = current.to_vec();
    let mut step_best = current.to_vec();
    while !stop.stalled() {
        let mut step_best_cost = None;
        for _ in 0..n {
            candidate.copy_from_slice(current);
            perturb_in_place(&mut candidate, params.radius, &mut s.rng);
            let cost = s.eval(&candidate)?;
            if step_best_cost.is_none_or(|c| cost < c) {
                step_best_cost = Some(cost);
                step_best.copy_from_slice(&candidate);
            }
        }
        if let Some(cost) = step_best_cost.filter(|&c| c < current_cost) {
            current.copy_from_slice(&step_best);
            current_cost = cost;
        }
        stop.observe(current_cost);
        s.step(phase, current_cost, 1);
    }
    Ok(current_cost)
}

struct DescentParams {
    radius: f64,
    max_stall: u32,
}

type Descent = fn(&mut [usize], Cost, &DescentParams, u32, &mut Search) -> Result<Cost, Halt>;

/// Shared restart loop: kick the incumbent with `perturb(radius)`, descend,
/// keep the result if strictly better.
fn restart_loop(
    mut incumbent: Vec<usize>,
    mut incumbent_cost: Cost,
    radius: f64,
    max_stall: u32,
    restarts: u32,
    descend: Descent,
    s: &mut Search,
) -> Result<(), Halt> {
    let params = DescentParams { radius, max_stall };
    let mut start = incumbent.clone();
    for phase in 0..restarts {
        start.copy_from_slice(&incumbent);
        perturb_in_place(&mut start, radius, &mut s.rng);
        let start_cost = s.eval(&start)?;
        s.step(phase, start_cost, 1);
        let cost = descend(&mut start, start_cost, &params, phase, s)?;
        if cost < incumbent_cost {
            incumbent.copy_from_slice(&start);
            incumbent_cost = cost;
        }
    }
    Ok(())
}

/// Iterated local search: `n_restarts` rounds of kick plus first-improvement
/// descent, starting from the configured initial generator.
pub fn run_ils(n: usize, cfg: &IlsConfig, s: &mut Search) -> Result<(), Halt> {
    let initial = random_columns(n, cfg.init_method, &mut s.rng);
    let cost = s.eval(&initial)?;
    restart_loop(initial, cost, cfg.radius, cfg.max_stall, cfg.n_restarts, first_improvement, s)
}

/// Memetic-style local search: the ILS loop with a sampled steepest-descent
/// improvement phase and uniform-column initialisation.
pub fn run_mls(n: usize, cfg: &MlsConfig, s: &mut Search) -> Result<(), Halt> {
    let initial = random_columns(n, InitMethod::UniformColumns, &mut s.rng);
    let cost = s.eval(&initial)?;
    restart_loop(initial, cost, cfg.radius, cfg.max_stall, cfg.n_restarts, sampled_steepest_descent, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{solve, AlgorithmConfig};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reassign_always_changes_the_row() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut cols = vec![0, 1, 2, 3];
        for _ in 0..1000 {
            let before = cols.clone();
            let (row, old) = reassign_one_row(&mut cols, &mut rng);
            assert_eq!(before[row], old);
            assert_ne!(cols[row], old);
            assert!(cols[row] < 4);
        }
    }

    #[test]
    fn ls_two_queens_reaches_global_minimum() {
        let cfg = AlgorithmConfig::Ls(LsConfig { max_stall: 150, radius: 0.8 });
        for seed in 0..20 {
            assert_eq!(solve(2, &cfg, seed, 1_000_000).unwrap().cost, 1);
        }
    }

    #[test]
    fn ils_and_mls_two_queens() {
        let ils = AlgorithmConfig::Ils(IlsConfig {
            init_method: InitMethod::RandomPermutation,
            max_stall: 30,
            radius: 0.5,
            n_restarts: 5,
        });
        let mls = AlgorithmConfig::Mls(MlsConfig { max_stall: 30, radius: 0.5, n_restarts: 5 });
        for seed in 0..20 {
            assert_eq!(solve(2, &ils, seed, 1_000_000).unwrap().cost, 1);
            assert_eq!(solve(2, &mls, seed, 1_000_000).unwrap().cost, 1);
        }
    }

    #[test]
    fn single_queen_is_solved_immediately() {
        for cfg in [
            AlgorithmConfig::Ls(LsConfig { max_stall: 30, radius: 1.0 }),
            AlgorithmConfig::Mls(MlsConfig { max_stall: 30, radius: 1.0, n_restarts: 1 }),
        ] {
            let r = solve(1, &cfg, 9, 1_000_000).unwrap();
            assert_eq!((r.cost, r.nfe), (0, 1));
        }
    }

    #[test]
    fn ls_nfe_is_one_plus_iterations() {
        let cfg = AlgorithmConfig::Ls(LsConfig { max_stall: 30, radius: 0.5 });
        let r = solve(20, &cfg, 3, 1_000_000).unwrap();
        assert_eq!(r.nfe, r.iterations);
        assert!(r.nfe >= 31);
    }
}
