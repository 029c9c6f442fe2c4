//! Generational GA with elitist survival, binary tournaments, single-point
//! crossover and per-gene mutation at rate 1/N.

use rand::Rng;

use super::{GaConfig, Halt, Search, StopState};
use crate::problem::{random_columns, Cost, InitMethod};

#[derive(Clone)]
struct Individual {
    genes: Vec<usize>,
    cost: Cost,
}

/// Number of individuals carried over unchanged each generation.
pub(crate) fn elite_count(pop_size: usize, survival_rate: f64) -> usize {
    ((survival_rate * pop_size as f64).ceil() as usize).clamp(1, pop_size)
}

fn tournament<'p, R: Rng + ?Sized>(pop: &'p [Individual], rng: &mut R) -> &'p Individual {
    let a = &pop[rng.gen_range(0..pop.len())];
    let b = &pop[rng.gen_range(0..pop.len())];
    if b.cost < a.cost {
        b
    } else {
        a
    }
}

pub fn run_ga(n: usize, cfg: &GaConfig, s: &mut Search) -> Result<(), Halt> {
    let mut pop = Vec::with_capacity(cfg.pop_size);
    for _ in 0..cfg.pop_size {
        let genes = random_columns(n, InitMethod::UniformColumns, &mut s.rng);
        let cost = s.eval(&genes)?;
        pop.push(Individual { genes, cost });
    }
    // Stable sort: equal costs keep their previous order, so incumbents win ties.
    pop.sort_by_key(|ind| ind.cost);
    s.step(0, pop[0].cost, pop.len());

    let elites = elite_count(cfg.pop_size, cfg.survival_rate);
    let mutation_rate = 1.0 / n as f64;
    let mut stop = StopState::new(pop[0].cost, cfg.max_stall);
    let mut next: Vec<Individual> = Vec::with_capacity(cfg.pop_size);

    while !stop.stalled() {
        next.clear();
        next.extend(pop[..elites].iter().cloned());
        while next.len() < cfg.pop_size {
            let first = tournament(&pop, &mut s.rng);
            let second = tournament(&pop, &mut s.rng);
            let mut genes = first.genes.clone();
            if n > 1 && s.rng.gen_bool(cfg.crossover_prob) {
                let cut = s.rng.gen_range(1..n);
                genes[cut..].copy_from_slice(&second.genes[cut..]);
            }
            for g in genes.iter_mut() {
                if s.rng.gen_bool(mutation_rate) {
                    *g = s.rng.gen_range(0..n);
                }
            }
            let cost = s.eval(&genes)?;
            next.push(Individual { genes, cost });
        }
        std::mem::swap(&mut pop, &mut next);
        pop.sort_by_key(|ind| ind.cost);
        stop.observe(pop[0].cost);
        s.step(0, pop[0].cost, pop.len());
    }
    Ok(())
}
