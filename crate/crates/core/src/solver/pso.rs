//! Global-best PSO on `[0, n-1]^n`, scored through the rounding decoder.

use rand::Rng;

use super::{Halt, PsoConfig, Search, StopState};
use crate::problem::{decode_into, Cost};

/// Constant inertia weight.
pub const INERTIA: f64 = 0.7;

pub fn run_pso(n: usize, cfg: &PsoConfig, s: &mut Search) -> Result<(), Halt> {
    let top = (n - 1) as f64;
    let vmax = top / 2.0;

    let mut position: Vec<Vec<f64>> = (0..cfg.pop_size)
        .map(|_| (0..n).map(|_| s.rng.gen_range(0.0..=top)).collect())
        .collect();
    let mut velocity = vec![vec![0.0; n]; cfg.pop_size];
    let mut decoded = Vec::with_capacity(n);

    let mut pbest = position.clone();
    let mut pbest_cost: Vec<Cost> = Vec::with_capacity(cfg.pop_size);
    for x in &position {
        decode_into(x, &mut decoded);
        pbest_cost.push(s.eval(&decoded)?);
    }
    let g = argmin(&pbest_cost);
    let mut gbest = pbest[g].clone();
    let mut gbest_cost = pbest_cost[g];
    s.step(0, gbest_cost, cfg.pop_size);

    let mut stop = StopState::new(gbest_cost, cfg.max_stall);
    while !stop.stalled() {
        for i in 0..cfg.pop_size {
            let (x, v) = (&mut position[i], &mut velocity[i]);
            for d in 0..n {
                let r1: f64 = s.rng.gen();
                let r2: f64 = s.rng.gen();
                let nv = INERTIA * v[d]
                    + cfg.c_cognitive * r1 * (pbest[i][d] - x[d])
                    + cfg.c_social * r2 * (gbest[d] - x[d]);
                v[d] = nv.clamp(-vmax, vmax);
                x[d] = (x[d] + v[d]).clamp(0.0, top);
            }
            decode_into(x, &mut decoded);
            let cost = s.eval(&decoded)?;
            if cost < pbest_cost[i] {
                pbest_cost[i] = cost;
                pbest[i].copy_from_slice(x);
                if cost < gbest_cost {
                    gbest_cost = cost;
                    gbest.copy_from_slice(x);
                }
            }
        }
        stop.observe(gbest_cost);
        s.step(0, gbest_cost, cfg.pop_size);
    }
    Ok(())
}

/// First index of the minimum.
pub(crate) fn argmin(costs: &[Cost]) -> usize {
    let mut best = 0;
    for (i, &c) in costs.iter().enumerate() {
        if c < costs[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argmin_prefers_first() {
        assert_eq!(argmin(&[3, 1, 1, 2]), 1);
        assert_eq!(argmin(&[5]), 0);
    }
}
