//! Imperialist competitive algorithm on continuous vectors.
//!
//! Countries live in `[0, n-1]^n` and are scored through the rounding
//! decoder. The best `n_imperialists` countries found empires; colonies are
//! shared out in proportion to normalised imperialist power. Each iteration
//! a colony is pulled towards its imperialist and, with probability
//! `revolution_rate`, has one coordinate redrawn uniformly.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Halt, IcaConfig, Search, StopState};
use crate::problem::{decode_into, Cost};

#[derive(Debug, Clone)]
struct Empire {
    imperialist: usize,
    colonies: Vec<usize>,
}

/// Splits `total` colonies proportionally to `weights` using the largest
/// remainder method (ties go to the lower index). Equal shares when every
/// weight is zero.
pub(crate) fn apportion(weights: &[f64], total: usize) -> Vec<usize> {
    let k = weights.len();
    let sum: f64 = weights.iter().sum();
    let shares: Vec<f64> = if sum > 0.0 {
        weights.iter().map(|w| w / sum * total as f64).collect()
    } else {
        vec![total as f64 / k as f64; k]
    };
    let mut counts: Vec<usize> = shares.iter().map(|s| s.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        let fa = shares[a] - shares[a].floor();
        let fb = shares[b] - shares[b].floor();
        fb.partial_cmp(&fa).unwrap().then(a.cmp(&b))
    });
    for &i in order.iter().cycle().take(total.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Roulette over `weights`; uniform when they are all zero.
fn roulette<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let sum: f64 = weights.iter().sum();
    if sum <= 0.0 {
        return rng.gen_range(0..weights.len());
    }
    let mut r = rng.gen::<f64>() * sum;
    for (i, &w) in weights.iter().enumerate() {
        if r < w {
            return i;
        }
        r -= w;
    }
    weights.iter().rposition(|&w| w > 0.0).unwrap()
}

struct World {
    position: Vec<Vec<f64>>,
    cost: Vec<Cost>,
    empires: Vec<Empire>,
}

impl World {
    fn total_cost(&self, e: &Empire, zeta: f64) -> f64 {
        let imp = self.cost[e.imperialist] as f64;
        if e.colonies.is_empty() {
            return imp;
        }
        let mean = e.colonies.iter().map(|&c| self.cost[c] as f64).sum::<f64>() / e.colonies.len() as f64;
        imp + zeta * mean
    }

    fn population(&self) -> usize {
        self.empires.iter().map(|e| 1 + e.colonies.len()).sum()
    }

    /// Merges empires whose imperialists are closer than `radius`; the
    /// empire with the better imperialist absorbs the other.
    fn unite(&mut self, radius: f64) {
        'scan: loop {
            for i in 0..self.empires.len() {
                for j in i + 1..self.empires.len() {
                    let (a, b) = (self.empires[i].imperialist, self.empires[j].imperialist);
                    if distance(&self.position[a], &self.position[b]) < radius {
                        let (keep, gone) = if self.cost[b] < self.cost[a] { (j, i) } else { (i, j) };
                        let absorbed = self.empires[gone].clone();
                        self.empires[keep].colonies.push(absorbed.imperialist);
                        self.empires[keep].colonies.extend(absorbed.colonies);
                        self.empires.remove(gone);
                        continue 'scan;
                    }
                }
            }
            break;
        }
    }

    /// Moves the weakest colony of the weakest empire to a roulette-chosen
    /// rival; an empire left without colonies collapses into that rival.
    fn compete<R: Rng + ?Sized>(&mut self, zeta: f64, rng: &mut R) {
        if self.empires.len() < 2 {
            return;
        }
        let totals: Vec<f64> = self.empires.iter().map(|e| self.total_cost(e, zeta)).collect();
        let mut weakest = 0;
        for (i, &t) in totals.iter().enumerate() {
            if t > totals[weakest] {
                weakest = i;
            }
        }
        let worst_total = totals[weakest];
        let rivals: Vec<usize> = (0..self.empires.len()).filter(|&i| i != weakest).collect();
        let weights: Vec<f64> = rivals.iter().map(|&i| worst_total - totals[i]).collect();
        let receiver = rivals[roulette(&weights, rng)];

        let cost = &self.cost;
        let colonies = &mut self.empires[weakest].colonies;
        if let Some(pos) = (0..colonies.len()).rev().max_by_key(|&k| cost[colonies[k]]) {
            let moved = colonies.remove(pos);
            self.empires[receiver].colonies.push(moved);
        }
        if self.empires[weakest].colonies.is_empty() {
            let imp = self.empires[weakest].imperialist;
            self.empires[receiver].colonies.push(imp);
            self.empires.remove(weakest);
        }
    }
}

pub fn run_ica(n: usize, cfg: &IcaConfig, s: &mut Search) -> Result<(), Halt> {
    let top = (n - 1) as f64;
    let mut decoded = Vec::with_capacity(n);

    let position: Vec<Vec<f64>> = (0..cfg.pop_size)
        .map(|_| (0..n).map(|_| s.rng.gen_range(0.0..=top)).collect())
        .collect();
    let mut cost = Vec::with_capacity(cfg.pop_size);
    for x in &position {
        decode_into(x, &mut decoded);
        cost.push(s.eval(&decoded)?);
    }

    let mut order: Vec<usize> = (0..cfg.pop_size).collect();
    order.sort_by_key(|&i| cost[i]);
    let (imperialists, colonies) = order.split_at(cfg.n_imperialists);
    let worst_imp = imperialists.iter().map(|&i| cost[i]).max().unwrap() as f64;
    let power: Vec<f64> = imperialists.iter().map(|&i| worst_imp - cost[i] as f64).collect();
    let counts = apportion(&power, colonies.len());
    let mut pool = colonies.to_vec();
    pool.shuffle(&mut s.rng);
    let mut next = pool.into_iter();
    let empires = imperialists
        .iter()
        .zip(&counts)
        .map(|(&imp, &k)| Empire { imperialist: imp, colonies: next.by_ref().take(k).collect() })
        .collect();

    let mut world = World { position, cost, empires };
    let unite_radius = cfg.uniting_threshold * top * (n as f64).sqrt();

    let mut stop = StopState::new(s.best_cost().unwrap(), cfg.max_stall);
    s.step(0, stop.best_so_far, world.population());
    while !stop.stalled() {
        for e in 0..world.empires.len() {
            let imp = world.empires[e].imperialist;
            for k in 0..world.empires[e].colonies.len() {
                let c = world.empires[e].colonies[k];
                let (target, colony) = split_pair(&mut world.position, imp, c);
                for (x, &t) in colony.iter_mut().zip(target.iter()) {
                    let step = cfg.assimilation_coeff * s.rng.gen::<f64>() * (t - *x);
                    *x = (*x + step).clamp(0.0, top);
                }
                // Revolution: one coordinate jumps to a uniform value.
                if s.rng.gen_bool(cfg.revolution_rate) {
                    let d = s.rng.gen_range(0..n);
                    colony[d] = s.rng.gen_range(0.0..=top);
                }
                decode_into(&world.position[c], &mut decoded);
                world.cost[c] = s.eval(&decoded)?;
            }
            // The strongest colony takes over if it beats its imperialist.
            let empire = &mut world.empires[e];
            if let Some(k) = (0..empire.colonies.len()).min_by_key(|&k| world.cost[empire.colonies[k]]) {
                let c = empire.colonies[k];
                if world.cost[c] < world.cost[empire.imperialist] {
                    empire.colonies[k] = empire.imperialist;
                    empire.imperialist = c;
                }
            }
        }
        world.unite(unite_radius);
        world.compete(cfg.zeta, &mut s.rng);

        let best = s.best_cost().unwrap();
        stop.observe(best);
        s.step(0, best, world.population());
    }
    Ok(())
}

/// Borrows row `a` immutably and row `b` mutably (`a != b`).
fn split_pair(rows: &mut [Vec<f64>], a: usize, b: usize) -> (&[f64], &mut [f64]) {
    debug_assert_ne!(a, b);
    if a < b {
        let (lo, hi) = rows.split_at_mut(b);
        (&lo[a], &mut hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(a);
        (&hi[0], &mut lo[b])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn apportion_sums_to_total() {
        assert_eq!(apportion(&[3.0, 1.0, 0.0], 8), vec![6, 2, 0]);
        assert_eq!(apportion(&[0.0, 0.0, 0.0], 7), vec![3, 2, 2]);
        assert_eq!(apportion(&[1.0, 1.0, 1.0], 2), vec![1, 1, 0]);
        for total in 0..40 {
            let c = apportion(&[5.0, 2.5, 1.0, 0.3, 0.0], total);
            assert_eq!(c.iter().sum::<usize>(), total);
        }
    }

    #[test]
    fn one_colony_per_empire_when_imperialists_fill_the_population() {
        // pop_size - 1 imperialists leave a single colony.
        let c = apportion(&[4.0, 3.0, 2.0, 1.0, 0.0], 1);
        assert_eq!(c.iter().sum::<usize>(), 1);
        assert!(c.iter().all(|&k| k <= 1));
    }

    #[test]
    fn roulette_never_picks_zero_weight() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            assert_ne!(roulette(&[1.0, 0.0, 2.0], &mut rng), 1);
        }
        let picks: Vec<usize> = (0..100).map(|_| roulette(&[0.0, 0.0], &mut rng)).collect();
        assert!(picks.contains(&0) && picks.contains(&1));
    }

    #[test]
    fn split_pair_both_orders() {
        let mut rows = vec![vec![0.0], vec![1.0], vec![2.0]];
        let (a, b) = split_pair(&mut rows, 2, 0);
        assert_eq!(a, &[2.0]);
        b[0] = 9.0;
        let (a, b) = split_pair(&mut rows, 0, 1);
        assert_eq!(a, &[9.0]);
        assert_eq!(b, &[1.0]);
    }

    fn world(costs: &[Cost], empires: Vec<Empire>) -> World {
        World {
            position: costs.iter().map(|&c| vec![c as f64 * 10.0]).collect(),
            cost: costs.to_vec(),
            empires,
        }
    }

    #[test]
    fn compete_conserves_population_and_collapses_empty_empires() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut w = world(
            &[1, 2, 9, 8, 3],
            vec![
                Empire { imperialist: 0, colonies: vec![4, 1] },
                Empire { imperialist: 3, colonies: vec![2] },
            ],
        );
        w.compete(0.1, &mut rng);
        assert_eq!(w.population(), 5);
        // The weakest empire lost its only colony and then collapsed.
        assert_eq!(w.empires.len(), 1);
        let mut members = w.empires[0].colonies.clone();
        members.sort_unstable();
        assert_eq!(members, vec![1, 2, 3, 4]);
    }

    #[test]
    fn unite_merges_close_imperialists() {
        let mut w = world(
            &[1, 2, 5],
            vec![
                Empire { imperialist: 0, colonies: vec![] },
                Empire { imperialist: 1, colonies: vec![2] },
            ],
        );
        w.unite(11.0);
        assert_eq!(w.empires.len(), 1);
        assert_eq!(w.empires[0].imperialist, 0);
        assert_eq!(w.population(), 3);
        let mut far = world(
            &[1, 2],
            vec![Empire { imperialist: 0, colonies: vec![] }, Empire { imperialist: 1, colonies: vec![] }],
        );
        far.unite(5.0);
        assert_eq!(far.empires.len(), 2);
    }
}
