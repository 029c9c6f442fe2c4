//! Brain drain optimisation.
//!
//! The population is split across countries that sit on the vertices of a
//! random Erdős–Rényi graph. Each iteration an agent moves one coordinate
//! towards its country's best agent and away from its worst, and reassigns
//! one random row; the move is kept unless it is worse. An agent that fails
//! to improve for `alpha` consecutive iterations emigrates to the
//! neighbouring country with the best mean cost, taking over the host's best
//! position when that is no worse than its own. One iteration later it goes
//! back home with probability `p_return`.

use rand::Rng;

use super::{BradoConfig, Halt, Search, StopState};
use crate::problem::{decode_into, Cost};

/// Undirected country graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountryGraph {
    adjacency: Vec<Vec<usize>>,
}

impl CountryGraph {
    /// Draws `G(countries, p)` until the graph is connected.
    ///
    /// # Panics
    /// If `countries > 1` and `p == 0`.
    pub fn sample_connected<R: Rng + ?Sized>(countries: usize, p: f64, rng: &mut R) -> Self {
        assert!(countries <= 1 || p > 0.0, "p = 0 never yields a connected graph");
        loop {
            let mut adjacency = vec![Vec::new(); countries];
            for a in 0..countries {
                for b in a + 1..countries {
                    if rng.gen_bool(p) {
                        adjacency[a].push(b);
                        adjacency[b].push(a);
                    }
                }
            }
            let g = Self { adjacency };
            if g.is_connected() {
                return g;
            }
        }
    }

    pub fn from_edges(countries: usize, edges: &[(usize, usize)]) -> Self {
        let mut adjacency = vec![Vec::new(); countries];
        for &(a, b) in edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
            adj.dedup();
        }
        Self { adjacency }
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn neighbors(&self, country: usize) -> &[usize] {
        &self.adjacency[country]
    }

    pub fn are_adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].contains(&b)
    }

    pub fn is_connected(&self) -> bool {
        if self.adjacency.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.adjacency.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

#[derive(Debug, Clone)]
struct Agent {
    position: Vec<f64>,
    cost: Cost,
    stagnation: u32,
    country: usize,
    /// Country left during the previous iteration, if the agent emigrated.
    origin: Option<usize>,
}

/// Per-country best and worst member positions at the start of an iteration.
struct Landmarks {
    best: Vec<Option<Vec<f64>>>,
    best_cost: Vec<Option<Cost>>,
    worst: Vec<Option<Vec<f64>>>,
}

impl Landmarks {
    fn best_with_cost(&self, country: usize) -> Option<(&[f64], Cost)> {
        Some((self.best[country].as_deref()?, self.best_cost[country]?))
    }
}

fn landmarks(agents: &[Agent], countries: usize) -> Landmarks {
    let mut best: Vec<Option<usize>> = vec![None; countries];
    let mut worst: Vec<Option<usize>> = vec![None; countries];
    for (i, a) in agents.iter().enumerate() {
        let c = a.country;
        if best[c].is_none_or(|b| a.cost < agents[b].cost) {
            best[c] = Some(i);
        }
        if worst[c].is_none_or(|w| a.cost > agents[w].cost) {
            worst[c] = Some(i);
        }
    }
    let pos = |slot: Option<usize>| slot.map(|i| agents[i].position.clone());
    Landmarks {
        best_cost: best.iter().map(|slot| slot.map(|i| agents[i].cost)).collect(),
        best: best.into_iter().map(pos).collect(),
        worst: worst.into_iter().map(pos).collect(),
    }
}

fn mean_costs(agents: &[Agent], countries: usize) -> Vec<Option<f64>> {
    let mut sum = vec![0.0; countries];
    let mut count = vec![0usize; countries];
    for a in agents {
        sum[a.country] += a.cost as f64;
        count[a.country] += 1;
    }
    sum.into_iter()
        .zip(count)
        .map(|(s, c)| (c > 0).then(|| s / c as f64))
        .collect()
}

/// Neighbour of `from` with the lowest mean cost; empty countries are
/// skipped and ties go to the lower index.
fn best_destination(graph: &CountryGraph, from: usize, means: &[Option<f64>]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for &c in graph.neighbors(from) {
        if let Some(m) = means[c] {
            if best.is_none_or(|(bc, bm)| m < bm || (m == bm && c < bc)) {
                best = Some((c, m));
            }
        }
    }
    best.map(|(c, _)| c)
}

/// Observer hooks used by tests to audit migrations.
pub(crate) trait MigrationLog {
    fn graph(&mut self, _graph: &CountryGraph) {}
    fn moved(&mut self, from: usize, to: usize, returning: bool);
}

impl MigrationLog for () {
    fn moved(&mut self, _: usize, _: usize, _: bool) {}
}

pub fn run_brado(n: usize, cfg: &BradoConfig, s: &mut Search) -> Result<(), Halt> {
    run_logged(n, cfg, s, &mut ())
}

pub(crate) fn run_logged(
    n: usize,
    cfg: &BradoConfig,
    s: &mut Search,
    log: &mut dyn MigrationLog,
) -> Result<(), Halt> {
    let top = (n - 1) as f64;
    let countries = cfg.n_countries;
    if countries == 1 {
        log::warn!("BRADO with a single country: migration disabled");
    }
    let graph = CountryGraph::sample_connected(countries, cfg.p_er, &mut s.rng);
    log.graph(&graph);

    let mut decoded = Vec::with_capacity(n);
    let mut agents = Vec::with_capacity(cfg.p0);
    for i in 0..cfg.p0 {
        let position: Vec<f64> = (0..n).map(|_| s.rng.gen_range(0.0..=top)).collect();
        decode_into(&position, &mut decoded);
        let cost = s.eval(&decoded)?;
        agents.push(Agent { position, cost, stagnation: 0, country: i % countries, origin: None });
    }
    let mut stop = StopState::new(s.best_cost().unwrap(), cfg.max_stall);
    s.step(0, stop.best_so_far, agents.len());

    let mut candidate = vec![0.0; n];
    while !stop.stalled() {
        // Emigrants from the previous iteration may go home.
        for a in agents.iter_mut() {
            if let Some(origin) = a.origin.take() {
                if s.rng.gen_bool(cfg.p_return) {
                    log.moved(a.country, origin, true);
                    a.country = origin;
                }
            }
        }

        let marks = landmarks(&agents, countries);
        for a in agents.iter_mut() {
            let best = marks.best[a.country].as_ref().expect("agent's own country is populated");
            let worst = marks.worst[a.country].as_ref().expect("agent's own country is populated");
            candidate.copy_from_slice(&a.position);
            // One coordinate follows the country landmarks, one row is
            // reassigned at random.
            let d = s.rng.gen_range(0..n);
            let x = a.position[d];
            let r1: f64 = s.rng.gen();
            let r2: f64 = s.rng.gen();
            candidate[d] = (x + cfg.wg * r1 * (best[d] - x) + cfg.d * r2 * (x - worst[d])).clamp(0.0, top);
            let row = s.rng.gen_range(0..n);
            candidate[row] = s.rng.gen_range(0..n) as f64;

            decode_into(&candidate, &mut decoded);
            let cost = s.eval(&decoded)?;
            if cost < a.cost {
                a.stagnation = 0;
            } else {
                a.stagnation += 1;
            }
            if cost <= a.cost {
                a.position.copy_from_slice(&candidate);
                a.cost = cost;
            }
        }

        if countries > 1 {
            let means = mean_costs(&agents, countries);
            let marks = landmarks(&agents, countries);
            for a in agents.iter_mut() {
                if a.stagnation < cfg.alpha {
                    continue;
                }
                a.stagnation = 0;
                if let Some(dest) = best_destination(&graph, a.country, &means) {
                    log.moved(a.country, dest, false);
                    a.origin = Some(a.country);
                    a.country = dest;
                    // The newcomer starts from the host's best if that is no worse.
                    let (host, host_cost) = marks.best_with_cost(dest).expect("destination is populated");
                    if host_cost <= a.cost {
                        a.position.copy_from_slice(host);
                        a.cost = host_cost;
                    }
                }
            }
        }

        let best = s.best_cost().unwrap();
        stop.observe(best);
        s.step(0, best, agents.len());
    }
    Ok(())
}
