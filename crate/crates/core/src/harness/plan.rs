use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::HarnessError;
use crate::solver::{Algorithm, DEFAULT_NFE_CAP};
use crate::tuning::DEFAULT_WEIGHTS;

/// The plan file shipped with the crate.
pub const DEFAULT_PLAN_TOML: &str = include_str!("../../plans/default.toml");

/// What to run and how often.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    pub algorithms: Vec<Algorithm>,
    pub sizes: Vec<usize>,
    #[serde(default = "five")]
    pub tuning_replications: u32,
    #[serde(default = "five")]
    pub validation_replications: u32,
    #[serde(default = "ten")]
    pub final_replications: u32,
    pub master_seed: u64,
    #[serde(default = "default_weights")]
    pub weights: [f64; 2],
    #[serde(default = "default_cap")]
    pub nfe_cap: u64,
}

fn five() -> u32 {
    5
}
fn ten() -> u32 {
    10
}
fn default_weights() -> [f64; 2] {
    DEFAULT_WEIGHTS
}
fn default_cap() -> u64 {
    DEFAULT_NFE_CAP
}

impl Default for ExperimentPlan {
    fn default() -> Self {
        Self::from_toml(DEFAULT_PLAN_TOML).expect("shipped plan parses")
    }
}

/// Largest board size that fits the seed layout.
pub const MAX_SIZE: usize = (1 << 24) - 1;
/// Largest replication count that fits the seed layout.
pub const MAX_REPLICATIONS: u32 = 1 << 20;
/// Config slot used for runs whose configuration is not a design row.
pub const OFF_DESIGN: u64 = (1 << 14) - 1;

impl ExperimentPlan {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        let plan: Self = toml::from_str(text).map_err(|e| HarnessError::Plan(e.to_string()))?;
        plan.check()?;
        Ok(plan)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            HarnessError::Plan(msg) => HarnessError::Plan(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("plan serialises")
    }

    pub fn check(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::Plan(msg));
        for (name, reps) in [
            ("tuning_replications", self.tuning_replications),
            ("validation_replications", self.validation_replications),
            ("final_replications", self.final_replications),
        ] {
            if reps == 0 || reps > MAX_REPLICATIONS {
                return bad(format!("{name} = {reps} must lie in 1..={MAX_REPLICATIONS}"));
            }
        }
        if let Some(&n) = self.sizes.iter().find(|&&n| n == 0 || n > MAX_SIZE) {
            return bad(format!("size {n} must lie in 1..={MAX_SIZE}"));
        }
        if self.weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return bad(format!("weights {:?} must be non-negative", self.weights));
        }
        if self.nfe_cap == 0 {
            return bad("nfe_cap must be at least 1".into());
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form, hex encoded.
    pub fn digest(&self) -> String {
        let json = serde_json::to_vec(self).expect("plan serialises");
        Sha256::digest(&json).iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Narrows the plan to the given algorithms and sizes. Filters must
    /// name members of the plan; `None` keeps everything.
    pub fn filtered(&self, algorithms: Option<&[Algorithm]>, sizes: Option<&[usize]>) -> Result<Self, HarnessError> {
        let mut plan = self.clone();
        if let Some(algs) = algorithms {
            if let Some(a) = algs.iter().find(|a| !self.algorithms.contains(a)) {
                return Err(HarnessError::Plan(format!("algorithm {a} is not part of the plan")));
            }
            plan.algorithms.retain(|a| algs.contains(a));
        }
        if let Some(ns) = sizes {
            if let Some(n) = ns.iter().find(|n| !self.sizes.contains(n)) {
                return Err(HarnessError::Plan(format!("size {n} is not part of the plan")));
            }
            plan.sizes.retain(|n| ns.contains(n));
        }
        Ok(plan)
    }

    /// Every (algorithm, size) pair in plan order.
    pub fn cells(&self) -> Vec<(Algorithm, usize)> {
        self.algorithms.iter().flat_map(|&a| self.sizes.iter().map(move |&n| (a, n))).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Tuning,
    Validation,
    Final,
}

impl Phase {
    pub const ALL: [Phase; 3] = [Phase::Tuning, Phase::Validation, Phase::Final];

    pub fn key(self) -> &'static str {
        match self {
            Phase::Tuning => "tuning",
            Phase::Validation => "validation",
            Phase::Final => "final",
        }
    }

    fn index(self) -> u64 {
        self as u64
    }
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.key())
    }
}

/// Seed of one run.
///
/// The coordinates are packed into disjoint bit fields (phase 2, algorithm
/// 3, config 14, replication 20, size 24 bits), xored with the master seed
/// and passed through the SplitMix64 finaliser. Both steps are bijective,
/// so distinct coordinates always get distinct seeds.
pub fn derive_seed(master: u64, algorithm: Algorithm, n: usize, phase: Phase, config: u64, replication: u32) -> u64 {
    assert!(n <= MAX_SIZE && replication < MAX_REPLICATIONS && config <= OFF_DESIGN, "coordinate out of range");
    let packed = phase.index()
        | algorithm.index() << 2
        | config << 5
        | (replication as u64) << 19
        | (n as u64) << 39;
    mix64(master ^ packed)
}

fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn shipped_plan() {
        let p = ExperimentPlan::default();
        assert_eq!(p.algorithms, Algorithm::ALL.to_vec());
        assert_eq!(p.sizes, vec![8, 10, 25, 50, 100, 200, 300, 500, 1000]);
        assert_eq!((p.tuning_replications, p.validation_replications, p.final_replications), (5, 5, 10));
        assert_eq!(p.weights, [0.5, 0.5]);
        assert_eq!(ExperimentPlan::from_toml(&p.to_toml()).unwrap(), p);
    }

    #[test]
    fn bad_plans() {
        let base = "algorithms = [\"ls\"]\nsizes = [8]\nmaster_seed = 1\n";
        assert!(ExperimentPlan::from_toml(base).is_ok());
        assert!(ExperimentPlan::from_toml(&format!("{base}final_replications = 0\n")).is_err());
        assert!(ExperimentPlan::from_toml("algorithms = [\"ls\"]\nsizes = [0]\nmaster_seed = 1\n").is_err());
        assert!(ExperimentPlan::from_toml(&format!("{base}colour = 3\n")).is_err());
        assert!(ExperimentPlan::from_toml("algorithms = [\"sa\"]\nsizes = [8]\nmaster_seed = 1\n").is_err());
    }

    #[test]
    fn filters_must_be_subsets() {
        let p = ExperimentPlan::default();
        let f = p.filtered(Some(&[Algorithm::Ls]), Some(&[8, 25])).unwrap();
        assert_eq!(f.cells(), vec![(Algorithm::Ls, 8), (Algorithm::Ls, 25)]);
        assert!(p.filtered(None, Some(&[9])).is_err());
        let narrow = p.filtered(Some(&[Algorithm::Ls]), None).unwrap();
        assert!(narrow.filtered(Some(&[Algorithm::Ga]), None).is_err());
    }

    #[test]
    fn digest_tracks_content() {
        let p = ExperimentPlan::default();
        let mut q = p.clone();
        assert_eq!(p.digest(), q.digest());
        q.master_seed += 1;
        assert_ne!(p.digest(), q.digest());
        assert_eq!(p.digest().len(), 64);
    }

    #[test]
    fn seeds_are_distinct_across_coordinates() {
        let mut seen = HashSet::new();
        for phase in Phase::ALL {
            for a in Algorithm::ALL {
                for n in [1, 8, 1000] {
                    for config in [0, 1, 31, OFF_DESIGN] {
                        for rep in 0..6 {
                            assert!(seen.insert(derive_seed(7, a, n, phase, config, rep)));
                        }
                    }
                }
            }
        }
    }
}
