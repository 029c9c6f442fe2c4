use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::SolverError;
use crate::problem::InitMethod;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Brado,
    Ga,
    Ica,
    Ils,
    Ls,
    Mls,
    Pso,
}

impl Algorithm {
    /// Report order.
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Brado,
        Algorithm::Ga,
        Algorithm::Ica,
        Algorithm::Ils,
        Algorithm::Ls,
        Algorithm::Mls,
        Algorithm::Pso,
    ];

    /// Lowercase identifier used in files and on the command line.
    pub fn key(self) -> &'static str {
        match self {
            Algorithm::Brado => "brado",
            Algorithm::Ga => "ga",
            Algorithm::Ica => "ica",
            Algorithm::Ils => "ils",
            Algorithm::Ls => "ls",
            Algorithm::Mls => "mls",
            Algorithm::Pso => "pso",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Brado => "BRADO",
            Algorithm::Ga => "GA",
            Algorithm::Ica => "ICA",
            Algorithm::Ils => "ILS",
            Algorithm::Ls => "LS",
            Algorithm::Mls => "MLS",
            Algorithm::Pso => "PSO",
        }
    }

    pub fn is_population_based(self) -> bool {
        matches!(self, Algorithm::Brado | Algorithm::Ga | Algorithm::Ica | Algorithm::Pso)
    }

    /// Stable small integer, used when deriving seeds.
    pub fn index(self) -> u64 {
        Self::ALL.iter().position(|&a| a == self).unwrap() as u64
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|a| a.key() == lower)
            .ok_or_else(|| format!("unknown algorithm `{s}` (expected one of brado, ga, ica, ils, ls, mls, pso)"))
    }
}

/// Brain drain optimisation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BradoConfig {
    /// Iterations without personal improvement before an agent emigrates.
    pub alpha: u32,
    /// Pull towards the best agent of the country.
    pub wg: f64,
    /// Push away from the worst agent of the country.
    pub d: f64,
    /// Population size.
    pub p0: usize,
    /// Edge probability of the country graph.
    pub p_er: f64,
    /// Probability that an emigrant goes back to its origin country.
    pub p_return: f64,
    pub n_countries: usize,
    pub max_stall: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub max_stall: u32,
    pub pop_size: usize,
    pub crossover_prob: f64,
    pub survival_rate: f64,
}

/// Imperialist competitive algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IcaConfig {
    pub revolution_rate: f64,
    pub uniting_threshold: f64,
    pub zeta: f64,
    pub pop_size: usize,
    pub assimilation_coeff: f64,
    pub n_imperialists: usize,
    pub max_stall: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsoConfig {
    pub max_stall: u32,
    pub pop_size: usize,
    pub c_cognitive: f64,
    pub c_social: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IlsConfig {
    pub init_method: InitMethod,
    pub max_stall: u32,
    pub radius: f64,
    pub n_restarts: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LsConfig {
    pub max_stall: u32,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlsConfig {
    pub max_stall: u32,
    pub radius: f64,
    pub n_restarts: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "lowercase")]
pub enum AlgorithmConfig {
    Brado(BradoConfig),
    Ga(GaConfig),
    Ica(IcaConfig),
    Ils(IlsConfig),
    Ls(LsConfig),
    Mls(MlsConfig),
    Pso(PsoConfig),
}

impl AlgorithmConfig {
    pub fn algorithm(&self) -> Algorithm {
        match self {
            AlgorithmConfig::Brado(_) => Algorithm::Brado,
            AlgorithmConfig::Ga(_) => Algorithm::Ga,
            AlgorithmConfig::Ica(_) => Algorithm::Ica,
            AlgorithmConfig::Ils(_) => Algorithm::Ils,
            AlgorithmConfig::Ls(_) => Algorithm::Ls,
            AlgorithmConfig::Mls(_) => Algorithm::Mls,
            AlgorithmConfig::Pso(_) => Algorithm::Pso,
        }
    }

    pub fn max_stall(&self) -> u32 {
        match self {
            AlgorithmConfig::Brado(c) => c.max_stall,
            AlgorithmConfig::Ga(c) => c.max_stall,
            AlgorithmConfig::Ica(c) => c.max_stall,
            AlgorithmConfig::Ils(c) => c.max_stall,
            AlgorithmConfig::Ls(c) => c.max_stall,
            AlgorithmConfig::Mls(c) => c.max_stall,
            AlgorithmConfig::Pso(c) => c.max_stall,
        }
    }

    /// Parameter names in table order.
    pub fn parameter_names(algorithm: Algorithm) -> &'static [&'static str] {
        match algorithm {
            Algorithm::Brado => &["alpha", "wg", "d", "p0", "p_er", "p_return", "n_countries", "max_stall"],
            Algorithm::Ga => &["max_stall", "pop_size", "crossover_prob", "survival_rate"],
            Algorithm::Ica => &[
                "revolution_rate",
                "uniting_threshold",
                "zeta",
                "pop_size",
                "assimilation_coeff",
                "n_imperialists",
                "max_stall",
            ],
            Algorithm::Ils => &["init_method", "max_stall", "radius", "n_restarts"],
            Algorithm::Ls => &["max_stall", "radius"],
            Algorithm::Mls => &["max_stall", "radius", "n_restarts"],
            Algorithm::Pso => &["max_stall", "pop_size", "c_cognitive", "c_social"],
        }
    }

    /// Parameter values in the order of [`Self::parameter_names`]. The ILS
    /// initialisation method appears as its numeric code.
    pub fn values(&self) -> Vec<f64> {
        match self {
            AlgorithmConfig::Brado(c) => vec![
                c.alpha as f64,
                c.wg,
                c.d,
                c.p0 as f64,
                c.p_er,
                c.p_return,
                c.n_countries as f64,
                c.max_stall as f64,
            ],
            AlgorithmConfig::Ga(c) => {
                vec![c.max_stall as f64, c.pop_size as f64, c.crossover_prob, c.survival_rate]
            }
            AlgorithmConfig::Ica(c) => vec![
                c.revolution_rate,
                c.uniting_threshold,
                c.zeta,
                c.pop_size as f64,
                c.assimilation_coeff,
                c.n_imperialists as f64,
                c.max_stall as f64,
            ],
            AlgorithmConfig::Ils(c) => {
                vec![c.init_method.code() as f64, c.max_stall as f64, c.radius, c.n_restarts as f64]
            }
            AlgorithmConfig::Ls(c) => vec![c.max_stall as f64, c.radius],
            AlgorithmConfig::Mls(c) => vec![c.max_stall as f64, c.radius, c.n_restarts as f64],
            AlgorithmConfig::Pso(c) => vec![c.max_stall as f64, c.pop_size as f64, c.c_cognitive, c.c_social],
        }
    }

    /// Inverse of [`Self::values`]. Integer parameters must hold
    /// non-negative whole numbers. The result is not validated.
    pub fn from_values(algorithm: Algorithm, values: &[f64]) -> Result<Self, SolverError> {
        let names = Self::parameter_names(algorithm);
        if values.len() != names.len() {
            return Err(SolverError::InvalidConfig {
                algorithm,
                reason: format!("expected {} values, got {}", names.len(), values.len()),
            });
        }
        let whole = |i: usize| -> Result<u64, SolverError> {
            let x = values[i];
            if x.is_finite() && x >= 0.0 && x.fract() == 0.0 && x <= u32::MAX as f64 {
                Ok(x as u64)
            } else {
                Err(SolverError::InvalidConfig {
                    algorithm,
                    reason: format!("{} = {x} must be a whole number", names[i]),
                })
            }
        };
        let v = values;
        Ok(match algorithm {
            Algorithm::Brado => AlgorithmConfig::Brado(BradoConfig {
                alpha: whole(0)? as u32,
                wg: v[1],
                d: v[2],
                p0: whole(3)? as usize,
                p_er: v[4],
                p_return: v[5],
                n_countries: whole(6)? as usize,
                max_stall: whole(7)? as u32,
            }),
            Algorithm::Ga => AlgorithmConfig::Ga(GaConfig {
                max_stall: whole(0)? as u32,
                pop_size: whole(1)? as usize,
                crossover_prob: v[2],
                survival_rate: v[3],
            }),
            Algorithm::Ica => AlgorithmConfig::Ica(IcaConfig {
                revolution_rate: v[0],
                uniting_threshold: v[1],
                zeta: v[2],
                pop_size: whole(3)? as usize,
                assimilation_coeff: v[4],
                n_imperialists: whole(5)? as usize,
                max_stall: whole(6)? as u32,
            }),
            Algorithm::Ils => {
                let code = whole(0)?;
                let init_method = u8::try_from(code).ok().and_then(InitMethod::from_code).ok_or_else(|| {
                    SolverError::InvalidConfig { algorithm, reason: format!("unknown init_method code {code}") }
                })?;
                AlgorithmConfig::Ils(IlsConfig {
                    init_method,
                    max_stall: whole(1)? as u32,
                    radius: v[2],
                    n_restarts: whole(3)? as u32,
                })
            }
            Algorithm::Ls => AlgorithmConfig::Ls(LsConfig { max_stall: whole(0)? as u32, radius: v[1] }),
            Algorithm::Mls => AlgorithmConfig::Mls(MlsConfig {
                max_stall: whole(0)? as u32,
                radius: v[1],
                n_restarts: whole(2)? as u32,
            }),
            Algorithm::Pso => AlgorithmConfig::Pso(PsoConfig {
                max_stall: whole(0)? as u32,
                pop_size: whole(1)? as usize,
                c_cognitive: v[2],
                c_social: v[3],
            }),
        })
    }

    /// `name=value` pairs, for logs and reports.
    pub fn describe(&self) -> String {
        Self::parameter_names(self.algorithm())
            .iter()
            .zip(self.values())
            .map(|(name, v)| format!("{name}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Structural checks. Values merely outside the tuning grid are not
    /// errors here.
    pub fn validate(&self) -> Result<(), SolverError> {
        let algorithm = self.algorithm();
        let fail = |reason: String| Err(SolverError::InvalidConfig { algorithm, reason });
        let unit = |name: &str, x: f64| -> Result<(), SolverError> {
            if x.is_finite() && (0.0..=1.0).contains(&x) {
                Ok(())
            } else {
                fail(format!("{name} = {x} must lie in [0, 1]"))
            }
        };
        let radius = |x: f64| -> Result<(), SolverError> {
            if x.is_finite() && x > 0.0 && x <= 1.0 {
                Ok(())
            } else {
                fail(format!("radius = {x} must lie in (0, 1]"))
            }
        };
        let non_negative = |name: &str, x: f64| -> Result<(), SolverError> {
            if x.is_finite() && x >= 0.0 {
                Ok(())
            } else {
                fail(format!("{name} = {x} must be a finite non-negative number"))
            }
        };
        if self.max_stall() == 0 {
            return fail("max_stall must be at least 1".into());
        }
        match self {
            AlgorithmConfig::Brado(c) => {
                if c.alpha == 0 {
                    return fail("alpha must be at least 1".into());
                }
                unit("wg", c.wg)?;
                unit("d", c.d)?;
                unit("p_er", c.p_er)?;
                unit("p_return", c.p_return)?;
                if c.p0 < 2 {
                    return fail(format!("p0 = {} must be at least 2", c.p0));
                }
                if c.n_countries == 0 || c.n_countries > c.p0 {
                    return fail(format!("n_countries = {} must lie in 1..={}", c.n_countries, c.p0));
                }
                if c.n_countries > 1 && c.p_er == 0.0 {
                    return fail("p_er = 0 can never produce a connected country graph".into());
                }
            }
            AlgorithmConfig::Ga(c) => {
                if c.pop_size < 2 {
                    return fail(format!("pop_size = {} must be at least 2", c.pop_size));
                }
                unit("crossover_prob", c.crossover_prob)?;
                if !(c.survival_rate > 0.0 && c.survival_rate <= 1.0) {
                    return fail(format!("survival_rate = {} must lie in (0, 1]", c.survival_rate));
                }
            }
            AlgorithmConfig::Ica(c) => {
                unit("revolution_rate", c.revolution_rate)?;
                non_negative("uniting_threshold", c.uniting_threshold)?;
                non_negative("zeta", c.zeta)?;
                non_negative("assimilation_coeff", c.assimilation_coeff)?;
                if c.pop_size < 2 {
                    return fail(format!("pop_size = {} must be at least 2", c.pop_size));
                }
                if c.n_imperialists == 0 || c.n_imperialists >= c.pop_size {
                    return fail(format!(
                        "n_imperialists = {} must lie in 1..{}",
                        c.n_imperialists, c.pop_size
                    ));
                }
            }
            AlgorithmConfig::Pso(c) => {
                if c.pop_size < 2 {
                    return fail(format!("pop_size = {} must be at least 2", c.pop_size));
                }
                non_negative("c_cognitive", c.c_cognitive)?;
                non_negative("c_social", c.c_social)?;
            }
            AlgorithmConfig::Ils(c) => {
                radius(c.radius)?;
                if c.n_restarts == 0 {
                    return fail("n_restarts must be at least 1".into());
                }
            }
            AlgorithmConfig::Ls(c) => radius(c.radius)?,
            AlgorithmConfig::Mls(c) => {
                radius(c.radius)?;
                if c.n_restarts == 0 {
                    return fail("n_restarts must be at least 1".into());
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.key().parse::<Algorithm>(), Ok(a));
            assert_eq!(a.label().parse::<Algorithm>(), Ok(a));
        }
        assert!("sa".parse::<Algorithm>().is_err());
    }

    #[test]
    fn structural_violations_are_errors() {
        let ga = AlgorithmConfig::Ga(GaConfig { max_stall: 10, pop_size: 1, crossover_prob: 0.1, survival_rate: 0.5 });
        assert!(ga.validate().is_err());
        let ica = AlgorithmConfig::Ica(IcaConfig {
            revolution_rate: 0.3,
            uniting_threshold: 0.01,
            zeta: 0.02,
            pop_size: 10,
            assimilation_coeff: 2.0,
            n_imperialists: 10,
            max_stall: 30,
        });
        assert!(ica.validate().is_err());
        let ls = AlgorithmConfig::Ls(LsConfig { max_stall: 30, radius: 0.0 });
        assert!(ls.validate().is_err());
        let brado = AlgorithmConfig::Brado(BradoConfig {
            alpha: 10,
            wg: 0.8,
            d: 0.1,
            p0: 10,
            p_er: 0.7,
            p_return: 0.1,
            n_countries: 11,
            max_stall: 30,
        });
        assert!(brado.validate().is_err());
    }

    #[test]
    fn out_of_grid_values_still_validate() {
        // Tuned tables contain values outside the declared grids.
        let ica = AlgorithmConfig::Ica(IcaConfig {
            revolution_rate: 0.04,
            uniting_threshold: 0.1,
            zeta: 0.03,
            pop_size: 90,
            assimilation_coeff: 2.0,
            n_imperialists: 5,
            max_stall: 100,
        });
        assert!(ica.validate().is_ok());
    }

    #[test]
    fn values_round_trip() {
        let cfgs = [
            AlgorithmConfig::Ls(LsConfig { max_stall: 30, radius: 0.2 }),
            AlgorithmConfig::Ils(IlsConfig {
                init_method: InitMethod::RandomPermutation,
                max_stall: 70,
                radius: 0.5,
                n_restarts: 10,
            }),
        ];
        for cfg in cfgs {
            let back = AlgorithmConfig::from_values(cfg.algorithm(), &cfg.values()).unwrap();
            assert_eq!(back, cfg);
        }
        assert!(AlgorithmConfig::from_values(Algorithm::Ls, &[30.5, 0.2]).is_err());
        assert!(AlgorithmConfig::from_values(Algorithm::Ls, &[30.0]).is_err());
        assert!(AlgorithmConfig::from_values(Algorithm::Ils, &[3.0, 30.0, 0.2, 5.0]).is_err());
        assert_eq!(
            AlgorithmConfig::Ls(LsConfig { max_stall: 30, radius: 0.2 }).describe(),
            "max_stall=30 radius=0.2"
        );
    }

    #[test]
    fn config_json_is_tagged() {
        let cfg = AlgorithmConfig::Ls(LsConfig { max_stall: 30, radius: 0.2 });
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(json, r#"{"algorithm":"ls","max_stall":30,"radius":0.2}"#);
        let back: AlgorithmConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cfg);
    }
}
