//! Published tuned configurations, one per (algorithm, board size).
//!
//! These are the parameter levels reported as TOPSIS winners for the sizes
//! 8 to 1000. A few values fall outside the declared tuning grids (for
//! example BRADO `p0 = 100`, ICA `uniting_threshold = 0.1`); they are kept
//! verbatim and flagged by [`crate::tuning::grid_warnings`].

use crate::problem::InitMethod;
use crate::solver::{
    Algorithm, AlgorithmConfig, BradoConfig, GaConfig, IcaConfig, IlsConfig, LsConfig, MlsConfig,
    PsoConfig,
};

/// Board sizes with a published configuration.
pub const PUBLISHED_SIZES: [usize; 9] = [8, 10, 25, 50, 100, 200, 300, 500, 1000];

type Brado = (u32, f64, f64, usize, f64, f64, usize, u32);
type Ga = (u32, usize, f64, f64);
type Ica = (f64, f64, f64, usize, f64, usize, u32);
type Ils = (u8, u32, f64, u32);
type Ls = (u32, f64);
type Mls = (u32, f64, u32);
type Pso = (u32, usize, f64, f64);

struct Row {
    n: usize,
    brado: Brado,
    ga: Ga,
    ica: Ica,
    ils: Ils,
    ls: Ls,
    mls: Mls,
    pso: Pso,
}

#[rustfmt::skip]
const TABLE: [Row; 9] = [
    Row { n: 8,
        brado: (15, 0.8, 0.15, 90, 0.6, 0.2, 6, 100), ga: (150, 50, 0.1, 0.6),
        ica: (0.4, 0.02, 0.04, 90, 1.0, 8, 100), ils: (1, 100, 1.0, 15), ls: (150, 0.8),
        mls: (150, 1.0, 20), pso: (30, 100, 1.5, 0.5) },
    Row { n: 10,
        brado: (20, 0.7, 0.1, 90, 0.6, 0.2, 6, 150), ga: (150, 100, 0.1, 0.4),
        ica: (0.3, 0.01, 0.01, 80, 1.0, 7, 150), ils: (1, 70, 1.0, 15), ls: (150, 1.0),
        mls: (100, 1.0, 20), pso: (100, 100, 1.0, 0.5) },
    Row { n: 25,
        brado: (20, 0.8, 0.1, 80, 0.6, 0.2, 7, 150), ga: (150, 30, 0.1, 0.4),
        ica: (0.3, 0.1, 0.03, 70, 1.0, 6, 100), ils: (1, 100, 0.8, 20), ls: (150, 0.8),
        mls: (150, 1.0, 15), pso: (70, 100, 1.5, 0.5) },
    Row { n: 50,
        brado: (20, 0.8, 0.1, 70, 0.8, 0.1, 5, 150), ga: (150, 30, 0.1, 0.4),
        ica: (0.2, 0.01, 0.03, 80, 1.0, 6, 150), ils: (1, 150, 0.8, 15), ls: (70, 0.8),
        mls: (150, 1.0, 20), pso: (70, 100, 2.0, 0.5) },
    Row { n: 100,
        brado: (12, 0.8, 0.25, 100, 0.8, 0.1, 7, 150), ga: (30, 30, 0.1, 0.5),
        ica: (0.5, 0.01, 0.04, 90, 1.0, 7, 100), ils: (1, 150, 1.0, 20), ls: (30, 0.2),
        mls: (100, 1.0, 20), pso: (100, 100, 1.0, 0.5) },
    Row { n: 200,
        brado: (20, 0.8, 0.2, 70, 0.8, 0.2, 8, 150), ga: (150, 30, 0.1, 0.4),
        ica: (0.3, 0.01, 0.01, 100, 1.0, 7, 150), ils: (1, 150, 1.0, 20), ls: (30, 0.2),
        mls: (150, 1.0, 5), pso: (150, 50, 1.5, 1.5) },
    Row { n: 300,
        brado: (12, 0.8, 0.2, 100, 0.8, 0.1, 6, 150), ga: (150, 30, 0.1, 0.4),
        ica: (0.2, 0.01, 0.04, 100, 2.0, 5, 150), ils: (1, 70, 1.0, 15), ls: (30, 0.2),
        mls: (30, 1.0, 5), pso: (70, 80, 2.0, 1.5) },
    Row { n: 500,
        brado: (10, 0.8, 0.25, 100, 0.8, 0.1, 5, 150), ga: (150, 30, 0.1, 0.5),
        ica: (0.4, 0.03, 0.04, 90, 2.0, 6, 150), ils: (2, 70, 1.0, 5), ls: (30, 0.2),
        mls: (30, 1.0, 5), pso: (70, 80, 2.0, 1.0) },
    Row { n: 1000,
        brado: (10, 0.8, 0.15, 70, 0.9, 0.1, 6, 150), ga: (70, 30, 0.1, 0.4),
        ica: (0.04, 0.04, 0.03, 90, 2.0, 5, 100), ils: (2, 30, 1.0, 5), ls: (30, 0.5),
        mls: (30, 1.0, 5), pso: (70, 30, 1.0, 2.0) },
];

/// The published tuned configuration for `algorithm` at board size `n`.
pub fn published_config(algorithm: Algorithm, n: usize) -> Option<AlgorithmConfig> {
    let row = TABLE.iter().find(|r| r.n == n)?;
    Some(match algorithm {
        Algorithm::Brado => {
            let (alpha, wg, d, p0, p_er, p_return, n_countries, max_stall) = row.brado;
            AlgorithmConfig::Brado(BradoConfig { alpha, wg, d, p0, p_er, p_return, n_countries, max_stall })
        }
        Algorithm::Ga => {
            let (max_stall, pop_size, crossover_prob, survival_rate) = row.ga;
            AlgorithmConfig::Ga(GaConfig { max_stall, pop_size, crossover_prob, survival_rate })
        }
        Algorithm::Ica => {
            let (revolution_rate, uniting_threshold, zeta, pop_size, assimilation_coeff, n_imperialists, max_stall) =
                row.ica;
            AlgorithmConfig::Ica(IcaConfig {
                revolution_rate,
                uniting_threshold,
                zeta,
                pop_size,
                assimilation_coeff,
                n_imperialists,
                max_stall,
            })
        }
        Algorithm::Ils => {
            let (init, max_stall, radius, n_restarts) = row.ils;
            let init_method = InitMethod::from_code(init).expect("table holds codes 1 and 2");
            AlgorithmConfig::Ils(IlsConfig { init_method, max_stall, radius, n_restarts })
        }
        Algorithm::Ls => {
            let (max_stall, radius) = row.ls;
            AlgorithmConfig::Ls(LsConfig { max_stall, radius })
        }
        Algorithm::Mls => {
            let (max_stall, radius, n_restarts) = row.mls;
            AlgorithmConfig::Mls(MlsConfig { max_stall, radius, n_restarts })
        }
        Algorithm::Pso => {
            let (max_stall, pop_size, c_cognitive, c_social) = row.pso;
            AlgorithmConfig::Pso(PsoConfig { max_stall, pop_size, c_cognitive, c_social })
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_published_config_is_structurally_valid() {
        for n in PUBLISHED_SIZES {
            for a in Algorithm::ALL {
                let cfg = published_config(a, n).unwrap();
                assert_eq!(cfg.algorithm(), a);
                cfg.validate().unwrap();
            }
        }
        assert!(published_config(Algorithm::Ls, 9).is_none());
    }

    #[test]
    fn spot_check_values() {
        assert_eq!(
            published_config(Algorithm::Ls, 8),
            Some(AlgorithmConfig::Ls(LsConfig { max_stall: 150, radius: 0.8 }))
        );
        match published_config(Algorithm::Ils, 500).unwrap() {
            AlgorithmConfig::Ils(c) => assert_eq!(c.init_method, InitMethod::RandomPermutation),
            other => panic!("{other:?}"),
        }
        match published_config(Algorithm::Brado, 100).unwrap() {
            AlgorithmConfig::Brado(c) => assert_eq!((c.alpha, c.p0, c.n_countries), (12, 100, 7)),
            other => panic!("{other:?}"),
        }
    }
}
