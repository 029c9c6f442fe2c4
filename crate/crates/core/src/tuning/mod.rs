//! Taguchi designs over the parameter grids and TOPSIS selection.

mod arrays;
mod topsis;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::solver::{Algorithm, AlgorithmConfig, SolverError};

pub use arrays::{ArrayViolation, OrthogonalArray};
pub use topsis::{topsis_rank, DecisionMatrix, Direction, TopsisResult};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TuningError {
    #[error("no embedded array fits {four} four-level and {two} two-level factors")]
    UnsupportedProfile { four: usize, two: usize },
    #[error("factor `{name}` has {levels} levels; only 2 or 4 are supported")]
    BadLevelCount { name: String, levels: usize },
    #[error("design has {found} columns but the grid has {expected} factors")]
    ColumnMismatch { expected: usize, found: usize },
    #[error("design row {row}, column {column}: level {level} is out of range")]
    IndexOutOfRange { row: usize, column: usize, level: u8 },
    #[error("decision matrix is empty")]
    EmptyMatrix,
    #[error("criterion {criterion} has weight {weight}; weights must be non-negative")]
    NegativeWeight { criterion: usize, weight: f64 },
    #[error("malformed decision matrix: {0}")]
    Shape(String),
    #[error("no configurations to choose from")]
    EmptyInput,
    #[error(transparent)]
    Config(#[from] SolverError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Factor {
    pub name: String,
    pub levels: Vec<f64>,
}

/// Candidate values for every parameter of one algorithm, in the order of
/// [`AlgorithmConfig::parameter_names`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorGrid {
    pub algorithm: Algorithm,
    pub factors: Vec<Factor>,
}

const STALL: [f64; 4] = [30.0, 70.0, 100.0, 150.0];
const RADIUS: [f64; 4] = [0.2, 0.5, 0.8, 1.0];
const RESTARTS: [f64; 4] = [5.0, 10.0, 15.0, 20.0];
const POP: [f64; 4] = [30.0, 50.0, 80.0, 100.0];
const ACCEL: [f64; 4] = [0.5, 1.0, 1.5, 2.0];

impl FactorGrid {
    /// The tuning grid for `algorithm`.
    pub fn for_algorithm(algorithm: Algorithm) -> Self {
        let levels: Vec<&[f64]> = match algorithm {
            Algorithm::Brado => vec![
                &[10.0, 15.0, 20.0, 25.0],
                &[0.6, 0.7, 0.8, 0.9],
                &[0.1, 0.15, 0.2, 0.25],
                &[30.0, 50.0, 70.0, 90.0],
                &[0.6, 0.7, 0.8, 0.9],
                &[0.1, 0.2],
                &[5.0, 6.0, 7.0, 8.0],
                &STALL,
            ],
            Algorithm::Ga => vec![&STALL, &POP, &[0.1, 0.2, 0.3, 0.4], &[0.4, 0.5, 0.6, 0.7]],
            Algorithm::Ica => vec![
                &[0.2, 0.3, 0.4, 0.5],
                &[0.01, 0.02, 0.03, 0.04],
                &[0.01, 0.02, 0.03, 0.04],
                &[70.0, 80.0, 90.0, 100.0],
                &[1.0, 2.0, 3.0, 4.0],
                &[5.0, 6.0, 7.0, 8.0],
                &STALL,
            ],
            Algorithm::Ils => vec![&[1.0, 2.0], &STALL, &RADIUS, &RESTARTS],
            Algorithm::Ls => vec![&STALL, &RADIUS],
            Algorithm::Mls => vec![&STALL, &RADIUS, &RESTARTS],
            Algorithm::Pso => vec![&STALL, &POP, &ACCEL, &ACCEL],
        };
        let names = AlgorithmConfig::parameter_names(algorithm);
        let factors = names
            .iter()
            .zip(levels)
            .map(|(name, l)| Factor { name: name.to_string(), levels: l.to_vec() })
            .collect();
        Self { algorithm, factors }
    }

    pub fn full_factorial_size(&self) -> usize {
        self.factors.iter().map(|f| f.levels.len()).product()
    }

    /// The configuration at the given level indices.
    pub fn config_at(&self, levels: &[usize]) -> Result<AlgorithmConfig, TuningError> {
        if levels.len() != self.factors.len() {
            return Err(TuningError::ColumnMismatch { expected: self.factors.len(), found: levels.len() });
        }
        let mut values = Vec::with_capacity(levels.len());
        for (column, (f, &l)) in self.factors.iter().zip(levels).enumerate() {
            let v = f
                .levels
                .get(l)
                .ok_or(TuningError::IndexOutOfRange { row: 0, column, level: l as u8 })?;
            values.push(*v);
        }
        Ok(AlgorithmConfig::from_values(self.algorithm, &values)?)
    }

    /// Level indices of `config`, or `None` if some value is off the grid.
    pub fn level_indices(&self, config: &AlgorithmConfig) -> Option<Vec<usize>> {
        if config.algorithm() != self.algorithm {
            return None;
        }
        self.factors
            .iter()
            .zip(config.values())
            .map(|(f, v)| f.levels.iter().position(|&l| l == v))
            .collect()
    }
}

/// One message per parameter of `config` that is not a level of its grid.
pub fn grid_warnings(config: &AlgorithmConfig) -> Vec<String> {
    let grid = FactorGrid::for_algorithm(config.algorithm());
    grid.factors
        .iter()
        .zip(config.values())
        .filter(|(f, v)| !f.levels.contains(v))
        .map(|(f, v)| {
            let levels: Vec<String> = f.levels.iter().map(f64::to_string).collect();
            format!(
                "{} {} = {v} is outside the tuning grid {{{}}}",
                config.algorithm(),
                f.name,
                levels.join(", ")
            )
        })
        .collect()
}

/// Picks the design for a grid.
///
/// Grids with at most 16 combinations run as a full factorial. Otherwise
/// up to five four-level factors use L16(4^5). Everything else goes to
/// L32(2^1 4^9): the first two-level factor takes the two-level column and
/// any further two-level factors are folded into four-level columns.
/// Unused columns are dropped.
pub fn build_design(grid: &FactorGrid) -> Result<OrthogonalArray, TuningError> {
    let mut four = Vec::new();
    let mut two = Vec::new();
    for (i, f) in grid.factors.iter().enumerate() {
        match f.levels.len() {
            4 => four.push(i),
            2 => two.push(i),
            levels => return Err(TuningError::BadLevelCount { name: f.name.clone(), levels }),
        }
    }
    let unsupported = || TuningError::UnsupportedProfile { four: four.len(), two: two.len() };
    if grid.factors.is_empty() {
        return Err(unsupported());
    }

    if grid.full_factorial_size() <= 16 {
        let levels: Vec<u8> = grid.factors.iter().map(|f| f.levels.len() as u8).collect();
        return Ok(OrthogonalArray::full_factorial(&levels));
    }

    // Column of the base array assigned to each factor.
    let mut columns = vec![0; grid.factors.len()];
    let mut folded = Vec::new();
    let base = if two.is_empty() && four.len() <= 5 {
        for (k, &f) in four.iter().enumerate() {
            columns[f] = k;
        }
        OrthogonalArray::l16()
    } else {
        if four.len() + two.len().saturating_sub(1) > 9 {
            return Err(unsupported());
        }
        let mut next = 1;
        for &f in &four {
            columns[f] = next;
            next += 1;
        }
        for (k, &f) in two.iter().enumerate() {
            if k == 0 {
                columns[f] = 0;
            } else {
                columns[f] = next;
                folded.push(next);
                next += 1;
            }
        }
        OrthogonalArray::l32()
    };
    let mut design = base.clone();
    for c in folded {
        design.fold_to_two_levels(c);
    }
    Ok(design.select(&columns))
}

/// Concrete configurations for every row of `design`.
pub fn expand_design(design: &OrthogonalArray, grid: &FactorGrid) -> Result<Vec<AlgorithmConfig>, TuningError> {
    if design.column_count() != grid.factors.len() {
        return Err(TuningError::ColumnMismatch { expected: grid.factors.len(), found: design.column_count() });
    }
    design
        .rows
        .iter()
        .enumerate()
        .map(|(row, r)| {
            if r.len() != grid.factors.len() {
                return Err(TuningError::ColumnMismatch { expected: grid.factors.len(), found: r.len() });
            }
            let levels: Vec<usize> = r.iter().map(|&l| l as usize).collect();
            grid.config_at(&levels).map_err(|e| match e {
                TuningError::IndexOutOfRange { column, level, .. } => {
                    TuningError::IndexOutOfRange { row, column, level }
                }
                other => other,
            })
        })
        .collect()
}

/// Mean outcome of one candidate configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigAggregate {
    pub config: AlgorithmConfig,
    pub mean_cost: f64,
    pub mean_nfe: f64,
}

/// Equal weight on cost and NFE.
pub const DEFAULT_WEIGHTS: [f64; 2] = [0.5, 0.5];

/// TOPSIS over (mean cost, mean NFE), both minimised. Returns the index of
/// the winner together with the full ranking.
pub fn select_config(aggregates: &[ConfigAggregate], weights: [f64; 2]) -> Result<(usize, TopsisResult), TuningError> {
    if aggregates.is_empty() {
        return Err(TuningError::EmptyInput);
    }
    let values = aggregates.iter().map(|a| vec![a.mean_cost, a.mean_nfe]).collect();
    let result = topsis_rank(&DecisionMatrix::minimize(values, weights.to_vec()))?;
    Ok((result.best(), result))
}
