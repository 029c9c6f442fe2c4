//! TOPSIS ranking with vector normalisation.

use serde::{Deserialize, Serialize};

use super::TuningError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Minimize,
    Maximize,
}

/// Alternatives in rows, criteria in columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionMatrix {
    pub values: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub directions: Vec<Direction>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopsisResult {
    /// Relative closeness per alternative, in `[0, 1]`.
    pub closeness: Vec<f64>,
    /// Alternative indices, best first. Ties keep the lower index first.
    pub order: Vec<usize>,
}

impl TopsisResult {
    /// 1-based rank of every alternative.
    pub fn ranks(&self) -> Vec<usize> {
        let mut ranks = vec![0; self.order.len()];
        for (pos, &alt) in self.order.iter().enumerate() {
            ranks[alt] = pos + 1;
        }
        ranks
    }

    pub fn best(&self) -> usize {
        self.order[0]
    }
}

impl DecisionMatrix {
    /// All criteria minimised.
    pub fn minimize(values: Vec<Vec<f64>>, weights: Vec<f64>) -> Self {
        let directions = vec![Direction::Minimize; weights.len()];
        Self { values, weights, directions }
    }

    fn check(&self) -> Result<(), TuningError> {
        let criteria = self.weights.len();
        if self.values.is_empty() || criteria == 0 {
            return Err(TuningError::EmptyMatrix);
        }
        if self.directions.len() != criteria {
            return Err(TuningError::Shape(format!(
                "{} directions for {criteria} criteria",
                self.directions.len()
            )));
        }
        for (criterion, &w) in self.weights.iter().enumerate() {
            if !(w >= 0.0 && w.is_finite()) {
                return Err(TuningError::NegativeWeight { criterion, weight: w });
            }
        }
        for (alternative, row) in self.values.iter().enumerate() {
            if row.len() != criteria {
                return Err(TuningError::Shape(format!(
                    "alternative {alternative} has {} values for {criteria} criteria",
                    row.len()
                )));
            }
            if let Some(&v) = row.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
                return Err(TuningError::Shape(format!(
                    "alternative {alternative} holds {v}; values must be finite and non-negative"
                )));
            }
        }
        Ok(())
    }
}

/// Ranks the alternatives of `m`.
///
/// A criterion whose column is all zero carries no information and
/// contributes nothing. When an alternative sits on both the ideal and the
/// anti-ideal point its closeness is 0.5.
pub fn topsis_rank(m: &DecisionMatrix) -> Result<TopsisResult, TuningError> {
    m.check()?;
    let criteria = m.weights.len();
    let norms: Vec<f64> = (0..criteria)
        .map(|j| m.values.iter().map(|r| r[j] * r[j]).sum::<f64>().sqrt())
        .collect();
    let weighted: Vec<Vec<f64>> = m
        .values
        .iter()
        .map(|r| {
            (0..criteria)
                .map(|j| if norms[j] > 0.0 { r[j] / norms[j] * m.weights[j] } else { 0.0 })
                .collect()
        })
        .collect();

    let mut ideal = vec![0.0; criteria];
    let mut anti = vec![0.0; criteria];
    for j in 0..criteria {
        let column = weighted.iter().map(|r| r[j]);
        let lo = column.clone().fold(f64::INFINITY, f64::min);
        let hi = column.fold(f64::NEG_INFINITY, f64::max);
        (ideal[j], anti[j]) = match m.directions[j] {
            Direction::Minimize => (lo, hi),
            Direction::Maximize => (hi, lo),
        };
    }

    let dist = |r: &[f64], p: &[f64]| r.iter().zip(p).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    let closeness: Vec<f64> = weighted
        .iter()
        .map(|r| {
            let plus = dist(r, &ideal);
            let minus = dist(r, &anti);
            if plus + minus == 0.0 {
                0.5
            } else {
                minus / (plus + minus)
            }
        })
        .collect();

    let mut order: Vec<usize> = (0..closeness.len()).collect();
    order.sort_by(|&a, &b| closeness[b].total_cmp(&closeness[a]).then(a.cmp(&b)));
    Ok(TopsisResult { closeness, order })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dominating_alternative_sits_on_the_ideal() {
        let m = DecisionMatrix::minimize(vec![vec![1.0, 2.0], vec![3.0, 4.0]], vec![0.5, 0.5]);
        let r = topsis_rank(&m).unwrap();
        assert_eq!(r.order, vec![0, 1]);
        assert_eq!(r.closeness, vec![1.0, 0.0]);
        assert_eq!(r.ranks(), vec![1, 2]);
    }

    #[test]
    fn identical_alternatives_tie_at_one_half() {
        let m = DecisionMatrix::minimize(vec![vec![2.0, 5.0]; 3], vec![0.5, 0.5]);
        let r = topsis_rank(&m).unwrap();
        assert_eq!(r.closeness, vec![0.5; 3]);
        assert_eq!(r.order, vec![0, 1, 2]);
    }

    #[test]
    fn zero_column_is_ignored() {
        let m = DecisionMatrix::minimize(vec![vec![0.0, 10.0], vec![0.0, 5.0]], vec![0.5, 0.5]);
        assert_eq!(topsis_rank(&m).unwrap().order, vec![1, 0]);
    }

    #[test]
    fn maximize_flips_the_ideal() {
        let m = DecisionMatrix {
            values: vec![vec![1.0], vec![4.0]],
            weights: vec![1.0],
            directions: vec![Direction::Maximize],
        };
        assert_eq!(topsis_rank(&m).unwrap().best(), 1);
    }

    #[test]
    fn bad_input() {
        assert_eq!(topsis_rank(&DecisionMatrix::minimize(vec![], vec![1.0])), Err(TuningError::EmptyMatrix));
        assert!(matches!(
            topsis_rank(&DecisionMatrix::minimize(vec![vec![1.0, 1.0]], vec![0.5, -0.1])),
            Err(TuningError::NegativeWeight { criterion: 1, .. })
        ));
        assert!(topsis_rank(&DecisionMatrix::minimize(vec![vec![1.0]], vec![0.5, 0.5])).is_err());
        assert!(topsis_rank(&DecisionMatrix::minimize(vec![vec![-1.0]], vec![1.0])).is_err());
    }
}
