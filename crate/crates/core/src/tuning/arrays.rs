//! Orthogonal arrays.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// L16(4^5): rows are `(a, b)` over GF(4), columns `a, b, a+b, a+2b, a+3b`.
#[rustfmt::skip]
const L16: [[u8; 5]; 16] = [
    [0, 0, 0, 0, 0],
    [0, 1, 1, 2, 3],
    [0, 2, 2, 3, 1],
    [0, 3, 3, 1, 2],
    [1, 0, 1, 1, 1],
    [1, 1, 0, 3, 2],
    [1, 2, 3, 2, 0],
    [1, 3, 2, 0, 3],
    [2, 0, 2, 2, 2],
    [2, 1, 3, 0, 1],
    [2, 2, 0, 1, 3],
    [2, 3, 1, 3, 0],
    [3, 0, 3, 3, 3],
    [3, 1, 2, 1, 0],
    [3, 2, 1, 0, 2],
    [3, 3, 0, 2, 1],
];

/// L32(2^1 4^9). Column 0 has two levels, the rest four. Built from nine
/// pairwise disjoint lines of PG(4, 2) plus one leftover point.
#[rustfmt::skip]
const L32: [[u8; 10]; 32] = [
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 2, 0, 2, 0, 2, 3, 2, 3, 1],
    [1, 1, 0, 1, 2, 3, 0, 2, 1, 3],
    [1, 3, 0, 3, 2, 1, 3, 0, 2, 2],
    [0, 0, 2, 2, 2, 2, 0, 1, 2, 3],
    [0, 2, 2, 0, 2, 0, 3, 3, 1, 2],
    [1, 1, 2, 3, 0, 1, 0, 3, 3, 0],
    [1, 3, 2, 1, 0, 3, 3, 1, 0, 1],
    [1, 0, 1, 1, 0, 0, 2, 2, 2, 2],
    [1, 2, 1, 3, 0, 2, 1, 0, 1, 3],
    [0, 1, 1, 0, 2, 3, 2, 0, 3, 1],
    [0, 3, 1, 2, 2, 1, 1, 2, 0, 0],
    [1, 0, 3, 3, 2, 2, 2, 3, 0, 1],
    [1, 2, 3, 1, 2, 0, 1, 1, 3, 0],
    [0, 1, 3, 2, 0, 1, 2, 1, 1, 2],
    [0, 3, 3, 0, 0, 3, 1, 3, 2, 3],
    [1, 0, 0, 0, 1, 1, 1, 1, 1, 1],
    [1, 2, 0, 2, 1, 3, 2, 3, 2, 0],
    [0, 1, 0, 1, 3, 2, 1, 3, 0, 2],
    [0, 3, 0, 3, 3, 0, 2, 1, 3, 3],
    [1, 0, 2, 2, 3, 3, 1, 0, 3, 2],
    [1, 2, 2, 0, 3, 1, 2, 2, 0, 3],
    [0, 1, 2, 3, 1, 0, 1, 2, 2, 1],
    [0, 3, 2, 1, 1, 2, 2, 0, 1, 0],
    [0, 0, 1, 1, 1, 1, 3, 3, 3, 3],
    [0, 2, 1, 3, 1, 3, 0, 1, 0, 2],
    [1, 1, 1, 0, 3, 2, 3, 1, 2, 0],
    [1, 3, 1, 2, 3, 0, 0, 3, 1, 1],
    [0, 0, 3, 3, 3, 3, 3, 2, 1, 0],
    [0, 2, 3, 1, 3, 1, 0, 0, 2, 1],
    [1, 1, 3, 2, 1, 0, 3, 0, 0, 3],
    [1, 3, 3, 0, 1, 2, 0, 2, 3, 2],
];

/// A design matrix of level indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthogonalArray {
    /// Display name such as `L16(4^5)`.
    pub name: String,
    pub rows: Vec<Vec<u8>>,
    /// Level count per column.
    pub levels: Vec<u8>,
    /// `false` for two-level factors folded into a four-level column.
    /// Strength 2 is only promised among pure columns.
    pub pure: Vec<bool>,
}

/// A violated array property.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArrayViolation {
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, found: usize, expected: usize },
    #[error("column {column}: level {level} is out of range for a {levels}-level column")]
    LevelOutOfRange { column: usize, level: u8, levels: u8 },
    #[error("balance: column {column} level {level} appears {found} times, expected {expected}")]
    Balance { column: usize, level: u8, found: usize, expected: usize },
    #[error("strength 2: columns ({a}, {b}) pair ({x}, {y}) appears {found} times, expected {expected}")]
    Strength2 { a: usize, b: usize, x: u8, y: u8, found: usize, expected: usize },
}

impl OrthogonalArray {
    pub fn l16() -> Self {
        Self {
            name: "L16(4^5)".into(),
            rows: L16.iter().map(|r| r.to_vec()).collect(),
            levels: vec![4; 5],
            pure: vec![true; 5],
        }
    }

    pub fn l32() -> Self {
        let mut levels = vec![4; 10];
        levels[0] = 2;
        Self {
            name: "L32(2^1 4^9)".into(),
            rows: L32.iter().map(|r| r.to_vec()).collect(),
            levels,
            pure: vec![true; 10],
        }
    }

    /// Every combination, last column varying fastest.
    pub fn full_factorial(levels: &[u8]) -> Self {
        let mut rows = vec![Vec::new()];
        for &k in levels {
            rows = rows
                .into_iter()
                .flat_map(|r| {
                    (0..k).map(move |l| {
                        let mut r = r.clone();
                        r.push(l);
                        r
                    })
                })
                .collect();
        }
        let name = format!(
            "full factorial ({})",
            levels.iter().map(u8::to_string).collect::<Vec<_>>().join("x")
        );
        Self { name, rows, levels: levels.to_vec(), pure: vec![true; levels.len()] }
    }

    pub fn run_count(&self) -> usize {
        self.rows.len()
    }

    pub fn column_count(&self) -> usize {
        self.levels.len()
    }

    /// Keeps the listed columns, in the given order.
    pub fn select(&self, columns: &[usize]) -> Self {
        Self {
            name: self.name.clone(),
            rows: self.rows.iter().map(|r| columns.iter().map(|&c| r[c]).collect()).collect(),
            levels: columns.iter().map(|&c| self.levels[c]).collect(),
            pure: columns.iter().map(|&c| self.pure[c]).collect(),
        }
    }

    /// Maps a four-level column onto two levels (0, 1, 0, 1).
    pub fn fold_to_two_levels(&mut self, column: usize) {
        assert_eq!(self.levels[column], 4, "only four-level columns fold");
        for r in &mut self.rows {
            r[column] %= 2;
        }
        self.levels[column] = 2;
        self.pure[column] = false;
    }

    pub fn check_shape(&self) -> Result<(), ArrayViolation> {
        let expected = self.levels.len();
        for (row, r) in self.rows.iter().enumerate() {
            if r.len() != expected {
                return Err(ArrayViolation::Ragged { row, found: r.len(), expected });
            }
            for (column, (&level, &levels)) in r.iter().zip(&self.levels).enumerate() {
                if level >= levels {
                    return Err(ArrayViolation::LevelOutOfRange { column, level, levels });
                }
            }
        }
        Ok(())
    }

    /// Every level appears equally often in every column.
    pub fn check_balance(&self) -> Result<(), ArrayViolation> {
        self.check_shape()?;
        for (column, &levels) in self.levels.iter().enumerate() {
            let expected = self.rows.len() / levels as usize;
            for level in 0..levels {
                let found = self.rows.iter().filter(|r| r[column] == level).count();
                if found != expected || expected * levels as usize != self.rows.len() {
                    return Err(ArrayViolation::Balance { column, level, found, expected });
                }
            }
        }
        Ok(())
    }

    /// Every ordered level pair appears equally often in every pair of pure
    /// columns.
    pub fn check_strength2(&self) -> Result<(), ArrayViolation> {
        self.check_shape()?;
        let pure: Vec<usize> = (0..self.levels.len()).filter(|&c| self.pure[c]).collect();
        for (i, &a) in pure.iter().enumerate() {
            for &b in &pure[i + 1..] {
                let cells = self.levels[a] as usize * self.levels[b] as usize;
                let expected = self.rows.len() / cells;
                let mut counts: HashMap<(u8, u8), usize> = HashMap::new();
                for r in &self.rows {
                    *counts.entry((r[a], r[b])).or_default() += 1;
                }
                for x in 0..self.levels[a] {
                    for y in 0..self.levels[b] {
                        let found = counts.get(&(x, y)).copied().unwrap_or(0);
                        if found != expected || expected * cells != self.rows.len() {
                            return Err(ArrayViolation::Strength2 { a, b, x, y, found, expected });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn verify(&self) -> Result<(), ArrayViolation> {
        self.check_balance()?;
        self.check_strength2()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_arrays_are_orthogonal() {
        OrthogonalArray::l16().verify().unwrap();
        OrthogonalArray::l32().verify().unwrap();
    }

    #[test]
    fn corruption_is_named() {
        let mut a = OrthogonalArray::l16();
        a.rows[3][2] = 0;
        assert!(matches!(a.check_balance(), Err(ArrayViolation::Balance { column: 2, .. })));
        let mut b = OrthogonalArray::l16();
        // Swapping two entries of one column keeps balance but breaks pairs.
        b.rows[0][4] = 3;
        b.rows[12][4] = 0;
        assert!(b.check_balance().is_ok());
        assert!(matches!(b.check_strength2(), Err(ArrayViolation::Strength2 { .. })));
        let mut c = OrthogonalArray::l32();
        c.rows[5][0] = 2;
        assert!(matches!(c.verify(), Err(ArrayViolation::LevelOutOfRange { column: 0, .. })));
    }

    #[test]
    fn folding_keeps_balance() {
        let mut a = OrthogonalArray::l32();
        a.fold_to_two_levels(9);
        a.verify().unwrap();
        assert!(!a.pure[9]);
    }

    #[test]
    fn full_factorial_enumerates() {
        let f = OrthogonalArray::full_factorial(&[4, 2]);
        assert_eq!(f.run_count(), 8);
        assert_eq!(f.rows[0], vec![0, 0]);
        assert_eq!(f.rows[7], vec![3, 1]);
        f.verify().unwrap();
    }
}
