//! N-Queens encoding, the clash cost function and the placement primitives
//! shared by every solver.
//!
//! A [`Placement`] stores one column per row, so the queen of row `i` sits at
//! `(i, columns[i])`. Columns may repeat: the cost function charges repeated
//! columns through a unique-count term instead of forbidding them.

use std::fmt;

use rand::seq::index;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Number of clashes reported by the cost function.
pub type Cost = u64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlacementError {
    #[error("board size must be at least 1")]
    EmptyBoard,
    #[error("row {row} holds column {column}, outside 0..{n}")]
    ColumnOutOfRange { row: usize, column: usize, n: usize },
}

/// Candidate solution: `columns[i]` is the column of the queen in row `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Placement {
    columns: Vec<usize>,
}

impl Placement {
    pub fn new(columns: Vec<usize>) -> Result<Self, PlacementError> {
        let n = columns.len();
        if n == 0 {
            return Err(PlacementError::EmptyBoard);
        }
        if let Some((row, &column)) = columns.iter().enumerate().find(|(_, &c)| c >= n) {
            return Err(PlacementError::ColumnOutOfRange { row, column, n });
        }
        Ok(Self { columns })
    }

    /// Wraps columns already known to be in range.
    pub(crate) fn from_trusted(columns: Vec<usize>) -> Self {
        debug_assert!(Self::new(columns.clone()).is_ok());
        Self { columns }
    }

    /// Board size.
    pub fn n(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    pub fn into_columns(self) -> Vec<usize> {
        self.columns
    }
}

impl TryFrom<Vec<usize>> for Placement {
    type Error = PlacementError;

    fn try_from(columns: Vec<usize>) -> Result<Self, Self::Error> {
        Self::new(columns)
    }
}

impl From<Placement> for Vec<usize> {
    fn from(p: Placement) -> Self {
        p.columns
    }
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.columns.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Anything that can score a column array. Solvers only see fitness through
/// this trait, which lets callers wrap the cost function (for example to
/// count calls independently of the solver's own NFE counter).
pub trait Objective {
    /// `columns` has length `n` and every entry is in `0..n`.
    fn cost(&mut self, columns: &[usize]) -> Cost;
}

impl<O: Objective + ?Sized> Objective for &mut O {
    fn cost(&mut self, columns: &[usize]) -> Cost {
        (**self).cost(columns)
    }
}

/// The clash cost with reusable scratch buffers.
///
/// The value is `(N - distinct columns)` plus the number of ORDERED row pairs
/// `(i, j)`, `i != j`, with `|i - j| == |columns[i] - columns[j]|`. Every
/// unordered diagonal pair is therefore charged twice while a repeated column
/// is charged once per surplus queen; the asymmetry is intentional.
///
/// Counting is linear: two rows share a diagonal exactly when they share
/// `i - c` or `i + c`, so a diagonal holding `k` queens contributes
/// `k * (k - 1)` ordered pairs.
#[derive(Debug, Default, Clone)]
pub struct ClashCounter {
    column_seen: Vec<u32>,
    down: Vec<u32>,
    up: Vec<u32>,
}

impl ClashCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&mut self, columns: &[usize]) -> Cost {
        let n = columns.len();
        if n <= 1 {
            return 0;
        }
        reset(&mut self.column_seen, n);
        reset(&mut self.down, 2 * n - 1);
        reset(&mut self.up, 2 * n - 1);

        let mut distinct = 0u64;
        let mut ordered_pairs = 0u64;
        for (row, &col) in columns.iter().enumerate() {
            let seen = &mut self.column_seen[col];
            if *seen == 0 {
                distinct += 1;
            }
            *seen += 1;

            // A queen joining a diagonal that already holds k queens adds
            // 2k ordered pairs: k(k+1) - (k-1)k = 2k.
            let d = &mut self.down[row + n - 1 - col];
            ordered_pairs += 2 * u64::from(*d);
            *d += 1;
            let u = &mut self.up[row + col];
            ordered_pairs += 2 * u64::from(*u);
            *u += 1;
        }
        (n as u64 - distinct) + ordered_pairs
    }
}

fn reset(buf: &mut Vec<u32>, len: usize) {
    buf.clear();
    buf.resize(len, 0);
}

impl Objective for ClashCounter {
    fn cost(&mut self, columns: &[usize]) -> Cost {
        self.count(columns)
    }
}

/// Clash cost of a placement. Zero exactly when no two queens attack.
pub fn evaluate_cost(p: &Placement) -> Cost {
    ClashCounter::new().count(p.columns())
}

/// Largest value [`evaluate_cost`] can return on an `n`-board.
pub fn max_cost(n: usize) -> Cost {
    let n = n as u64;
    n.saturating_sub(1) + n * n.saturating_sub(1)
}

/// Initial placement generator; the numeric codes 1 and 2 are the ILS
/// "initial node selection method" levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitMethod {
    /// Every row draws an independent uniform column.
    UniformColumns,
    /// A uniformly random permutation of `0..n`.
    RandomPermutation,
}

impl InitMethod {
    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            1 => Some(Self::UniformColumns),
            2 => Some(Self::RandomPermutation),
            _ => None,
        }
    }

    pub fn code(self) -> u8 {
        match self {
            Self::UniformColumns => 1,
            Self::RandomPermutation => 2,
        }
    }
}

pub fn random_columns<R: Rng + ?Sized>(n: usize, method: InitMethod, rng: &mut R) -> Vec<usize> {
    match method {
        InitMethod::UniformColumns => (0..n).map(|_| rng.gen_range(0..n)).collect(),
        InitMethod::RandomPermutation => {
            let mut cols: Vec<usize> = (0..n).collect();
            cols.shuffle(rng);
            cols
        }
    }
}

/// # Panics
/// If `n == 0`.
pub fn random_placement<R: Rng + ?Sized>(n: usize, method: InitMethod, rng: &mut R) -> Placement {
    assert!(n >= 1, "board size must be at least 1");
    Placement::from_trusted(random_columns(n, method, rng))
}

/// Number of rows reassigned by a perturbation of the given radius.
pub fn perturbation_size(n: usize, radius: f64) -> usize {
    ((radius * n as f64).round() as usize).clamp(1, n.max(1))
}

/// Reassigns `perturbation_size(n, radius)` distinct rows, in place.
pub fn perturb_in_place<R: Rng + ?Sized>(columns: &mut [usize], radius: f64, rng: &mut R) {
    let n = columns.len();
    if n == 0 {
        return;
    }
    let k = perturbation_size(n, radius);
    for row in index::sample(rng, n, k) {
        columns[row] = rng.gen_range(0..n);
    }
}

/// Copy of `p` with `max(1, round(radius * N))` distinct rows, chosen
/// uniformly, each given a uniform random column.
pub fn perturb<R: Rng + ?Sized>(p: &Placement, radius: f64, rng: &mut R) -> Placement {
    let mut columns = p.columns().to_vec();
    perturb_in_place(&mut columns, radius, rng);
    Placement::from_trusted(columns)
}

/// Rounds (half away from zero) and clamps into `0..n`. NaN maps to 0.
#[inline]
pub fn decode_coordinate(v: f64, n: usize) -> usize {
    let top = n.saturating_sub(1) as f64;
    // `as` saturates and sends NaN to 0.
    v.round().clamp(0.0, top) as usize
}

pub fn decode_into(v: &[f64], out: &mut Vec<usize>) {
    let n = v.len();
    out.clear();
    out.extend(v.iter().map(|&x| decode_coordinate(x, n)));
}

/// Maps a continuous vector in `[0, n-1]^n` to a placement.
///
/// # Panics
/// If `v.len() != n` or `n == 0`.
pub fn decode_continuous(v: &[f64], n: usize) -> Placement {
    assert_eq!(v.len(), n, "vector length must equal the board size");
    assert!(n >= 1, "board size must be at least 1");
    let mut out = Vec::with_capacity(n);
    decode_into(v, &mut out);
    Placement::from_trusted(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(cols: &[usize]) -> Placement {
        Placement::new(cols.to_vec()).unwrap()
    }

    #[test]
    fn cost_examples() {
        assert_eq!(evaluate_cost(&p(&[0])), 0);
        assert_eq!(evaluate_cost(&p(&[0, 1])), 2);
        assert_eq!(evaluate_cost(&p(&[1, 1, 1])), 2);
        assert_eq!(evaluate_cost(&p(&[0, 2, 0])), 1);
        assert_eq!(evaluate_cost(&p(&[0, 4, 7, 5, 2, 6, 1, 3])), 0);
    }

    #[test]
    fn max_cost_attained_by_main_diagonal() {
        // All queens on one diagonal: every ordered pair attacks, no duplicates.
        for n in 1..12 {
            let diag: Vec<usize> = (0..n).collect();
            assert_eq!(evaluate_cost(&p(&diag)), (n * (n - 1)) as u64);
            assert!(evaluate_cost(&p(&diag)) <= max_cost(n));
        }
    }

    #[test]
    fn placement_rejects_bad_input() {
        assert_eq!(Placement::new(vec![]), Err(PlacementError::EmptyBoard));
        assert_eq!(
            Placement::new(vec![0, 2]),
            Err(PlacementError::ColumnOutOfRange { row: 1, column: 2, n: 2 })
        );
        let err: Result<Placement, _> = serde_json::from_str("[0,5]");
        assert!(err.is_err());
    }

    #[test]
    fn random_placement_methods() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in [InitMethod::UniformColumns, InitMethod::RandomPermutation] {
            assert_eq!(random_placement(1, m, &mut rng).columns(), &[0]);
        }
        let perm = random_placement(4, InitMethod::RandomPermutation, &mut rng);
        let mut sorted = perm.columns().to_vec();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2, 3]);

        let a = random_placement(100, InitMethod::UniformColumns, &mut ChaCha8Rng::seed_from_u64(3));
        let b = random_placement(100, InitMethod::UniformColumns, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(a, b);
    }

    #[test]
    fn init_method_codes() {
        assert_eq!(InitMethod::from_code(1), Some(InitMethod::UniformColumns));
        assert_eq!(InitMethod::from_code(2), Some(InitMethod::RandomPermutation));
        assert_eq!(InitMethod::from_code(3), None);
        assert_eq!(InitMethod::RandomPermutation.code(), 2);
    }

    #[test]
    fn perturbation_sizes() {
        assert_eq!(perturbation_size(1, 1.0), 1);
        assert_eq!(perturbation_size(10, 0.2), 2);
        assert_eq!(perturbation_size(8, 1.0), 8);
        assert_eq!(perturbation_size(3, 0.1), 1);
        assert_eq!(perturbation_size(8, 0.5), 4);
    }

    #[test]
    fn perturb_leaves_input_untouched() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let orig = p(&[0, 1, 2, 3, 4, 5, 6, 7, 8, 9]);
        let copy = orig.clone();
        for _ in 0..200 {
            let q = perturb(&orig, 0.2, &mut rng);
            let changed = orig.columns().iter().zip(q.columns()).filter(|(a, b)| a != b).count();
            assert!(changed <= 2);
        }
        assert_eq!(orig, copy);
    }

    #[test]
    fn perturb_full_radius_touches_every_row() {
        // With radius 1 all 8 rows are drawn; over many seeds each row must
        // be seen changing, and no more than 8 rows can ever change.
        let base = p(&[0; 8]);
        let mut ever_changed = [false; 8];
        for seed in 0..500 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let q = perturb(&base, 1.0, &mut rng);
            for (row, (a, b)) in base.columns().iter().zip(q.columns()).enumerate() {
                ever_changed[row] |= a != b;
            }
            let again = perturb(&base, 1.0, &mut ChaCha8Rng::seed_from_u64(seed));
            assert_eq!(q, again);
        }
        assert!(ever_changed.iter().all(|&c| c));
    }

    #[test]
    fn perturb_single_queen() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(perturb(&p(&[0]), 1.0, &mut rng).columns(), &[0]);
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode_continuous(&[0.0, 1.0, 2.0], 3).columns(), &[0, 1, 2]);
        assert_eq!(decode_continuous(&[-5.3, 2.49, 99.7], 3).columns(), &[0, 2, 2]);
        assert_eq!(decode_continuous(&[1.5, 1.5], 2).columns(), &[1, 1]);
        assert_eq!(decode_continuous(&[0.5, f64::NAN, f64::INFINITY], 3).columns(), &[1, 0, 2]);
    }

    #[test]
    fn display_is_compact() {
        assert_eq!(p(&[2, 0, 1]).to_string(), "[2,0,1]");
    }
}
