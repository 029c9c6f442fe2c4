//! Built-in self checks behind `queens-bench verify`.

use crate::problem::{ClashCounter, Objective};
use crate::solver::Algorithm;
use crate::tuning::{build_design, topsis_rank, DecisionMatrix, FactorGrid, OrthogonalArray};

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub outcome: Result<(), String>,
}

impl Check {
    fn new(name: impl Into<String>, outcome: Result<(), String>) -> Self {
        Self { name: name.into(), outcome }
    }

    pub fn passed(&self) -> bool {
        self.outcome.is_ok()
    }
}

/// Quadratic reference: surplus queens per column plus ordered diagonal
/// pairs.
fn pairwise_cost(columns: &[usize]) -> u64 {
    let n = columns.len();
    let mut distinct = columns.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let mut cost = (n - distinct.len()) as u64;
    for i in 0..n {
        for j in 0..n {
            if i != j && i.abs_diff(j) == columns[i].abs_diff(columns[j]) {
                cost += 1;
            }
        }
    }
    cost
}

/// Compares the fast cost against the reference on all `n^n` boards.
pub fn exhaustive_cost_check(n: usize) -> Result<(), String> {
    let mut counter = ClashCounter::new();
    let mut board = vec![0usize; n];
    loop {
        let fast = counter.cost(&board);
        let slow = pairwise_cost(&board);
        if fast != slow {
            return Err(format!("n={n} board {board:?}: cost {fast}, reference {slow}"));
        }
        // Odometer increment.
        let mut i = 0;
        loop {
            if i == n {
                return Ok(());
            }
            board[i] += 1;
            if board[i] < n {
                break;
            }
            board[i] = 0;
            i += 1;
        }
    }
}

/// Number of permutations of `0..n` with zero cost.
pub fn count_zero_cost_permutations(n: usize) -> usize {
    fn walk(board: &mut Vec<usize>, used: &mut [bool], counter: &mut ClashCounter, found: &mut usize) {
        let n = used.len();
        if board.len() == n {
            if counter.cost(board) == 0 {
                *found += 1;
            }
            return;
        }
        for c in 0..n {
            if !used[c] {
                used[c] = true;
                board.push(c);
                walk(board, used, counter, found);
                board.pop();
                used[c] = false;
            }
        }
    }
    let mut found = 0;
    walk(&mut Vec::with_capacity(n), &mut vec![false; n], &mut ClashCounter::new(), &mut found);
    found
}

fn close(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-9)
}

fn topsis_fixtures() -> Result<(), String> {
    // Mirror-image alternatives sit at equal distance from both points.
    let m = DecisionMatrix::minimize(vec![vec![1.0, 100.0], vec![2.0, 50.0]], vec![0.5, 0.5]);
    let r = topsis_rank(&m).map_err(|e| e.to_string())?;
    if !close(&r.closeness, &[0.5, 0.5]) || r.order != [0, 1] {
        return Err(format!("[[1,100],[2,50]]: closeness {:?}, order {:?}", r.closeness, r.order));
    }
    let m = DecisionMatrix::minimize(vec![vec![1.0, 2.0], vec![3.0, 4.0]], vec![0.5, 0.5]);
    let r = topsis_rank(&m).map_err(|e| e.to_string())?;
    if !close(&r.closeness, &[1.0, 0.0]) {
        return Err(format!("dominance fixture: closeness {:?}", r.closeness));
    }
    let m = DecisionMatrix::minimize(vec![vec![3.0, 3.0]; 3], vec![0.5, 0.5]);
    let r = topsis_rank(&m).map_err(|e| e.to_string())?;
    if !close(&r.closeness, &[0.5; 3]) || r.order != [0, 1, 2] {
        return Err(format!("identical alternatives: closeness {:?}", r.closeness));
    }
    Ok(())
}

/// Runs every check, using `arrays` as the embedded orthogonal arrays.
pub fn run_checks_with(arrays: &[OrthogonalArray]) -> Vec<Check> {
    let mut checks = Vec::new();
    for n in 1..=6 {
        checks.push(Check::new(format!("cost matches pairwise reference on all boards, n={n}"), exhaustive_cost_check(n)));
    }
    let solutions = count_zero_cost_permutations(8);
    checks.push(Check::new(
        "92 zero-cost permutations at n=8",
        if solutions == 92 { Ok(()) } else { Err(format!("found {solutions}")) },
    ));
    for a in arrays {
        checks.push(Check::new(format!("{} balance", a.name), a.check_balance().map_err(|e| e.to_string())));
        checks.push(Check::new(format!("{} strength 2", a.name), a.check_strength2().map_err(|e| e.to_string())));
    }
    for (alg, rows) in [
        (Algorithm::Brado, 32),
        (Algorithm::Ga, 16),
        (Algorithm::Ica, 32),
        (Algorithm::Ils, 32),
        (Algorithm::Ls, 16),
        (Algorithm::Mls, 16),
        (Algorithm::Pso, 16),
    ] {
        let outcome = build_design(&FactorGrid::for_algorithm(alg))
            .map_err(|e| e.to_string())
            .and_then(|d| if d.run_count() == rows { Ok(()) } else { Err(format!("{} rows", d.run_count())) });
        checks.push(Check::new(format!("{alg} design has {rows} runs"), outcome));
    }
    checks.push(Check::new("TOPSIS fixtures", topsis_fixtures()));
    checks
}

pub fn run_checks() -> Vec<Check> {
    run_checks_with(&[OrthogonalArray::l16(), OrthogonalArray::l32()])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_cost_examples() {
        assert_eq!(pairwise_cost(&[0, 0]), 1);
        assert_eq!(pairwise_cost(&[0, 1]), 2);
        assert_eq!(pairwise_cost(&[1, 3, 0, 2]), 0);
    }

    #[test]
    fn small_counts() {
        assert_eq!(count_zero_cost_permutations(4), 2);
        assert_eq!(count_zero_cost_permutations(6), 4);
    }

    #[test]
    fn corrupted_array_names_the_invariant() {
        let mut bad = OrthogonalArray::l16();
        bad.rows[0][1] = (bad.rows[0][1] + 1) % 4;
        let checks = run_checks_with(&[bad]);
        let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed()).collect();
        assert!(!failed.is_empty());
        assert!(failed.iter().all(|c| c.name.starts_with("L16")));
        assert!(failed[0].outcome.as_ref().unwrap_err().contains("balance"));
    }
}
