mod common;

use proptest::prelude::*;
use queens_bench::solver::Algorithm;

use common::{check_run, grid_config};

fn run_case(algorithm: Algorithm, picks: &[usize], seed: u64, cap: u64) -> Result<(), TestCaseError> {
    let config = grid_config(algorithm, picks);
    check_run(10, &config, seed, cap).map_err(TestCaseError::fail)
}

fn caps() -> impl Strategy<Value = u64> {
    prop_oneof![3 => Just(1_000_000u64), 1 => 1u64..2_000]
}

macro_rules! solver_invariants {
    ($name:ident, $alg:expr) => {
        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]
            #[test]
            fn $name(picks in prop::collection::vec(0usize..4, 8), seed in any::<u64>(), cap in caps()) {
                run_case($alg, &picks, seed, cap)?;
            }
        }
    };
}

solver_invariants!(brado_invariants, Algorithm::Brado);
solver_invariants!(ga_invariants, Algorithm::Ga);
solver_invariants!(ica_invariants, Algorithm::Ica);
solver_invariants!(ils_invariants, Algorithm::Ils);
solver_invariants!(ls_invariants, Algorithm::Ls);
solver_invariants!(mls_invariants, Algorithm::Mls);
solver_invariants!(pso_invariants, Algorithm::Pso);

#[test]
fn single_queen_is_solved_by_every_solver() {
    for a in Algorithm::ALL {
        let config = grid_config(a, &[0; 8]);
        let r = queens_bench::solver::solve(1, &config, 9, 1_000_000).unwrap();
        assert_eq!((r.cost, r.nfe), (0, 1), "{a}");
    }
}
