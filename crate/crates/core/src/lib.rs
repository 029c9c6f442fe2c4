//! N-Queens metaheuristic workbench.

pub mod harness;
pub mod presets;
pub mod problem;
pub mod solver;
pub mod tuning;
pub mod verify;
