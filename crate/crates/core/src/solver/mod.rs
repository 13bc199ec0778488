//! Critical-system Newton solve, the `gamma = 1` corner, feasibility frontiers
//! and the uniqueness-horizon recursion.

mod critical;
mod frontier;
mod gamma1;
mod horizon;

pub use critical::{
    residuals_critical, solve_critical_system, SolverResult, DEFAULT_INIT, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
pub use frontier::{
    frontier_epsilon, scan_frontier, Family, FrontierResult, ScanRow, DEFAULT_GAMMA, EPS_SEARCH_HI, EPS_SEARCH_LO,
};
pub use gamma1::{g1, g2, solve_gamma1};
pub use horizon::{uniqueness_horizon, Horizon};
