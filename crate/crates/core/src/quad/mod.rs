//! Tensor-product quadrature check of the weighted Carleman inequality on
//! smooth compactly supported test functions.

mod bump;
mod grid;
mod integrals;

pub use bump::{
    heat_residual, BackwardHeatKernel, BumpFunction, BumpSum, CompactSupport, Jet, QuadraticProbe, SpaceTimeFunction,
    SupportBox, MAX_BUMPS,
};
pub use grid::{GridSpec, Rule, MIN_NODES_PER_AXIS};
pub use integrals::{
    carleman_integrals, check_support, integrate_box, verify_carleman, weighted_integrals, CarlemanReport,
    WeightedSums, MIN_ACTIVE_FRACTION,
};

/// `bump_eval`: value, gradient, Laplacian and time derivative in one call.
pub fn bump_eval(u: &BumpFunction, x: &[f64], t: f64) -> Jet {
    u.jet(x, t)
}
