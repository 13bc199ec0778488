//! Carleman-weight analysis for the backward heat operator in circular cones.
//!
//! The crate is organized bottom-up:
//!
//! * [`algebra`] holds real-exponent power sums in the angular variable `h`,
//!   an outward-inflated interval type and a bisection sign certifier.
//! * [`weights`] builds the cone geometry and the weight
//!   `phi(x) = r^alpha ((x_1/r)^m - eps^m)` with its gradient, Hessian and
//!   the log of the space-time Carleman weight.
//! * [`conditions`] assembles the sign conditions on the profile and certifies
//!   them, either directly or along the `gamma`-splitting route.
//! * [`solver`] solves the critical parameter system, the `gamma = 1` corner,
//!   the feasibility frontier in `eps`, and the uniqueness-horizon recursion.
//! * [`quad`] checks the weighted Carleman inequality by tensor-product
//!   quadrature on smooth bump test functions.
//! * [`identities`] bundles the structural cross-checks into one seeded run.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod conditions;
pub mod error;
pub mod identities;
pub mod quad;
pub mod solver;
pub mod weights;

pub use algebra::{certify_sign, CertifyOptions, Interval, PowerSum, SignClaim, SignVerdict, VerdictKind};
pub use conditions::{direct_feasibility, sufficient_route_check, ConditionReport, Overall};
pub use error::{Error, Result};
pub use weights::{ConeGeometry, ConeSpec, WeightParams};
