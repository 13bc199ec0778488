//! Cone geometry and the homogeneous weight `phi = r^alpha f(x_1 / r)`.

mod cone;
mod dd;
mod params;
mod phi;

pub use cone::{cone_contains, cone_convert, ConeGeometry, ConeSpec};
pub use params::{WeightParams, CONCAVITY_M_MIN};
pub use phi::{boundary_point, build_f, field_h_f, grad_phi, hess_b, hess_phi, log_weight, phi_eval, time_factor};
