use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// How a cone is specified: by opening angle (radians) or by `eps = cos(theta/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConeSpec {
    Theta(f64),
    Epsilon(f64),
}

/// Circular cone `{x : x_1 > eps |x|}` in `R^dim`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeGeometry {
    pub theta: f64,
    pub epsilon: f64,
    pub dim: usize,
}

impl ConeGeometry {
    pub fn new(spec: ConeSpec, dim: usize) -> Result<Self> {
        if dim < 2 {
            return domain(format!("dimension must be at least 2, got {dim}"));
        }
        match spec {
            ConeSpec::Theta(theta) => {
                if !(theta > 0.0 && theta <= PI) {
                    return domain(format!("theta = {theta} must lie in (0, pi]"));
                }
                Ok(Self {
                    theta,
                    epsilon: (theta / 2.0).cos().max(0.0),
                    dim,
                })
            }
            ConeSpec::Epsilon(epsilon) => {
                if !(epsilon > 0.0 && epsilon < 1.0) {
                    return domain(format!("eps = {epsilon} must lie in (0, 1)"));
                }
                Ok(Self {
                    theta: 2.0 * epsilon.acos(),
                    epsilon,
                    dim,
                })
            }
        }
    }

    pub fn theta_degrees(&self) -> f64 {
        self.theta.to_degrees()
    }

    /// Strict membership `x_1 > eps |x|`; the boundary is excluded.
    pub fn contains(&self, x: &[f64]) -> bool {
        cone_contains(x, self.epsilon)
    }
}

/// Converts a cone specification in the default dimension 2.
pub fn cone_convert(spec: ConeSpec) -> Result<ConeGeometry> {
    ConeGeometry::new(spec, 2)
}

pub fn cone_contains(x: &[f64], epsilon: f64) -> bool {
    match x.first() {
        Some(&x1) => x1 > epsilon * norm(x),
        None => false,
    }
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}
