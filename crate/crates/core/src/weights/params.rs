use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Smallest family exponent for which the concavity argument on `l2` applies.
pub const CONCAVITY_M_MIN: f64 = 2.36;

/// Parameters of one weight instance `phi = r^alpha (h^m - eps^m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightParams {
    /// Family exponent.
    pub m: f64,
    /// Homogeneity degree.
    pub alpha: f64,
    /// Splitting parameter used only by the sufficient-route decomposition.
    pub gamma: f64,
    /// Cone parameter `cos(theta / 2)`.
    pub epsilon: f64,
}

impl WeightParams {
    /// Validates the working ranges `2 < m < 3`, `1 < alpha <= 2`,
    /// `1/2 < gamma <= 1`, `0 < epsilon < 1`.
    pub fn new(m: f64, alpha: f64, gamma: f64, epsilon: f64) -> Result<Self> {
        if !(m > 2.0 && m < 3.0) {
            return domain(format!("m = {m} must lie in (2, 3)"));
        }
        Self::for_family(m, alpha, gamma, epsilon)
    }

    /// Like [`WeightParams::new`] but admits any family exponent
    /// `alpha <= m < 3`, which covers the `m = alpha` family.
    pub fn for_family(m: f64, alpha: f64, gamma: f64, epsilon: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha <= 2.0) {
            return domain(format!("alpha = {alpha} must lie in (1, 2]"));
        }
        if !(m >= alpha && m < 3.0) {
            return domain(format!("m = {m} must lie in [alpha, 3)"));
        }
        if !(gamma > 0.5 && gamma <= 1.0) {
            return domain(format!("gamma = {gamma} must lie in (1/2, 1]"));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return domain(format!("eps = {epsilon} must lie in (0, 1)"));
        }
        Ok(Self {
            m,
            alpha,
            gamma,
            epsilon,
        })
    }

    pub fn with_epsilon(self, epsilon: f64) -> Result<Self> {
        Self::for_family(self.m, self.alpha, self.gamma, epsilon)
    }

    pub fn with_gamma(self, gamma: f64) -> Result<Self> {
        Self::for_family(self.m, self.alpha, gamma, self.epsilon)
    }

    /// `m` sits below the range where `l2` is guaranteed concave.
    pub fn below_concavity_range(&self) -> bool {
        self.m < CONCAVITY_M_MIN
    }

    /// `eps^m`.
    pub fn eps_m(&self) -> f64 {
        self.epsilon.powf(self.m)
    }

    /// Boundary value `sqrt((m - 1) / (m + 1))` beyond which `l1(eps) < 0`.
    pub fn boundary_epsilon(&self) -> f64 {
        ((self.m - 1.0) / (self.m + 1.0)).sqrt()
    }
}
