use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Horizon {
    pub t1: f64,
    /// `T_1, T_2, ...`, with `T_(k+1) = (1 - T_k) T_1 + T_k`.
    pub sequence: Vec<f64>,
}

/// First-step horizon `T_1 = min(1/(256 M), 1/(12 M^2), 1/2)` and its iterates.
pub fn uniqueness_horizon(bound: f64, steps: usize) -> Result<Horizon> {
    if !(bound > 0.0) || !bound.is_finite() {
        return domain(format!("M = {bound} must be positive"));
    }
    let t1 = (1.0 / (256.0 * bound)).min(1.0 / (12.0 * bound * bound)).min(0.5);
    let mut sequence = Vec::with_capacity(steps + 1);
    let mut t = t1;
    sequence.push(t);
    for _ in 0..steps {
        t += (1.0 - t) * t1;
        sequence.push(t);
    }
    Ok(Horizon { t1, sequence })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_step() {
        assert_eq!(uniqueness_horizon(1.0, 0).unwrap().t1, 1.0 / 256.0);
        assert_eq!(uniqueness_horizon(0.5, 0).unwrap().t1, 1.0 / 128.0);
        assert_eq!(uniqueness_horizon(1e-6, 0).unwrap().t1, 0.5);
        assert!(uniqueness_horizon(0.0, 3).is_err());
    }

    #[test]
    fn iterates_approach_one() {
        let hz = uniqueness_horizon(1.0, 1000).unwrap();
        assert_eq!(hz.sequence.len(), 1001);
        for (i, t) in hz.sequence.iter().enumerate() {
            let k = i as i32 + 1;
            let closed = 1.0 - (1.0 - hz.t1).powi(k);
            assert!(((1.0 - t) - (1.0 - hz.t1).powi(k)).abs() <= 1e-12 * (1.0 - closed));
        }
        assert!(hz.sequence.windows(2).all(|w| w[0] < w[1] && w[1] < 1.0));
    }
}
