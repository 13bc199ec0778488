use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Starting point `(gamma, m, eps)` for the critical-system Newton solve.
pub const DEFAULT_INIT: [f64; 3] = [0.80, 2.45, 0.65];
pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 100;

const FD_STEP: f64 = 1e-7;
const MAX_HALVINGS: u32 = 30;
const MAX_CONDITION: f64 = 1e14;

/// Residuals of the critical system at `(gamma, m, e)`:
///
/// * `R1 = 4(2g - 1) - g^2 (4 - g^2 (m - 1)/4)`
/// * `R2 = (m - 1)/(m + 1) - e^2`
/// * `R3 = (4 - g^2 (m - 1)/4 - m) - (4 - g^2 (m - 1)/4) e^m`
pub fn residuals_critical(gamma: f64, m: f64, e: f64) -> Result<[f64; 3]> {
    if !(gamma > 0.5 && gamma <= 1.0) {
        return domain(format!("gamma = {gamma} must lie in (1/2, 1]"));
    }
    if !(m > 2.0 && m < 3.0) {
        return domain(format!("m = {m} must lie in (2, 3)"));
    }
    if !(e > 0.0 && e < 1.0) {
        return domain(format!("e = {e} must lie in (0, 1)"));
    }
    let q = gamma * gamma * (m - 1.0) / 4.0;
    Ok([
        4.0 * (2.0 * gamma - 1.0) - gamma * gamma * (4.0 - q),
        (m - 1.0) / (m + 1.0) - e * e,
        (4.0 - q - m) - (4.0 - q) * e.powf(m),
    ])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverResult {
    pub gamma: f64,
    pub m: f64,
    pub epsilon0: f64,
    pub theta_deg: f64,
    pub residuals: [f64; 3],
    pub iterations: usize,
    pub converged: bool,
}

fn max_abs(r: &[f64; 3]) -> f64 {
    r.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

fn eval(x: &Vector3<f64>) -> Result<[f64; 3]> {
    residuals_critical(x[0], x[1], x[2])
}

/// Central differences, falling back to a one-sided stencil at the domain edge.
fn jacobian(x: &Vector3<f64>, r0: &[f64; 3]) -> Result<Matrix3<f64>> {
    let mut jac = Matrix3::zeros();
    for j in 0..3 {
        let mut plus = *x;
        let mut minus = *x;
        plus[j] += FD_STEP;
        minus[j] -= FD_STEP;
        let col = match (eval(&plus), eval(&minus)) {
            (Ok(p), Ok(m)) => [0, 1, 2].map(|i| (p[i] - m[i]) / (2.0 * FD_STEP)),
            (Ok(p), Err(_)) => [0, 1, 2].map(|i| (p[i] - r0[i]) / FD_STEP),
            (Err(_), Ok(m)) => [0, 1, 2].map(|i| (r0[i] - m[i]) / FD_STEP),
            (Err(e), Err(_)) => return Err(e),
        };
        for i in 0..3 {
            jac[(i, j)] = col[i];
        }
    }
    Ok(jac)
}

/// Damped Newton on the critical system with a finite-difference Jacobian.
///
/// The step is halved while the residual norm does not decrease or the trial
/// point leaves the domain. A root is only reported once the residuals,
/// re-evaluated at the returned point, are within `tol`.
pub fn solve_critical_system(init: [f64; 3], tol: f64, max_iter: usize) -> Result<SolverResult> {
    if !(tol > 0.0) {
        return domain(format!("tol = {tol} must be positive"));
    }
    let mut x = Vector3::from(init);
    let mut r = eval(&x)?;

    for iter in 0..=max_iter {
        if max_abs(&r) <= tol {
            let residuals = eval(&x)?;
            debug_assert!(max_abs(&residuals) <= tol);
            return Ok(SolverResult {
                gamma: x[0],
                m: x[1],
                epsilon0: x[2],
                theta_deg: (2.0 * x[2].acos()).to_degrees(),
                residuals,
                iterations: iter,
                converged: true,
            });
        }
        if iter == max_iter {
            break;
        }

        let jac = jacobian(&x, &r)?;
        let sv = jac.singular_values();
        let condition = sv.max() / sv.min();
        if !condition.is_finite() || condition > MAX_CONDITION {
            return Err(Error::SingularJacobian { condition });
        }
        let step = jac
            .lu()
            .solve(&-Vector3::from(r))
            .ok_or(Error::SingularJacobian { condition })?;

        let norm = Vector3::from(r).norm();
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let trial = x + step * lambda;
            if let Ok(rt) = eval(&trial) {
                if Vector3::from(rt).norm() < norm {
                    accepted = Some((trial, rt));
                    break;
                }
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((xn, rn)) => {
                x = xn;
                r = rn;
            }
            None => {
                return Err(Error::NonConvergence {
                    iterations: iter + 1,
                    residual: max_abs(&r),
                })
            }
        }
    }
    Err(Error::NonConvergence {
        iterations: max_iter,
        residual: max_abs(&r),
    })
}
