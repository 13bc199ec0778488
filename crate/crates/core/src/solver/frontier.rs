use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{CertifyOptions, Interval};
use crate::conditions::direct_feasibility;
use crate::error::{domain, Error, Result};
use crate::weights::WeightParams;

/// `gamma` value used when a predicate does not depend on it.
pub const DEFAULT_GAMMA: f64 = 0.8092;
pub const EPS_SEARCH_LO: f64 = 0.01;
pub const EPS_SEARCH_HI: f64 = 0.99;

/// Which exponent the profile `h^beta - eps^beta` uses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `beta = m`, independent of `alpha`.
    BetaEqM { m: f64 },
    /// `beta = alpha`.
    BetaEqAlpha,
}

impl Family {
    pub fn exponent(&self, alpha: f64) -> f64 {
        match *self {
            Family::BetaEqM { m } => m,
            Family::BetaEqAlpha => alpha,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierResult {
    pub family: Family,
    pub alpha: f64,
    /// Largest `eps` certified feasible.
    pub epsilon_sup: f64,
    /// Last bisection bracket: feasible at `lo`, not certified at `hi`.
    pub bracket: Interval,
    pub evaluations: usize,
}

impl FrontierResult {
    pub fn theta_deg(&self) -> f64 {
        (2.0 * self.epsilon_sup.acos()).to_degrees()
    }
}

fn family_params(family: Family, alpha: f64) -> Result<WeightParams> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return domain(format!("alpha = {alpha} must lie in (1, 2)"));
    }
    let beta = family.exponent(alpha);
    if let Family::BetaEqM { m } = family {
        if !(m > 2.0 && m < 3.0) {
            return domain(format!("m = {m} must lie in (2, 3)"));
        }
    }
    WeightParams::for_family(beta, alpha, DEFAULT_GAMMA, 0.5)
}

/// Supremum of `eps` for which the direct feasibility predicate certifies.
///
/// Bisection over `(0.01, 0.99)`; indeterminate verdicts count as infeasible,
/// so the result is a certified lower bound on the true frontier.
pub fn frontier_epsilon(family: Family, alpha: f64, tol: f64, opts: CertifyOptions) -> Result<FrontierResult> {
    if !(tol > 0.0) {
        return domain(format!("tol = {tol} must be positive"));
    }
    let base = family_params(family, alpha)?;
    let mut evaluations = 0;
    let mut feasible = |eps: f64| -> Result<bool> {
        evaluations += 1;
        Ok(direct_feasibility(&base.with_epsilon(eps)?, opts)?.is_feasible())
    };

    if !feasible(EPS_SEARCH_LO)? {
        return Err(Error::AllInfeasible { epsilon: EPS_SEARCH_LO });
    }
    let (mut lo, mut hi) = (EPS_SEARCH_LO, EPS_SEARCH_HI);
    if feasible(hi)? {
        lo = hi;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(FrontierResult {
        family,
        alpha,
        epsilon_sup: lo,
        bracket: Interval { lo, hi },
        evaluations,
    })
}

/// One row of a frontier scan over `m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub m: f64,
    pub epsilon_sup: Option<f64>,
    pub theta_deg: Option<f64>,
    pub error: Option<String>,
}

/// Frontier for `beta = m` at every `m` in the grid; rows fail independently.
pub fn scan_frontier(m_grid: &[f64], alpha: f64, tol: f64, opts: CertifyOptions) -> Vec<ScanRow> {
    m_grid
        .par_iter()
        .map(|&m| match frontier_epsilon(Family::BetaEqM { m }, alpha, tol, opts) {
            Ok(fr) => ScanRow {
                m,
                epsilon_sup: Some(fr.epsilon_sup),
                theta_deg: Some(fr.theta_deg()),
                error: None,
            },
            Err(e) => ScanRow {
                m,
                epsilon_sup: None,
                theta_deg: None,
                error: Some(e.to_string()),
            },
        })
        .collect()
}
