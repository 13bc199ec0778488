use crate::error::{domain, Error, Result};

/// `g1(p) = sqrt((p - 1)/(p + 1))`.
pub fn g1(p: f64) -> f64 {
    ((p - 1.0) / (p + 1.0)).sqrt()
}

/// `g2(p) = ((17 - 5p)/(17 - p))^(1/p)`, the endpoint condition at `gamma = 1`.
pub fn g2(p: f64) -> f64 {
    ((17.0 - 5.0 * p) / (17.0 - p)).powf(1.0 / p)
}

/// Intersection of `g1` and `g2` on `[p_lo, p_hi]` by bisection; returns `(m, eps0)`.
pub fn solve_gamma1(p_lo: f64, p_hi: f64, tol: f64) -> Result<(f64, f64)> {
    if !(2.36 <= p_lo && p_lo < p_hi && p_hi <= 3.0) {
        return domain(format!("bracket [{p_lo}, {p_hi}] must be an interval inside [2.36, 3]"));
    }
    if !(tol > 0.0) {
        return domain(format!("tol = {tol} must be positive"));
    }
    let gap = |p: f64| g1(p) - g2(p);
    let (mut lo, mut hi) = (p_lo, p_hi);
    let (glo, ghi) = (gap(lo), gap(hi));
    if glo.signum() == ghi.signum() {
        return Err(Error::NoSignChange { lo, hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if gap(mid).signum() == glo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let m = 0.5 * (lo + hi);
    Ok((m, g1(m)))
}
