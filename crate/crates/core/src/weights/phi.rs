use nalgebra::{DMatrix, DVector};

use super::cone::norm;
use super::dd::Dd;
use super::params::WeightParams;
use crate::algebra::PowerSum;
use crate::error::{domain, Result};

/// `f(h) = h^m - eps^m` as a power sum.
pub fn build_f(m: f64, epsilon: f64) -> PowerSum {
    PowerSum::new([(1.0, m), (-epsilon.powf(m), 0.0)])
}

/// Values of the angular profile and its first two derivatives at `h`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Profile {
    pub f: f64,
    pub df: f64,
    pub d2f: f64,
}

impl Profile {
    pub(crate) fn at(params: &WeightParams, h: f64) -> Self {
        let m = params.m;
        let hm2 = h.powf(m - 2.0);
        Self {
            f: hm2 * h * h - params.eps_m(),
            df: m * hm2 * h,
            d2f: m * (m - 1.0) * hm2,
        }
    }
}

/// Radial and angular coordinates `(r, h = x_1 / r)`.
fn polar(x: &[f64]) -> Result<(f64, f64)> {
    let r = norm(x);
    if x.is_empty() || !(r > 0.0) || !r.is_finite() {
        return domain("weight fields need a nonzero finite point x");
    }
    Ok((r, x[0] / r))
}

/// `f(x_1 / r)` without cancellation near the cone boundary.
///
/// Uses `h^m - eps^m = eps^m expm1((m/2) ln1p(q))` with
/// `q = (x_1^2 - eps^2 |x|^2) / (eps^2 |x|^2)`, the numerator carried in
/// double-double so that it vanishes to working precision on the boundary.
fn profile_value(x: &[f64], params: &WeightParams) -> f64 {
    if x[0] < 0.0 {
        let r = norm(x);
        return Profile::at(params, x[0] / r).f;
    }
    let e2 = Dd::square(params.epsilon);
    let x1sq = Dd::square(x[0]);
    let rest = x[1..].iter().fold(Dd::from(0.0), |acc, v| acc.add(Dd::square(*v)));
    let r2 = x1sq.add(rest);
    let num = x1sq.mul(Dd::from(1.0).sub(e2)).sub(e2.mul(rest));
    let q = num.div(e2.mul(r2)).to_f64();
    params.eps_m() * ((params.m / 2.0) * q.ln_1p()).exp_m1()
}

/// `phi(x) = r^alpha f(x_1 / r)`.
pub fn phi_eval(x: &[f64], params: &WeightParams) -> Result<f64> {
    let (r, _) = polar(x)?;
    Ok(r.powf(params.alpha) * profile_value(x, params))
}

/// Point on the cone boundary `x_1 = eps |x|` over the transverse
/// coordinates `x'`, with `x_1` rounded from a double-double value.
pub fn boundary_point(transverse: &[f64], epsilon: f64) -> Vec<f64> {
    let e2 = Dd::square(epsilon);
    let t2 = transverse.iter().fold(Dd::from(0.0), |acc, v| acc.add(Dd::square(*v)));
    let x1 = e2.mul(t2).div(Dd::from(1.0).sub(e2)).sqrt().to_f64();
    std::iter::once(x1).chain(transverse.iter().copied()).collect()
}

/// `grad phi = r^(alpha-2) (alpha f - h f') x + r^(alpha-1) f' e_1`.
pub fn grad_phi(x: &[f64], params: &WeightParams) -> Result<DVector<f64>> {
    let (r, h) = polar(x)?;
    let p = Profile::at(params, h);
    let a = params.alpha;
    let radial = r.powf(a - 2.0) * (a * p.f - h * p.df);
    let mut g = DVector::from_iterator(x.len(), x.iter().map(|xi| radial * xi));
    g[0] += r.powf(a - 1.0) * p.df;
    Ok(g)
}

/// The matrix `B` in `D^2 phi = r^(alpha-2) [(alpha f - h f') I + B]`.
pub fn hess_b(x: &[f64], params: &WeightParams) -> Result<DMatrix<f64>> {
    let (r, h) = polar(x)?;
    let p = Profile::at(params, h);
    let a = params.alpha;
    let n = x.len();
    let cross = ((a - 1.0) * p.df - h * p.d2f) / r;
    let radial = ((a * a - 2.0 * a) * p.f + (3.0 - 2.0 * a) * h * p.df + h * h * p.d2f) / (r * r);
    Ok(DMatrix::from_fn(n, n, |i, j| {
        let ee = if i == 0 && j == 0 { p.d2f } else { 0.0 };
        let ex = if i == 0 { x[j] } else { 0.0 } + if j == 0 { x[i] } else { 0.0 };
        ee + cross * ex + radial * x[i] * x[j]
    }))
}

pub fn hess_phi(x: &[f64], params: &WeightParams) -> Result<DMatrix<f64>> {
    let (r, h) = polar(x)?;
    let p = Profile::at(params, h);
    let a = params.alpha;
    let mut m = hess_b(x, params)?;
    for i in 0..x.len() {
        m[(i, i)] += a * p.f - h * p.df;
    }
    Ok(m * r.powf(a - 2.0))
}

fn check_time(t: f64, a: f64, k: f64) -> Result<()> {
    if !(t > 0.0 && t <= 1.0) {
        return domain(format!("t = {t} must lie in (0, 1]"));
    }
    if !(a >= 0.0) || !a.is_finite() {
        return domain(format!("a = {a} must be nonnegative"));
    }
    if !(k > 0.0) || !k.is_finite() {
        return domain(format!("K = {k} must be positive"));
    }
    Ok(())
}

/// `Lambda(t) = t^(-K) - 1`.
pub fn time_factor(t: f64, k: f64) -> f64 {
    t.powf(-k) - 1.0
}

/// The auxiliary fields `(H, F)` with `H = a Lambda r^(alpha-2) (alpha f - h f')`
/// and `F = -4H + 3/t`.
pub fn field_h_f(x: &[f64], t: f64, a: f64, k: f64, params: &WeightParams) -> Result<(f64, f64)> {
    check_time(t, a, k)?;
    let (r, h) = polar(x)?;
    let p = Profile::at(params, h);
    let lambda = time_factor(t, k);
    let big_h = if a == 0.0 || lambda == 0.0 {
        0.0
    } else {
        a * lambda * r.powf(params.alpha - 2.0) * (params.alpha * p.f - h * p.df)
    };
    Ok((big_h, -4.0 * big_h + 3.0 / t))
}

/// Log of the Carleman weight, `2a (t^(-K) - 1) phi(x) - (|x|^2 + K) / (8t)`.
///
/// Only the exponent is returned; `t^(-K)` for realistic `K` overflows long
/// before the weight itself is needed.
pub fn log_weight(x: &[f64], t: f64, a: f64, k: f64, params: &WeightParams) -> Result<f64> {
    check_time(t, a, k)?;
    let phi = phi_eval(x, params)?;
    let lambda = time_factor(t, k);
    let growth = if a == 0.0 || lambda == 0.0 || phi == 0.0 {
        0.0
    } else {
        2.0 * a * lambda * phi
    };
    let r2: f64 = x.iter().map(|v| v * v).sum();
    Ok(growth - (r2 + k) / (8.0 * t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params() -> WeightParams {
        WeightParams::new(2.46, 1.999, 0.8092, 0.6495).unwrap()
    }

    #[test]
    fn f_examples() {
        let f = build_f(2.46, 0.6495);
        let direct = 1.0 - (2.46 * 0.6495f64.ln()).exp();
        assert_relative_eq!(f.eval(1.0).unwrap(), direct, max_relative = 1e-14);
        assert!((f.eval(1.0).unwrap() - 0.6540).abs() < 1e-3);
        assert!(f.eval(0.6495).unwrap().abs() < 1e-15);
        let d = f.derivative();
        let lhs = d.derivative().shift(1.0);
        let rhs = d.scale(2.46 - 1.0);
        assert!((&lhs - &rhs).max_abs_coeff() < 1e-14);
    }

    #[test]
    fn phi_examples() {
        let p = params();
        assert_relative_eq!(
            phi_eval(&[1.0, 0.0], &p).unwrap(),
            1.0 - p.eps_m(),
            max_relative = 1e-14
        );
        let r: f64 = 3.0;
        let x = [p.epsilon * r, (1.0 - p.epsilon * p.epsilon).sqrt() * r];
        assert!(phi_eval(&x, &p).unwrap().abs() < 1e-12);
        let x = [2.0, 0.3];
        let scaled = [4.0, 0.6];
        assert_relative_eq!(
            phi_eval(&scaled, &p).unwrap(),
            2f64.powf(p.alpha) * phi_eval(&x, &p).unwrap(),
            max_relative = 1e-12
        );
        assert!(phi_eval(&[0.0, 0.0], &p).is_err());
    }

    #[test]
    fn gradient_on_axis() {
        let p = params();
        let g = grad_phi(&[1.0, 0.0, 0.0], &p).unwrap();
        assert_relative_eq!(g[0], p.alpha * (1.0 - p.eps_m()), max_relative = 1e-14);
        assert_eq!(g[1], 0.0);
        assert_eq!(g[2], 0.0);
        let g = grad_phi(&[3.7, 0.0], &p).unwrap();
        assert_eq!(g[1], 0.0);
    }

    #[test]
    fn hessian_is_symmetric() {
        let p = params();
        let m = hess_phi(&[2.0, 0.4, -0.3], &p).unwrap();
        assert_eq!(m, m.transpose());
    }

    #[test]
    fn h_and_f_fields() {
        let p = params();
        let (h, f) = field_h_f(&[2.0, 0.5], 1.0, 3.0, 60.0, &p).unwrap();
        assert_eq!(h, 0.0);
        assert_eq!(f, 3.0);
        let (h, f) = field_h_f(&[2.0, 0.5], 0.4, 0.0, 60.0, &p).unwrap();
        assert_eq!(h, 0.0);
        assert_eq!(f, 3.0 / 0.4);
        let (h, f) = field_h_f(&[2.0, 0.5], 0.9, 1.0, 6.0, &p).unwrap();
        assert!(h < 0.0);
        assert!(f > 3.0 / 0.9);
        assert!(field_h_f(&[2.0, 0.5], 0.0, 1.0, 6.0, &p).is_err());
        assert!(field_h_f(&[2.0, 0.5], 0.5, -1.0, 6.0, &p).is_err());
        assert!(field_h_f(&[2.0, 0.5], 0.5, 1.0, 0.0, &p).is_err());
    }

    #[test]
    fn log_weight_examples() {
        let p = params();
        let x = [2.0, 0.5];
        let r2 = 4.25;
        assert_relative_eq!(log_weight(&x, 1.0, 5.0, 60.0, &p).unwrap(), -(r2 + 60.0) / 8.0);
        let r: f64 = 2.0;
        let xb = [p.epsilon * r, (1.0 - p.epsilon * p.epsilon).sqrt() * r];
        let l = log_weight(&xb, 0.5, 1.0, 6.0, &p).unwrap();
        assert!((l + (4.0 + 6.0) / 4.0).abs() < 1e-9);
        for k in [60.0, 120.0] {
            let t: f64 = 0.7;
            let direct = 2.0 * 0.3 * (t.powf(-k) - 1.0) * phi_eval(&x, &p).unwrap() - (r2 + k) / (8.0 * t);
            assert_relative_eq!(log_weight(&x, t, 0.3, k, &p).unwrap(), direct, max_relative = 1e-12);
        }
    }
}
