//! Seeded structural cross-checks spanning the algebra, weight and quadrature
//! modules. Each check reports its worst observed deviation against a fixed
//! tolerance.

use nalgebra::SymmetricEigen;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Interval, PowerSum};
use crate::conditions::{build_l, l1_at_boundary, l2_closed_form, l3_floor, l4_closed_form, LExpr};
use crate::error::Result;
use crate::quad::{heat_residual, BackwardHeatKernel};
use crate::weights::{boundary_point, build_f, field_h_f, grad_phi, hess_b, hess_phi, phi_eval, WeightParams};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    pub worst: f64,
    pub tolerance: f64,
    pub samples: usize,
}

impl IdentityCheck {
    fn new(name: &str, worst: f64, tolerance: f64, samples: usize) -> Self {
        Self {
            name: name.to_string(),
            passed: worst <= tolerance,
            worst,
            tolerance,
            samples,
        }
    }
}

/// Uniform point of the cone with `|x|` in `radius` and `x_1/|x|` in `(eps, 1)`.
pub fn random_cone_point(rng: &mut impl Rng, epsilon: f64, dim: usize, radius: (f64, f64)) -> Vec<f64> {
    let r = rng.gen_range(radius.0..radius.1);
    let h = epsilon + (1.0 - epsilon) * rng.gen_range(0.01..0.99);
    boundary_like_point(rng, h, r, dim)
}

/// Point with `|x| = r` and `x_1 = h r`, random direction in the other coordinates.
pub fn boundary_like_point(rng: &mut impl Rng, h: f64, r: f64, dim: usize) -> Vec<f64> {
    let mut dir: Vec<f64> = (1..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let n = dir.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
    let side = (1.0 - h * h).sqrt() * r;
    dir.iter_mut().for_each(|v| *v *= side / n);
    let mut x = Vec::with_capacity(dim);
    x.push(h * r);
    x.extend(dir);
    x
}

fn rel_err(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / scale.max(f64::MIN_POSITIVE)
}

fn random_sum(rng: &mut impl Rng) -> PowerSum {
    let n = rng.gen_range(1..6);
    PowerSum::new((0..n).map(|_| (rng.gen_range(-10.0..10.0), rng.gen_range(0.0..6.0))))
}

fn magnitude(p: &PowerSum, h: f64) -> f64 {
    p.terms().iter().map(|t| (t.coeff * h.powf(t.exponent)).abs()).sum()
}

/// Runs every structural check for `params` in dimension `dim`.
pub fn run_identities(params: &WeightParams, dim: usize, seed: u64) -> Result<Vec<IdentityCheck>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let eps = params.epsilon;

    // Power-sum algebra.
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (p, q, h) = (random_sum(&mut rng), random_sum(&mut rng), rng.gen_range(0.05..1.0));
        let pq = &p * &q;
        worst = worst.max(rel_err(pq.eval(h)?, p.eval(h)? * q.eval(h)?, magnitude(&pq, h)));
    }
    out.push(IdentityCheck::new("power_sum_product", worst, 1e-12, 100));

    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (p, h, d) = (random_sum(&mut rng), rng.gen_range(0.2..0.9), 1e-6);
        let fd = (p.eval(h + d)? - p.eval(h - d)?) / (2.0 * d);
        let dp = p.derivative();
        worst = worst.max(rel_err(fd, dp.eval(h)?, magnitude(&dp, h).max(1.0)));
    }
    out.push(IdentityCheck::new("power_sum_derivative", worst, 1e-6, 100));

    let mut violations = 0usize;
    for _ in 0..20 {
        let p = random_sum(&mut rng);
        let (a, b): (f64, f64) = (rng.gen_range(0.01..1.0), rng.gen_range(0.01..1.0));
        let range = Interval::new(a.min(b), a.max(b))?;
        let enc = p.eval_interval(range)?;
        for _ in 0..1000 {
            let h = rng.gen_range(range.lo..=range.hi);
            if !enc.contains(p.eval(h)?) {
                violations += 1;
            }
        }
    }
    out.push(IdentityCheck::new(
        "enclosure_soundness",
        violations as f64,
        0.0,
        20_000,
    ));

    // Profile identities at the coefficient level.
    let df = build_f(params.m, eps).derivative();
    let lhs = df.derivative().shift(1.0);
    let rhs = df.scale(params.m - 1.0);
    out.push(IdentityCheck::new(
        "h_f2_eq_m_minus_1_f1",
        (&lhs - &rhs).max_abs_coeff(),
        1e-12,
        1,
    ));

    let l3 = build_l(LExpr::L3, params);
    let rebuilt = &PowerSum::constant(l3_floor(params)) + &l4_closed_form(params).shift(params.m);
    out.push(IdentityCheck::new(
        "l3_eq_floor_plus_hm_l4",
        (&l3 - &rebuilt).max_abs_coeff(),
        1e-12,
        1,
    ));

    let l2 = build_l(LExpr::L2, params);
    out.push(IdentityCheck::new(
        "l2_closed_form",
        (&l2 - &l2_closed_form(params)).max_abs_coeff(),
        1e-12,
        1,
    ));

    let l1 = build_l(LExpr::L1, params);
    let at_eps = l1.eval(eps)?;
    out.push(IdentityCheck::new(
        "l1_boundary_closed_form",
        rel_err(at_eps, l1_at_boundary(params), magnitude(&l1, eps)),
        1e-12,
        1,
    ));

    // Boundary law over an (m, eps) grid.
    let mut mismatches = 0usize;
    for i in 0..20 {
        for j in 0..20 {
            let m = 2.02 + 0.95 * i as f64 / 19.0;
            let e = 0.05 + 0.9 * j as f64 / 19.0;
            let p = WeightParams::new(m, params.alpha, params.gamma, e)?;
            let law = (m - 1.0) - (m + 1.0) * e * e;
            let v = build_l(LExpr::L1, &p).eval(e)?;
            if law.abs() > 1e-9 && law.signum() != v.signum() {
                mismatches += 1;
            }
        }
    }
    out.push(IdentityCheck::new("l1_boundary_sign_law", mismatches as f64, 0.0, 400));

    // Weight homogeneity, Euler identity, boundary vanishing.
    let (mut wphi, mut wgrad, mut whess, mut weuler) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let x = random_cone_point(&mut rng, eps, dim, (1.0, 10.0));
        let (phi, g, hs) = (phi_eval(&x, params)?, grad_phi(&x, params)?, hess_phi(&x, params)?);
        for lam in [0.5, 2.0, 7.0] {
            let y: Vec<f64> = x.iter().map(|v| v * lam).collect();
            wphi = wphi.max(rel_err(phi_eval(&y, params)?, lam.powf(params.alpha) * phi, phi.abs()));
            let gy = grad_phi(&y, params)? - &g * lam.powf(params.alpha - 1.0);
            wgrad = wgrad.max(gy.norm() / (g.norm() * lam.powf(params.alpha - 1.0)));
            let hy = hess_phi(&y, params)? - &hs * lam.powf(params.alpha - 2.0);
            whess = whess.max(hy.norm() / (hs.norm() * lam.powf(params.alpha - 2.0)));
        }
        let xdotg: f64 = x.iter().zip(g.iter()).map(|(a, b)| a * b).sum();
        let scale = x.iter().map(|v| v * v).sum::<f64>().sqrt() * g.norm();
        weuler = weuler.max(rel_err(xdotg, params.alpha * phi, scale));
    }
    out.push(IdentityCheck::new("phi_homogeneity", wphi, 1e-10, 300));
    out.push(IdentityCheck::new("grad_homogeneity", wgrad, 1e-10, 300));
    out.push(IdentityCheck::new("hess_homogeneity", whess, 1e-10, 300));
    out.push(IdentityCheck::new("euler_identity", weuler, 1e-10, 100));

    let mut wb = 0.0f64;
    for _ in 0..100 {
        let r = rng.gen_range(1.0..100.0);
        let x = boundary_point(&boundary_like_point(&mut rng, eps, r, dim)[1..], eps);
        wb = wb.max(phi_eval(&x, params)?.abs());
    }
    out.push(IdentityCheck::new("boundary_vanishing", wb, 1e-12, 100));

    // Finite-difference checks of the gradient and Hessian.
    let (mut wg, mut wh, mut wtrace) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let x = random_cone_point(&mut rng, eps, dim, (1.0, 10.0));
        let g = grad_phi(&x, params)?;
        let hs = hess_phi(&x, params)?;
        let at = |dx: &[(usize, f64)]| -> Result<f64> {
            let mut y = x.clone();
            for &(i, d) in dx {
                y[i] += d;
            }
            phi_eval(&y, params)
        };
        let d = 1e-6;
        for i in 0..dim {
            let fd = (at(&[(i, d)])? - at(&[(i, -d)])?) / (2.0 * d);
            wg = wg.max(rel_err(fd, g[i], g.norm()));
        }
        let d = 1e-4;
        let mut lap = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                let fd = if i == j {
                    (at(&[(i, d)])? - 2.0 * at(&[])? + at(&[(i, -d)])?) / (d * d)
                } else {
                    (at(&[(i, d), (j, d)])? - at(&[(i, d), (j, -d)])? - at(&[(i, -d), (j, d)])?
                        + at(&[(i, -d), (j, -d)])?)
                        / (4.0 * d * d)
                };
                wh = wh.max((fd - hs[(i, j)]).abs());
                if i == j {
                    lap += fd;
                }
            }
        }
        wtrace = wtrace.max((lap - hs.trace()).abs());
    }
    out.push(IdentityCheck::new("grad_finite_difference", wg, 1e-6, 100));
    out.push(IdentityCheck::new("hess_finite_difference", wh, 1e-5, 100));
    out.push(IdentityCheck::new("hess_trace_laplacian", wtrace, 1e-4, 100));

    // B is positive semidefinite; H <= 0 and F >= 3/t on Q.
    let mut wpsd = 0.0f64;
    for _ in 0..200 {
        let x = random_cone_point(&mut rng, eps, dim, (1.0, 10.0));
        let eig = SymmetricEigen::new(hess_b(&x, params)?).eigenvalues;
        wpsd = wpsd.max(-eig.min());
    }
    out.push(IdentityCheck::new("b_positive_semidefinite", wpsd, 1e-10, 200));

    let mut bad = 0usize;
    for _ in 0..200 {
        let mut x = random_cone_point(&mut rng, eps, dim, (1.0, 10.0));
        if x[0] <= 1.0 {
            let scale = 1.5 / x[0].max(1e-3);
            x.iter_mut().for_each(|v| *v *= scale);
        }
        let t = rng.gen_range(0.01..1.0);
        let (h, f) = field_h_f(&x, t, rng.gen_range(0.0..10.0), rng.gen_range(1.0..60.0), params)?;
        if h > 0.0 || f < 3.0 / t {
            bad += 1;
        }
    }
    out.push(IdentityCheck::new("h_nonpositive_f_lower_bound", bad as f64, 0.0, 200));

    // Backward heat kernel solves the adjoint equation exactly.
    let kernel = BackwardHeatKernel { dim };
    let mut wk = 0.0f64;
    for _ in 0..100 {
        let x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect();
        wk = wk.max(heat_residual(&kernel, &x, rng.gen_range(0.0..0.9)).abs());
    }
    out.push(IdentityCheck::new("backward_heat_kernel_residual", wk, 1e-10, 100));

    Ok(out)
}
