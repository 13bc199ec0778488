use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bump::{CompactSupport, SupportBox};
use super::grid::GridSpec;
use crate::error::{domain, Error, Result};
use crate::weights::{cone_contains, log_weight, WeightParams};

/// Fraction of interior nodes that must keep a nonzero normalized weight.
pub const MIN_ACTIVE_FRACTION: f64 = 0.01;

/// Both sides of the weighted inequality for one `(a, K)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CarlemanReport {
    pub a: f64,
    #[serde(rename = "K")]
    pub k: f64,
    /// `int w (u^2 + |grad u|^2)`, scaled by `exp(-log_normalizer)`.
    pub lhs: f64,
    /// `int w (u_t + Lap u)^2`, same scaling.
    pub rhs: f64,
    pub ratio: f64,
    pub log_normalizer: f64,
    pub max_abs_log_weight: f64,
    pub active_nodes: usize,
    pub grid: GridSpec,
    pub pass: bool,
}

/// Raw weighted sums returned by [`weighted_integrals`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedSums {
    pub lhs: f64,
    pub rhs: f64,
    pub log_normalizer: f64,
    pub max_abs_log_weight: f64,
    pub active_nodes: usize,
    pub interior_nodes: usize,
}

struct Axes {
    space: Vec<(Vec<f64>, Vec<f64>)>,
    time: (Vec<f64>, Vec<f64>),
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl Axes {
    fn new(grid: &GridSpec, bx: &SupportBox) -> Self {
        let dim = grid.counts.len() - 1;
        let space = (0..dim)
            .map(|i| grid.axis(grid.counts[i], bx.lo[i], bx.hi[i]))
            .collect();
        let time = grid.axis(grid.counts[dim], bx.lo[dim], bx.hi[dim]);
        Self {
            space,
            time,
            lo: bx.lo.clone(),
            hi: bx.hi.clone(),
        }
    }

    fn interior(&self, axis: usize, v: f64) -> bool {
        self.lo[axis] < v && v < self.hi[axis]
    }

    /// Visits every spatial node as `(x, weight, interior)`.
    fn for_each_space(&self, mut visit: impl FnMut(&[f64], f64, bool) -> Result<()>) -> Result<()> {
        let dim = self.space.len();
        let mut idx = vec![0usize; dim];
        let mut x = vec![0.0; dim];
        loop {
            let mut w = 1.0;
            let mut inside = true;
            for i in 0..dim {
                x[i] = self.space[i].0[idx[i]];
                w *= self.space[i].1[idx[i]];
                inside &= self.interior(i, x[i]);
            }
            visit(&x, w, inside)?;
            let mut axis = 0;
            loop {
                if axis == dim {
                    return Ok(());
                }
                idx[axis] += 1;
                if idx[axis] < self.space[axis].0.len() {
                    break;
                }
                idx[axis] = 0;
                axis += 1;
            }
        }
    }
}

/// Tensor-product sums of `e^(L - L_max) (u^2 + |grad u|^2)` and
/// `e^(L - L_max) (u_t + Lap u)^2` over the support box of `u`.
///
/// `L_max` is the largest log weight over interior nodes. Each time slice is
/// summed sequentially and slices are combined in index order, so the result
/// does not depend on the thread count.
pub fn weighted_integrals<U, W>(u: &U, grid: &GridSpec, log_w: W) -> Result<WeightedSums>
where
    U: CompactSupport + Sync,
    W: Fn(&[f64], f64) -> Result<f64> + Sync,
{
    let bx = u.support_box();
    if grid.counts.len() != u.dim() + 1 {
        return domain(format!(
            "grid has {} axes but the test function needs {}",
            grid.counts.len(),
            u.dim() + 1
        ));
    }
    let axes = Axes::new(grid, &bx);
    let t_axis = axes.space.len();
    let slices: Vec<usize> = (0..axes.time.0.len()).collect();

    let peaks = slices
        .par_iter()
        .map(|&k| {
            let t = axes.time.0[k];
            let (mut peak, mut max_abs, mut interior) = (f64::NEG_INFINITY, 0.0f64, 0usize);
            if axes.interior(t_axis, t) {
                axes.for_each_space(|x, _, inside| {
                    if inside {
                        let l = log_w(x, t)?;
                        peak = peak.max(l);
                        max_abs = max_abs.max(l.abs());
                        interior += 1;
                    }
                    Ok(())
                })?;
            }
            Ok((peak, max_abs, interior))
        })
        .collect::<Result<Vec<_>>>()?;

    let interior_nodes: usize = peaks.iter().map(|p| p.2).sum();
    let log_normalizer = peaks.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let max_abs_log_weight = peaks.iter().map(|p| p.1).fold(0.0, f64::max);
    if !log_normalizer.is_finite() || !max_abs_log_weight.is_finite() {
        return Err(Error::DegenerateWeight {
            active: 0,
            total: interior_nodes,
        });
    }

    let parts = slices
        .par_iter()
        .map(|&k| {
            let (t, wt) = (axes.time.0[k], axes.time.1[k]);
            let (mut lhs, mut rhs, mut active) = (0.0, 0.0, 0usize);
            if axes.interior(t_axis, t) {
                axes.for_each_space(|x, wx, inside| {
                    if !inside {
                        return Ok(());
                    }
                    let scale = (log_w(x, t)? - log_normalizer).exp();
                    if scale == 0.0 {
                        return Ok(());
                    }
                    active += 1;
                    let j = u.jet(x, t);
                    let grad2: f64 = j.gradient.iter().map(|g| g * g).sum();
                    let residual = j.dt + j.laplacian;
                    lhs += wx * wt * scale * (j.value * j.value + grad2);
                    rhs += wx * wt * scale * residual * residual;
                    Ok(())
                })?;
            }
            Ok((lhs, rhs, active))
        })
        .collect::<Result<Vec<_>>>()?;

    let (lhs, rhs, active_nodes) = parts
        .iter()
        .fold((0.0, 0.0, 0), |acc, p| (acc.0 + p.0, acc.1 + p.1, acc.2 + p.2));

    if (active_nodes as f64) < MIN_ACTIVE_FRACTION * interior_nodes as f64 {
        return Err(Error::DegenerateWeight {
            active: active_nodes,
            total: interior_nodes,
        });
    }
    Ok(WeightedSums {
        lhs,
        rhs,
        log_normalizer,
        max_abs_log_weight,
        active_nodes,
        interior_nodes,
    })
}

/// Checks that the closed box lies in `{x_1 > 1, x_1 > eps |x|} x (0, 1)`.
pub fn check_support(bx: &SupportBox, epsilon: f64) -> Result<()> {
    let dim = bx.lo.len() - 1;
    if !(bx.lo[dim] > 0.0 && bx.hi[dim] < 1.0) {
        return Err(Error::SupportViolation(format!(
            "time support [{}, {}] must lie in (0, 1)",
            bx.lo[dim], bx.hi[dim]
        )));
    }
    for corner in 0..(1usize << dim) {
        let x: Vec<f64> = (0..dim)
            .map(|i| if corner >> i & 1 == 1 { bx.hi[i] } else { bx.lo[i] })
            .collect();
        if !(x[0] > 1.0 && cone_contains(&x, epsilon)) {
            return Err(Error::SupportViolation(format!(
                "corner {x:?} is outside the truncated cone"
            )));
        }
    }
    Ok(())
}

/// Weighted Carleman integrals for one `(a, K)`.
pub fn carleman_integrals<U: CompactSupport + Sync>(
    u: &U,
    params: &WeightParams,
    a: f64,
    k: f64,
    grid: &GridSpec,
) -> Result<CarlemanReport> {
    if !(a >= 0.0) || !a.is_finite() {
        return domain(format!("a = {a} must be nonnegative"));
    }
    if !(k > 0.0) || !k.is_finite() {
        return domain(format!("K = {k} must be positive"));
    }
    check_support(&u.support_box(), params.epsilon)?;
    let sums = weighted_integrals(u, grid, |x, t| log_weight(x, t, a, k, params))?;
    let ratio = if sums.rhs > 0.0 {
        sums.lhs / sums.rhs
    } else if sums.lhs > 0.0 {
        f64::INFINITY
    } else {
        0.0
    };
    Ok(CarlemanReport {
        a,
        k,
        lhs: sums.lhs,
        rhs: sums.rhs,
        ratio,
        log_normalizer: sums.log_normalizer,
        max_abs_log_weight: sums.max_abs_log_weight,
        active_nodes: sums.active_nodes,
        grid: grid.clone(),
        pass: sums.lhs <= sums.rhs,
    })
}

/// Runs [`carleman_integrals`] for each `a`, doubling `K` from `k_init` up to
/// `k_cap` until the inequality holds; reports the first passing `K` or the
/// failure at the cap.
pub fn verify_carleman<U: CompactSupport + Sync>(
    u: &U,
    params: &WeightParams,
    a_list: &[f64],
    k_init: f64,
    k_cap: f64,
    grid: &GridSpec,
) -> Result<Vec<CarlemanReport>> {
    if !(k_init > 0.0 && k_init <= k_cap) {
        return domain(format!("need 0 < K_init = {k_init} <= K_cap = {k_cap}"));
    }
    a_list
        .iter()
        .map(|&a| {
            let mut k = k_init;
            loop {
                let report = carleman_integrals(u, params, a, k, grid)?;
                if report.pass || 2.0 * k > k_cap {
                    return Ok(report);
                }
                k *= 2.0;
            }
        })
        .collect()
}

/// Unweighted tensor-product integral of `f` over a box.
pub fn integrate_box<F>(bx: &SupportBox, grid: &GridSpec, f: F) -> Result<f64>
where
    F: Fn(&[f64], f64) -> f64 + Sync,
{
    if grid.counts.len() != bx.lo.len() || bx.lo.len() != bx.hi.len() {
        return domain("grid and box dimensions differ");
    }
    let axes = Axes::new(grid, bx);
    let parts = (0..axes.time.0.len())
        .into_par_iter()
        .map(|k| {
            let (t, wt) = (axes.time.0[k], axes.time.1[k]);
            let mut acc = 0.0;
            axes.for_each_space(|x, wx, _| {
                acc += wx * wt * f(x, t);
                Ok(())
            })?;
            Ok(acc)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(parts.iter().sum())
}
