use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Value and derivatives of a space-time function at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub gradient: Vec<f64>,
    pub laplacian: f64,
    pub dt: f64,
}

impl Jet {
    pub fn zero(dim: usize) -> Self {
        Self {
            value: 0.0,
            gradient: vec![0.0; dim],
            laplacian: 0.0,
            dt: 0.0,
        }
    }
}

/// A smooth function of `(x, t)` with closed-form derivatives.
pub trait SpaceTimeFunction {
    fn dim(&self) -> usize;
    fn jet(&self, x: &[f64], t: f64) -> Jet;
}

/// Axis-aligned box `prod [lo_i, hi_i]`; the last axis is time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl SupportBox {
    pub fn hull(&self, other: &SupportBox) -> SupportBox {
        SupportBox {
            lo: self.lo.iter().zip(&other.lo).map(|(a, b)| a.min(*b)).collect(),
            hi: self.hi.iter().zip(&other.hi).map(|(a, b)| a.max(*b)).collect(),
        }
    }
}

/// A space-time function vanishing outside a box.
pub trait CompactSupport: SpaceTimeFunction {
    fn support_box(&self) -> SupportBox;
}

/// One-dimensional bump `b(z) = exp(-1/(1 - z^2))` with `b'` and `b''`.
pub(crate) fn bump_1d(z: f64) -> (f64, f64, f64) {
    if z.abs() >= 1.0 {
        return (0.0, 0.0, 0.0);
    }
    let w = 1.0 - z * z;
    let b = (-1.0 / w).exp();
    let s = -2.0 * z / (w * w);
    let ds = -2.0 / (w * w) - 8.0 * z * z / (w * w * w);
    (b, b * s, b * (s * s + ds))
}

/// Tensor-product bump `A prod_i b((x_i - c_i)/s_i) b((t - c_t)/s_t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BumpFunction {
    pub amplitude: f64,
    /// Space center followed by the time center.
    pub center: Vec<f64>,
    /// Space radii followed by the time radius.
    pub radii: Vec<f64>,
}

impl BumpFunction {
    pub fn new(amplitude: f64, center: Vec<f64>, radii: Vec<f64>) -> Result<Self> {
        if center.len() < 3 || center.len() != radii.len() {
            return domain("bump needs matching center/radii of length dim + 1 >= 3");
        }
        if !amplitude.is_finite() || center.iter().any(|c| !c.is_finite()) {
            return domain("bump amplitude and center must be finite");
        }
        if radii.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
            return domain("bump radii must be positive");
        }
        Ok(Self {
            amplitude,
            center,
            radii,
        })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            amplitude: self.amplitude * factor,
            ..self.clone()
        }
    }

    pub fn shifted(&self, shift: &[f64]) -> Self {
        let center = self
            .center
            .iter()
            .zip(shift.iter().chain(std::iter::repeat(&0.0)))
            .map(|(c, s)| c + s)
            .collect();
        Self { center, ..self.clone() }
    }
}

impl SpaceTimeFunction for BumpFunction {
    fn dim(&self) -> usize {
        self.center.len() - 1
    }

    fn jet(&self, x: &[f64], t: f64) -> Jet {
        let dim = self.dim();
        let mut factors = Vec::with_capacity(dim);
        for ((xi, c), s) in x.iter().zip(&self.center).zip(&self.radii).take(dim) {
            let (b, db, d2b) = bump_1d((xi - c) / s);
            if b == 0.0 {
                return Jet::zero(dim);
            }
            factors.push((b, db / s, d2b / (s * s)));
        }
        let st = self.radii[dim];
        let (bt, dbt, _) = bump_1d((t - self.center[dim]) / st);
        if bt == 0.0 {
            return Jet::zero(dim);
        }
        let space: f64 = factors.iter().map(|f| f.0).product();
        let a = self.amplitude;
        let gradient = factors.iter().map(|&(b, db, _)| a * space / b * db * bt).collect();
        let laplacian = factors.iter().map(|&(b, _, d2b)| a * space / b * d2b * bt).sum();
        Jet {
            value: a * space * bt,
            gradient,
            laplacian,
            dt: a * space * dbt / st,
        }
    }
}

impl CompactSupport for BumpFunction {
    fn support_box(&self) -> SupportBox {
        SupportBox {
            lo: self.center.iter().zip(&self.radii).map(|(c, r)| c - r).collect(),
            hi: self.center.iter().zip(&self.radii).map(|(c, r)| c + r).collect(),
        }
    }
}

pub const MAX_BUMPS: usize = 4;

/// Sum of up to four bumps of equal dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BumpSum {
    bumps: Vec<BumpFunction>,
}

impl BumpSum {
    pub fn new(bumps: Vec<BumpFunction>) -> Result<Self> {
        if bumps.is_empty() || bumps.len() > MAX_BUMPS {
            return domain(format!("a bump sum holds 1 to {MAX_BUMPS} bumps, got {}", bumps.len()));
        }
        let dim = bumps[0].dim();
        if bumps.iter().any(|b| b.dim() != dim) {
            return domain("all bumps in a sum must share the dimension");
        }
        Ok(Self { bumps })
    }

    pub fn bumps(&self) -> &[BumpFunction] {
        &self.bumps
    }
}

impl SpaceTimeFunction for BumpSum {
    fn dim(&self) -> usize {
        self.bumps[0].dim()
    }

    fn jet(&self, x: &[f64], t: f64) -> Jet {
        self.bumps.iter().fold(Jet::zero(self.dim()), |mut acc, b| {
            let j = b.jet(x, t);
            acc.value += j.value;
            acc.laplacian += j.laplacian;
            acc.dt += j.dt;
            for (g, v) in acc.gradient.iter_mut().zip(&j.gradient) {
                *g += v;
            }
            acc
        })
    }
}

impl CompactSupport for BumpSum {
    fn support_box(&self) -> SupportBox {
        let first = self.bumps[0].support_box();
        self.bumps[1..].iter().fold(first, |acc, b| acc.hull(&b.support_box()))
    }
}

/// `u(x, t) = x_1^2`, whose heat residual is identically 2.
#[derive(Debug, Clone, Copy)]
pub struct QuadraticProbe {
    pub dim: usize,
}

impl SpaceTimeFunction for QuadraticProbe {
    fn dim(&self) -> usize {
        self.dim
    }

    fn jet(&self, x: &[f64], _t: f64) -> Jet {
        let mut gradient = vec![0.0; self.dim];
        gradient[0] = 2.0 * x[0];
        Jet {
            value: x[0] * x[0],
            gradient,
            laplacian: 2.0,
            dt: 0.0,
        }
    }
}

/// Heat kernel run backward from `t = 1`: `(4 pi (1 - t))^(-n/2) exp(-|x|^2 / (4 (1 - t)))`.
#[derive(Debug, Clone, Copy)]
pub struct BackwardHeatKernel {
    pub dim: usize,
}

impl SpaceTimeFunction for BackwardHeatKernel {
    fn dim(&self) -> usize {
        self.dim
    }

    fn jet(&self, x: &[f64], t: f64) -> Jet {
        let n = self.dim as f64;
        let s = 1.0 - t;
        if !(s > 0.0) {
            return Jet::zero(self.dim);
        }
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let value = (4.0 * std::f64::consts::PI * s).powf(-n / 2.0) * (-r2 / (4.0 * s)).exp();
        let gradient = x.iter().map(|xi| -xi / (2.0 * s) * value).collect();
        let laplacian = value * (r2 / (4.0 * s * s) - n / (2.0 * s));
        // d/dt = -d/ds and d/ds G = (|x|^2/(4 s^2) - n/(2 s)) G.
        let dt = -laplacian;
        Jet {
            value,
            gradient,
            laplacian,
            dt,
        }
    }
}

/// `u_t + Laplacian u`.
pub fn heat_residual(u: &impl SpaceTimeFunction, x: &[f64], t: f64) -> f64 {
    let j = u.jet(x, t);
    j.dt + j.laplacian
}
