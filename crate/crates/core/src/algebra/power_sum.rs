use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::interval::Interval;
use crate::error::{domain, Result};

/// Exponents closer than this are treated as the same monomial.
const EXPONENT_MERGE_TOL: f64 = 1e-12;

/// One monomial `coeff * h^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: f64,
    pub exponent: f64,
}

/// A finite sum of real-exponent monomials in one positive variable `h`.
///
/// Terms are kept sorted by strictly increasing exponent, like exponents are
/// merged and exact-zero coefficients are dropped. Negative exponents are
/// allowed: the variable lives on `(0, 1]`, where every monomial is smooth and
/// monotone.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PowerSum {
    terms: Vec<Term>,
}

impl PowerSum {
    /// Builds a sum from arbitrary `(coeff, exponent)` pairs.
    ///
    /// Panics if any coefficient or exponent is not finite.
    pub fn new(pairs: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut terms: Vec<Term> = pairs
            .into_iter()
            .map(|(coeff, exponent)| {
                assert!(
                    coeff.is_finite() && exponent.is_finite(),
                    "non-finite term {coeff} h^{exponent}"
                );
                Term { coeff, exponent }
            })
            .collect();
        terms.sort_by(|a, b| a.exponent.total_cmp(&b.exponent));

        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if (t.exponent - last.exponent).abs() <= EXPONENT_MERGE_TOL => {
                    last.coeff += t.coeff;
                }
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coeff != 0.0);
        Self { terms: merged }
    }

    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new([(c, 0.0)])
    }

    pub fn monomial(coeff: f64, exponent: f64) -> Self {
        Self::new([(coeff, exponent)])
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `h^exponent`, zero if absent.
    pub fn coefficient(&self, exponent: f64) -> f64 {
        self.terms
            .iter()
            .find(|t| (t.exponent - exponent).abs() <= EXPONENT_MERGE_TOL)
            .map_or(0.0, |t| t.coeff)
    }

    /// Term with the largest exponent.
    pub fn leading(&self) -> Option<Term> {
        self.terms.last().copied()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.abs()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::new(self.terms.iter().map(|t| (t.coeff * c, t.exponent)))
    }

    /// Multiplies every term by `h^shift`.
    pub fn shift(&self, shift: f64) -> Self {
        Self::new(self.terms.iter().map(|t| (t.coeff, t.exponent + shift)))
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(1.0), |acc, _| &acc * self)
    }

    /// Point evaluation in round-to-nearest arithmetic.
    pub fn eval(&self, h: f64) -> Result<f64> {
        if !(h > 0.0) || !h.is_finite() {
            return domain(format!("power sums are evaluated at h > 0, got {h}"));
        }
        Ok(self
            .terms
            .iter()
            .map(|t| {
                if t.exponent == 0.0 {
                    t.coeff
                } else {
                    t.coeff * h.powf(t.exponent)
                }
            })
            .sum())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.terms
                .iter()
                .filter(|t| t.exponent != 0.0)
                .map(|t| (t.coeff * t.exponent, t.exponent - 1.0)),
        )
    }

    /// Enclosure of the range of the sum over `range`.
    ///
    /// Each monomial is monotone on a positive interval, so its range is the
    /// hull of its endpoint values; powers are computed as `exp(p ln h)` and
    /// inflated to cover the transcendental error, which grows with `|p ln h|`.
    pub fn eval_interval(&self, range: Interval) -> Result<Interval> {
        if !(range.lo > 0.0) {
            return domain(format!("power sums are enclosed on intervals with lo > 0, got {range}"));
        }
        let mut acc = Interval::point(0.0);
        for t in &self.terms {
            let term = if t.exponent == 0.0 {
                Interval::point(t.coeff)
            } else {
                power_enclosure(range, t.exponent).scale(t.coeff)
            };
            acc = acc + term;
        }
        Ok(acc)
    }
}

fn power_enclosure(range: Interval, p: f64) -> Interval {
    let at = |h: f64| {
        let arg = p * h.ln();
        (arg.exp(), 4.0 + 2.0 * arg.abs())
    };
    let (a, ua) = at(range.lo);
    let (b, ub) = at(range.hi);
    let units = ua.max(ub);
    Interval::inflated(a.min(b), a.max(b), units)
}

impl fmt::Display for PowerSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let sign = if t.coeff < 0.0 {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else {
                write!(f, "{sign}")?;
            }
            if t.exponent == 0.0 {
                write!(f, "{}", t.coeff.abs())?;
            } else {
                write!(f, "{}*h^{}", t.coeff.abs(), t.exponent)?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a PowerSum> for &'a PowerSum {
    type Output = PowerSum;
    fn add(self, rhs: &PowerSum) -> PowerSum {
        PowerSum::new(self.terms.iter().chain(rhs.terms.iter()).map(|t| (t.coeff, t.exponent)))
    }
}

impl<'a> Sub<&'a PowerSum> for &'a PowerSum {
    type Output = PowerSum;
    fn sub(self, rhs: &PowerSum) -> PowerSum {
        self + &(-rhs)
    }
}

impl Neg for &PowerSum {
    type Output = PowerSum;
    fn neg(self) -> PowerSum {
        self.scale(-1.0)
    }
}

impl<'a> Mul<&'a PowerSum> for &'a PowerSum {
    type Output = PowerSum;
    fn mul(self, rhs: &PowerSum) -> PowerSum {
        PowerSum::new(self.terms.iter().flat_map(|a| {
            rhs.terms
                .iter()
                .map(move |b| (a.coeff * b.coeff, a.exponent + b.exponent))
        }))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<PowerSum> for PowerSum {
            type Output = PowerSum;
            fn $method(self, rhs: PowerSum) -> PowerSum {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn f(m: f64, eps: f64) -> PowerSum {
        PowerSum::new([(1.0, m), (-eps.powf(m), 0.0)])
    }

    #[test]
    fn eval_examples() {
        assert!(f(2.46, 0.6495).eval(0.6495).unwrap().abs() < 1e-15);
        assert_eq!(PowerSum::constant(1.0).eval(0.37).unwrap(), 1.0);
        let p = PowerSum::new([(2.0, 1.0), (3.0, 2.0)]);
        assert_relative_eq!(p.eval(0.5).unwrap(), 1.75, max_relative = 1e-15);
        assert!(p.eval(0.0).is_err());
        assert!(p.eval(-1.0).is_err());
    }

    #[test]
    fn construction_merges_and_sorts() {
        let p = PowerSum::new([
            (1.0, 2.0),
            (2.0, 0.0),
            (3.0, 2.0),
            (0.0, 5.0),
            (1.0, -1.0),
            (-1.0, -1.0),
        ]);
        assert_eq!(
            p.terms(),
            &[
                Term {
                    coeff: 2.0,
                    exponent: 0.0
                },
                Term {
                    coeff: 4.0,
                    exponent: 2.0
                }
            ]
        );
    }

    #[test]
    fn derivative_examples() {
        let m = 2.46;
        let d = f(m, 0.6).derivative();
        assert_eq!(
            d.terms(),
            &[Term {
                coeff: m,
                exponent: m - 1.0
            }]
        );
        assert!(PowerSum::constant(5.0).derivative().is_zero());
        let d = PowerSum::monomial(3.0, 2.0).derivative();
        assert_eq!(
            d.terms(),
            &[Term {
                coeff: 6.0,
                exponent: 1.0
            }]
        );
    }

    #[test]
    fn product_examples() {
        let (m, eps) = (2.46, 0.6495);
        let p = f(m, eps);
        let sq = &p * &p;
        let em = eps.powf(m);
        assert_relative_eq!(sq.coefficient(2.0 * m), 1.0);
        assert_relative_eq!(sq.coefficient(m), -2.0 * em);
        assert_relative_eq!(sq.coefficient(0.0), em * em);
        assert_eq!(sq.terms().len(), 3);
        assert!((&p * &PowerSum::zero()).is_zero());
    }

    #[test]
    fn interval_examples() {
        let sq = PowerSum::monomial(1.0, 2.0);
        let e = sq.eval_interval(Interval::new(0.5, 1.0).unwrap()).unwrap();
        assert!(e.lo <= 0.25 && e.hi >= 1.0);
        assert!(e.lo > 0.25 - 1e-14 && e.hi < 1.0 + 1e-14);

        let c = PowerSum::constant(-2.0);
        let e = c.eval_interval(Interval::new(0.1, 0.9).unwrap()).unwrap();
        assert!(e.contains(-2.0) && e.width() < 1e-14);

        let g = f(2.46, 0.6);
        let e = g.eval_interval(Interval::new(0.6, 1.0).unwrap()).unwrap();
        let top = 1.0 - 0.6f64.powf(2.46);
        assert!(e.lo <= 0.0 && e.lo > -1e-14);
        assert!(e.hi >= top && e.hi < top + 1e-14);
        assert_relative_eq!(top, 0.7154, epsilon = 1e-4);

        assert!(g.eval_interval(Interval::new(0.0, 1.0).unwrap()).is_err());
    }

    fn arb_sum() -> impl Strategy<Value = PowerSum> {
        prop::collection::vec((-10.0f64..10.0, 0.0f64..6.0), 0..6).prop_map(PowerSum::new)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn product_matches_pointwise(p in arb_sum(), q in arb_sum(), h in 0.05f64..1.0) {
            let lhs = (&p * &q).eval(h).unwrap();
            let rhs = p.eval(h).unwrap() * q.eval(h).unwrap();
            let scale = (&p * &q).terms().iter().map(|t| (t.coeff * h.powf(t.exponent)).abs()).sum::<f64>();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(1e-300));
        }

        #[test]
        fn enclosure_is_sound(p in arb_sum(), a in 0.01f64..1.0, b in 0.01f64..1.0, seeds in prop::collection::vec(0.0f64..1.0, 1000)) {
            let range = Interval::new(a.min(b), a.max(b)).unwrap();
            let e = p.eval_interval(range).unwrap();
            for s in seeds {
                let h = range.lo + s * range.width();
                prop_assert!(e.contains(p.eval(h).unwrap()));
            }
        }

        #[test]
        fn derivative_matches_central_difference(p in arb_sum(), h in 0.2f64..0.9) {
            let d = 1e-6;
            let fd = (p.eval(h + d).unwrap() - p.eval(h - d).unwrap()) / (2.0 * d);
            let exact = p.derivative().eval(h).unwrap();
            let scale = p.derivative().terms().iter().map(|t| (t.coeff * h.powf(t.exponent)).abs()).sum::<f64>();
            prop_assert!((fd - exact).abs() <= 1e-6 * scale.max(1.0));
        }
    }
}
