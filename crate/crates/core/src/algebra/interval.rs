use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Relative outward inflation applied after every arithmetic operation.
pub const REL_INFLATION: f64 = 1.0 / (1u64 << 50) as f64;
/// Absolute outward inflation, keeps enclosures nondegenerate near zero.
pub const ABS_INFLATION: f64 = 1e-300;

/// Closed interval `[lo, hi]` with outward-inflated arithmetic.
///
/// Directed rounding is emulated: each operation widens its result by
/// `REL_INFLATION` relative plus `ABS_INFLATION` absolute, which dominates the
/// half-ulp error of a round-to-nearest result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

#[inline]
fn down(v: f64, units: f64) -> f64 {
    v - v.abs() * REL_INFLATION * units - ABS_INFLATION
}

#[inline]
fn up(v: f64, units: f64) -> f64 {
    v + v.abs() * REL_INFLATION * units + ABS_INFLATION
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return domain(format!("interval bounds must be finite, got [{lo}, {hi}]"));
        }
        if lo > hi {
            return domain(format!("interval lower bound {lo} exceeds upper bound {hi}"));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    /// Widens `[lo, hi]` outward by `units` multiples of the relative inflation.
    pub(crate) fn inflated(lo: f64, hi: f64, units: f64) -> Self {
        Self {
            lo: down(lo, units),
            hi: up(hi, units),
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Halves at the midpoint.
    pub fn bisect(&self) -> (Interval, Interval) {
        let m = self.mid();
        (Interval { lo: self.lo, hi: m }, Interval { lo: m, hi: self.hi })
    }

    pub fn scale(&self, c: f64) -> Interval {
        let (a, b) = (self.lo * c, self.hi * c);
        Interval::inflated(a.min(b), a.max(b), 1.0)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval::inflated(self.lo + rhs.lo, self.hi + rhs.hi, 1.0)
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval::inflated(self.lo - rhs.hi, self.hi - rhs.lo, 1.0)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let p = [self.lo * rhs.lo, self.lo * rhs.hi, self.hi * rhs.lo, self.hi * rhs.hi];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::inflated(lo, hi, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_inverted_and_nonfinite() {
        assert!(Interval::new(1.0, 0.0).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn arithmetic_encloses_exact_results() {
        let a = Interval::new(0.1, 0.3).unwrap();
        let b = Interval::new(-0.2, 0.7).unwrap();
        let s = a + b;
        assert!(s.lo <= 0.1 + -0.2 && s.hi >= 0.3 + 0.7);
        let d = a - b;
        assert!(d.lo <= 0.1 - 0.7 && d.hi >= 0.3 + 0.2);
        let p = a * b;
        assert!(p.contains(0.3 * -0.2) && p.contains(0.3 * 0.7));
        assert!(p.lo < 0.0 && p.hi > 0.0);
    }

    #[test]
    fn bisect_covers_parent() {
        let a = Interval::new(0.25, 1.0).unwrap();
        let (l, r) = a.bisect();
        assert_eq!(l.lo, a.lo);
        assert_eq!(r.hi, a.hi);
        assert_eq!(l.hi, r.lo);
    }
}
