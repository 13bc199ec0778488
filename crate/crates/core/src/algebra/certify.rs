use serde::{Deserialize, Serialize};

use super::interval::Interval;
use super::power_sum::PowerSum;
use crate::error::{domain, Result};

/// Sign claimed for a power sum over an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignClaim {
    NonNegative,
    Positive,
    NonPositive,
    Negative,
}

impl SignClaim {
    fn is_strict(self) -> bool {
        matches!(self, SignClaim::Positive | SignClaim::Negative)
    }

    fn is_upper(self) -> bool {
        matches!(self, SignClaim::NonPositive | SignClaim::Negative)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            SignClaim::NonNegative => ">= 0",
            SignClaim::Positive => "> 0",
            SignClaim::NonPositive => "<= 0",
            SignClaim::Negative => "< 0",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictKind {
    Positive,
    Negative,
    NonNegativeWithZeros,
    NonPositiveWithZeros,
    /// A point where the sum is negative refutes a lower-sign claim.
    NegativeSomewhere,
    /// A point where the sum is positive refutes an upper-sign claim.
    PositiveSomewhere,
    Indeterminate,
}

/// Outcome of [`certify_sign`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignVerdict {
    pub kind: VerdictKind,
    pub claim: SignClaim,
    /// Point `h` refuting the claim (refutations only).
    pub witness: Option<f64>,
    /// Point value of the sum at `witness`.
    pub witness_value: Option<f64>,
    /// Smallest certified distance from zero over the accepted leaves that do
    /// not touch a declared zero.
    pub margin: f64,
    /// Declared zeros that were needed to close the proof.
    pub zeros: Vec<f64>,
    /// Worst enclosure straddling zero (indeterminate verdicts only).
    pub residual: Option<Interval>,
}

impl SignVerdict {
    /// True when the verdict proves `self.claim`.
    pub fn confirms(&self) -> bool {
        use VerdictKind::*;
        match self.claim {
            SignClaim::NonNegative => matches!(self.kind, Positive | NonNegativeWithZeros),
            SignClaim::Positive => self.kind == Positive,
            SignClaim::NonPositive => matches!(self.kind, Negative | NonPositiveWithZeros),
            SignClaim::Negative => self.kind == Negative,
        }
    }

    pub fn is_refuted(&self) -> bool {
        matches!(
            self.kind,
            VerdictKind::NegativeSomewhere | VerdictKind::PositiveSomewhere
        )
    }
}

/// Tolerance and recursion limit for the bisection certifier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifyOptions {
    pub tol: f64,
    pub max_depth: u32,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_depth: 60,
        }
    }
}

impl CertifyOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

fn near(h: f64, z: f64) -> bool {
    (h - z).abs() <= 1e-12 * z.abs().max(1.0)
}

/// Proves or refutes a sign claim for `p` over `range` by adaptive bisection.
///
/// A leaf is accepted once its enclosure clears zero by more than `tol`, or,
/// for non-strict claims, when it contains one of `known_zeros` and the
/// enclosure lies within `tol` of the allowed side. Midpoints of rejected
/// leaves are point-evaluated; the first violating point in depth-first order
/// is returned as a witness. Leaves still undecided at `max_depth` make the
/// verdict indeterminate unless a refutation is found elsewhere.
pub fn certify_sign(
    p: &PowerSum,
    range: Interval,
    claim: SignClaim,
    known_zeros: &[f64],
    opts: CertifyOptions,
) -> Result<SignVerdict> {
    if !(range.lo > 0.0) || !range.hi.is_finite() {
        return domain(format!("certification interval must satisfy lo > 0, got {range}"));
    }
    if !(opts.tol > 0.0) {
        return domain(format!("tol must be positive, got {}", opts.tol));
    }
    if opts.max_depth < 1 {
        return domain("max_depth must be at least 1");
    }

    // Work with q = ±p so that the claim always reads "q >= 0" or "q > 0".
    let sign = if claim.is_upper() { -1.0 } else { 1.0 };
    let q = p.scale(sign);
    let strict = claim.is_strict();
    let zeros: Vec<f64> = if strict {
        Vec::new()
    } else {
        known_zeros.iter().copied().filter(|z| range.contains(*z)).collect()
    };

    let violates = |h: f64, v: f64| {
        if strict {
            v <= 0.0
        } else {
            v < 0.0 && !zeros.iter().any(|&z| near(h, z))
        }
    };

    let refutation = |h: f64, v: f64| SignVerdict {
        kind: if claim.is_upper() {
            VerdictKind::PositiveSomewhere
        } else {
            VerdictKind::NegativeSomewhere
        },
        claim,
        witness: Some(h),
        witness_value: Some(sign * v),
        margin: 0.0,
        zeros: Vec::new(),
        residual: None,
    };

    for h in [range.lo, range.hi] {
        let v = q.eval(h)?;
        if violates(h, v) {
            return Ok(refutation(h, v));
        }
    }

    let mut margin = f64::INFINITY;
    let mut used_zeros: Vec<f64> = Vec::new();
    let mut worst: Option<Interval> = None;
    let mut stack = vec![(range, 0u32)];

    while let Some((leaf, depth)) = stack.pop() {
        let enc = q.eval_interval(leaf)?;
        if enc.lo > opts.tol {
            margin = margin.min(enc.lo);
            continue;
        }
        if let Some(&z) = zeros.iter().find(|&&z| leaf.contains(z)) {
            if enc.lo >= -opts.tol {
                if !used_zeros.contains(&z) {
                    used_zeros.push(z);
                }
                continue;
            }
        }

        let mid = leaf.mid();
        let v = q.eval(mid)?;
        if violates(mid, v) {
            return Ok(refutation(mid, v));
        }

        let splittable = mid > leaf.lo && mid < leaf.hi;
        if depth + 1 >= opts.max_depth || !splittable {
            if worst.is_none_or(|w| enc.lo < w.lo) {
                worst = Some(enc);
            }
            continue;
        }
        let (left, right) = leaf.bisect();
        stack.push((right, depth + 1));
        stack.push((left, depth + 1));
    }

    if let Some(w) = worst {
        let residual = if claim.is_upper() { -w } else { w };
        return Ok(SignVerdict {
            kind: VerdictKind::Indeterminate,
            claim,
            witness: None,
            witness_value: None,
            margin: 0.0,
            zeros: Vec::new(),
            residual: Some(residual),
        });
    }

    used_zeros.sort_by(f64::total_cmp);
    let kind = match (claim.is_upper(), used_zeros.is_empty()) {
        (false, true) => VerdictKind::Positive,
        (false, false) => VerdictKind::NonNegativeWithZeros,
        (true, true) => VerdictKind::Negative,
        (true, false) => VerdictKind::NonPositiveWithZeros,
    };
    Ok(SignVerdict {
        kind,
        claim,
        witness: None,
        witness_value: None,
        margin: if margin.is_finite() { margin } else { 0.0 },
        zeros: used_zeros,
        residual: None,
    })
}
