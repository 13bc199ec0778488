//! Sign conditions on the angular profile that make the Carleman quadratic
//! form nonnegative, and their certification on `h in [eps, 1]`.
//!
//! Two routes are provided. [`direct_feasibility`] certifies the profile
//! conditions, `l1 >= 0` and the `l3` lower bound directly. The
//! [`sufficient_route_check`] reproduces the hand argument: a `gamma`
//! splitting condition plus concavity and endpoint checks on `l2` and `l4`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{certify_sign, CertifyOptions, Interval, PowerSum, SignClaim, SignVerdict};
use crate::error::Result;
use crate::weights::{build_f, WeightParams};

/// Relative slack on the `l3` lower bound, which is attained at `h = eps`.
pub const L3_SLACK: f64 = 1e-9;

pub const LEMMA31_I: &str = "lemma31_i";
pub const LEMMA31_II: &str = "lemma31_ii";
pub const LEMMA31_III: &str = "lemma31_iii";
pub const LEMMA31_IV: &str = "lemma31_iv";
pub const GAMMA_COND: &str = "gamma_cond";
pub const L1_DIRECT: &str = "l1_direct";
pub const L2_CONCAVITY: &str = "l2_concavity";
pub const L2_AT_EPS: &str = "l2_at_eps";
pub const L2_AT_1: &str = "l2_at_1";
pub const L4_CONCAVITY: &str = "l4_concavity";
pub const L4_AT_EPS: &str = "l4_at_eps";
pub const L4_AT_1: &str = "l4_at_1";
pub const L3_LOWER_BOUND: &str = "l3_lower_bound";

/// The four profile expressions whose signs make `B` positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct Lemma31Exprs {
    /// `f`
    pub f: PowerSum,
    /// `f''`
    pub convexity: PowerSum,
    /// `(a^2 - 2a) f + (3 - 2a) h f' + h^2 f''`
    pub radial: PowerSum,
    /// `(a - 1)^2 f'^2 + (2a - a^2) f f'' - h f' f''`
    pub discriminant: PowerSum,
}

pub fn build_lemma31(params: &WeightParams) -> Lemma31Exprs {
    let a = params.alpha;
    let f = build_f(params.m, params.epsilon);
    let df = f.derivative();
    let d2f = df.derivative();
    let radial = &(&f.scale(a * a - 2.0 * a) + &df.shift(1.0).scale(3.0 - 2.0 * a)) + &d2f.shift(2.0);
    let discriminant =
        &(&(&df * &df).scale((a - 1.0).powi(2)) + &(&f * &d2f).scale(2.0 * a - a * a)) - &(&df * &d2f).shift(1.0);
    Lemma31Exprs {
        f,
        convexity: d2f,
        radial,
        discriminant,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma31Verdicts {
    pub i: SignVerdict,
    pub ii: SignVerdict,
    pub iii: SignVerdict,
    pub iv: SignVerdict,
}

impl Lemma31Verdicts {
    pub fn all_confirm(&self) -> bool {
        [&self.i, &self.ii, &self.iii, &self.iv].iter().all(|v| v.confirms())
    }
}

fn profile_range(params: &WeightParams) -> Interval {
    Interval {
        lo: params.epsilon,
        hi: 1.0,
    }
}

pub fn lemma31_check(params: &WeightParams, opts: CertifyOptions) -> Result<Lemma31Verdicts> {
    let e = build_lemma31(params);
    let range = profile_range(params);
    Ok(Lemma31Verdicts {
        i: certify_sign(&e.f, range, SignClaim::NonNegative, &[params.epsilon], opts)?,
        ii: certify_sign(&e.convexity, range, SignClaim::NonNegative, &[], opts)?,
        iii: certify_sign(&e.radial, range, SignClaim::NonNegative, &[], opts)?,
        iv: certify_sign(&e.discriminant, range, SignClaim::NonPositive, &[], opts)?,
    })
}

/// Margin of `(2g - 1) a^2 >= g^2 (a^2 - g^2 (m - 1) / 4)`; nonnegative when it holds.
pub fn gamma_condition(params: &WeightParams) -> f64 {
    let (a2, g2) = (params.alpha * params.alpha, params.gamma * params.gamma);
    (2.0 * params.gamma - 1.0) * a2 - g2 * (a2 - g2 * (params.m - 1.0) / 4.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LExpr {
    L1,
    L2,
    L3,
    L4,
}

/// Builds `l1`..`l4` from `f` by products and derivatives.
pub fn build_l(which: LExpr, params: &WeightParams) -> PowerSum {
    let a = params.alpha;
    let a2 = a * a;
    let f = build_f(params.m, params.epsilon);
    let df = f.derivative();
    let d2f = df.derivative();
    let one_minus_h2 = PowerSum::new([(1.0, 0.0), (-1.0, 2.0)]);
    match which {
        LExpr::L1 => {
            let f2 = &f * &f;
            let df2 = &df * &df;
            let terms = [
                (&f2 * &f).scale(a2 * a2),
                (&f2 * &df).shift(1.0).scale(-a2),
                (&(&f * &df2) * &one_minus_h2).scale(2.0 * a2),
                (&(&df2 * &df) * &one_minus_h2).shift(1.0).scale(-2.0),
                &(&df2 * &d2f) * &(&one_minus_h2 * &one_minus_h2),
            ];
            terms.iter().fold(PowerSum::zero(), |acc, t| &acc + t)
        }
        LExpr::L2 => {
            let c = l2_coefficient(params);
            let terms = [f.scale(c), df.shift(1.0).scale(-1.0), (&one_minus_h2 * &d2f).scale(0.5)];
            terms.iter().fold(PowerSum::zero(), |acc, t| &acc + t)
        }
        LExpr::L3 => {
            let terms = [
                (&f * &f).scale(a2 + a),
                (&f * &df).shift(1.0).scale(-1.0),
                &one_minus_h2 * &(&df * &df),
            ];
            terms.iter().fold(PowerSum::zero(), |acc, t| &acc + t)
        }
        LExpr::L4 => {
            let l3 = build_l(LExpr::L3, params);
            (&l3 - &PowerSum::constant(l3_floor(params))).shift(-params.m)
        }
    }
}

/// `a^2 - g^2 (m - 1) / 4`, the coefficient of `f` in `l2`.
fn l2_coefficient(params: &WeightParams) -> f64 {
    params.alpha * params.alpha - params.gamma * params.gamma * (params.m - 1.0) / 4.0
}

/// `(a^2 + a) eps^(2m)`, the value of `l3` at `h = eps`.
pub fn l3_floor(params: &WeightParams) -> f64 {
    let a = params.alpha;
    (a * a + a) * params.eps_m() * params.eps_m()
}

/// Expanded form of `l2` as a sum of three monomials.
pub fn l2_closed_form(params: &WeightParams) -> PowerSum {
    let m = params.m;
    let c = l2_coefficient(params);
    PowerSum::new([
        (c - (m * m + m) / 2.0, m),
        ((m * m - m) / 2.0, m - 2.0),
        (-c * params.eps_m(), 0.0),
    ])
}

/// Expanded form of `l4` as a sum of three monomials.
pub fn l4_closed_form(params: &WeightParams) -> PowerSum {
    let (m, a) = (params.m, params.alpha);
    PowerSum::new([
        (a * a + a - m * m - m, m),
        (m * m, m - 2.0),
        (-(2.0 * a * a + 2.0 * a - m) * params.eps_m(), 0.0),
    ])
}

/// Closed form of `l1(eps)`: `(1 - eps^2) f'(eps)^2 m eps^(m-2) [(m - 1) - (m + 1) eps^2]`.
pub fn l1_at_boundary(params: &WeightParams) -> f64 {
    let (m, e) = (params.m, params.epsilon);
    let df = m * e.powf(m - 1.0);
    (1.0 - e * e) * df * df * m * e.powf(m - 2.0) * ((m - 1.0) - (m + 1.0) * e * e)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Overall {
    Feasible,
    Infeasible { key: String, witness: Option<f64> },
    Indeterminate { key: String },
}

/// Per-condition verdicts and their aggregate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub params: WeightParams,
    pub verdicts: BTreeMap<String, SignVerdict>,
    pub overall: Overall,
    pub notes: Vec<String>,
}

impl ConditionReport {
    fn from_ordered(params: WeightParams, ordered: Vec<(&str, SignVerdict)>, notes: Vec<String>) -> Self {
        let refuted = ordered.iter().find(|(_, v)| v.is_refuted());
        let open = ordered.iter().find(|(_, v)| !v.confirms());
        let overall = match (refuted, open) {
            (Some((k, v)), _) => Overall::Infeasible {
                key: k.to_string(),
                witness: v.witness,
            },
            (None, Some((k, _))) => Overall::Indeterminate { key: k.to_string() },
            (None, None) => Overall::Feasible,
        };
        Self {
            params,
            verdicts: ordered.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            overall,
            notes,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.overall == Overall::Feasible
    }

    pub fn verdict(&self, key: &str) -> Option<&SignVerdict> {
        self.verdicts.get(key)
    }
}

fn point_check(p: &PowerSum, h: f64, claim: SignClaim, opts: CertifyOptions) -> Result<SignVerdict> {
    certify_sign(p, Interval::point(h), claim, &[], opts)
}

/// The hand-proof route: `gamma` condition, concavity of `l2` and `l4`, and
/// their endpoint signs. Passing it implies `l1 >= 0` and `l3 >= (a^2 + a) eps^(2m)`.
pub fn sufficient_route_check(params: &WeightParams, opts: CertifyOptions) -> Result<ConditionReport> {
    let mut notes = Vec::new();
    if params.below_concavity_range() {
        notes.push(format!(
            "m = {} is below {}: l2 concavity is not guaranteed by the leading coefficient",
            params.m,
            crate::weights::CONCAVITY_M_MIN
        ));
    }
    let range = profile_range(params);
    let l2 = build_l(LExpr::L2, params);
    let l4 = build_l(LExpr::L4, params);
    let gamma = PowerSum::constant(gamma_condition(params));

    let ordered = vec![
        (GAMMA_COND, point_check(&gamma, 1.0, SignClaim::NonNegative, opts)?),
        (
            L2_CONCAVITY,
            certify_sign(&l2.derivative().derivative(), range, SignClaim::Negative, &[], opts)?,
        ),
        (
            L2_AT_EPS,
            point_check(&l2, params.epsilon, SignClaim::NonNegative, opts)?,
        ),
        (L2_AT_1, point_check(&l2, 1.0, SignClaim::Positive, opts)?),
        (
            L4_CONCAVITY,
            certify_sign(&l4.derivative().derivative(), range, SignClaim::Negative, &[], opts)?,
        ),
        (L4_AT_EPS, point_check(&l4, params.epsilon, SignClaim::Positive, opts)?),
        (L4_AT_1, point_check(&l4, 1.0, SignClaim::Positive, opts)?),
    ];
    Ok(ConditionReport::from_ordered(*params, ordered, notes))
}

/// Certifies the profile conditions, `l1 >= 0` and
/// `l3 >= (a^2 + a) eps^(2m) (1 - L3_SLACK)` on `[eps, 1]`. `gamma` plays no role.
pub fn direct_feasibility(params: &WeightParams, opts: CertifyOptions) -> Result<ConditionReport> {
    let range = profile_range(params);
    let lemma = lemma31_check(params, opts)?;

    let l1 = build_l(LExpr::L1, params);
    let l1_verdict = certify_sign(&l1, range, SignClaim::NonNegative, &[], opts)?;

    let l3 = build_l(LExpr::L3, params);
    let bound = PowerSum::constant(l3_floor(params) * (1.0 - L3_SLACK));
    let l3_verdict = certify_sign(&(&l3 - &bound), range, SignClaim::NonNegative, &[], opts)?;

    let ordered = vec![
        (LEMMA31_I, lemma.i),
        (LEMMA31_II, lemma.ii),
        (LEMMA31_III, lemma.iii),
        (LEMMA31_IV, lemma.iv),
        (L1_DIRECT, l1_verdict),
        (L3_LOWER_BOUND, l3_verdict),
    ];
    Ok(ConditionReport::from_ordered(*params, ordered, Vec::new()))
}
