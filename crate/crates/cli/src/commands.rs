use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use carleman_core::conditions::{direct_feasibility, sufficient_route_check, ConditionReport, Overall};
use carleman_core::identities::run_identities;
use carleman_core::quad::{verify_carleman, BumpFunction, GridSpec, Rule};
use carleman_core::solver::{
    frontier_epsilon, scan_frontier, solve_critical_system, solve_gamma1, Family, FrontierResult, ScanRow,
};
use carleman_core::{CertifyOptions, Error, WeightParams};

use crate::config::{Command, RunConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INDETERMINATE: u8 = 2;
pub const EXIT_USAGE: u8 = 3;

const GAMMA1_BRACKET: (f64, f64) = (2.36, 3.0);

/// What a subcommand produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub result: Value,
    pub verdicts: BTreeMap<String, Value>,
    pub lines: Vec<(String, String)>,
    pub rows: Vec<ScanRow>,
    pub code: u8,
}

impl Outcome {
    fn new(result: Value, code: u8) -> Self {
        Self {
            result,
            verdicts: BTreeMap::new(),
            lines: Vec::new(),
            rows: Vec::new(),
            code,
        }
    }

    fn line(&mut self, key: impl Into<String>, value: impl ToString) {
        self.lines.push((key.into(), value.to_string()));
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_) | Error::SupportViolation(_) => EXIT_USAGE,
        Error::NonConvergence { .. } | Error::SingularJacobian { .. } => EXIT_INDETERMINATE,
        Error::NoSignChange { .. } | Error::AllInfeasible { .. } | Error::DegenerateWeight { .. } => EXIT_FAIL,
    }
}

fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn params(cfg: &RunConfig) -> carleman_core::Result<WeightParams> {
    WeightParams::new(cfg.m, cfg.alpha, cfg.gamma, cfg.eps)
}

fn theta(eps: f64) -> f64 {
    (2.0 * eps.acos()).to_degrees()
}

pub fn execute(cfg: &RunConfig) -> carleman_core::Result<Outcome> {
    match cfg.command {
        Command::Solve => solve(cfg),
        Command::Gamma1 => gamma1(cfg),
        Command::Check => check(cfg),
        Command::Frontier => frontier(cfg),
        Command::Scan => scan(cfg),
        Command::Quadrature => quadrature(cfg),
        Command::Identities => identities(cfg),
    }
}

fn solve(cfg: &RunConfig) -> carleman_core::Result<Outcome> {
    let r = solve_critical_system(cfg.init, cfg.tol, cfg.max_iter)?;
    let mut out = Outcome::new(to_value(&r), if r.converged { EXIT_OK } else { EXIT_INDETERMINATE });
    out.verdicts.insert("converged".into(), json!(r.converged));
    out.line("gamma", r.gamma);
    out.line("m", r.m);
    out.line("epsilon0", r.epsilon0);
    out.line("theta_deg", format!("{:.2}", r.theta_deg));
    out.line(
        "residuals",
        format!("{:.3e} {:.3e} {:.3e}", r.residuals[0], r.residuals[1], r.residuals[2]),
    );
    out.line("iterations", r.iterations);
    out.line("converged", r.converged);
    Ok(out)
}

fn gamma1(cfg: &RunConfig) -> carleman_core::Result<Outcome> {
    let (m, e) = solve_gamma1(GAMMA1_BRACKET.0, GAMMA1_BRACKET.1, cfg.tol)?;
    let mut out = Outcome::new(json!({"m": m, "epsilon0": e, "theta_deg": theta(e)}), EXIT_OK);
    out.line("m", m);
    out.line("epsilon0", e);
    out.line("theta_deg", format!("{:.2}", theta(e)));
    Ok(out)
}

fn overall_code(overall: &Overall) -> u8 {
    match overall {
        Overall::Feasible => EXIT_OK,
        Overall::Infeasible { .. } => EXIT_FAIL,
        Overall::Indeterminate { .. } => EXIT_INDETERMINATE,
    }
}

fn describe(overall: &Overall) -> String {
    match overall {
        Overall::Feasible => "feasible".into(),
        Overall::Infeasible { key, witness: Some(h) } => format!("infeasible at {key}, witness h = {h}"),
        Overall::Infeasible { key, witness: None } => format!("infeasible at {key}"),
        Overall::Indeterminate { key } => format!("indeterminate at {key}"),
    }
}

fn add_report(out: &mut Outcome, prefix: &str, report: &ConditionReport) {
    for (key, v) in &report.verdicts {
        out.verdicts.insert(format!("{prefix}{key}"), to_value(v));
        let witness = v.witness.map(|h| format!(" witness h = {h}")).unwrap_or_default();
        out.line(
            format!("{prefix}{key}"),
            format!("{:?} ({}){witness}", v.kind, v.claim.symbol()),
        );
    }
    for note in &report.notes {
        out.line("note", note);
    }
}

fn check(cfg: &RunConfig) -> carleman_core::Result<Outcome> {
    let p = params(cfg)?;
    let opts = CertifyOptions::with_tol(cfg.tol);
    let direct = direct_feasibility(&p, opts)?;
    let route = sufficient_route_check(&p, opts)?;
    let result = json!({
        "overall": to_value(&direct.overall),
        "direct": to_value(&direct),
        "route": to_value(&route),
    });
    let mut out = Outcome::new(result, overall_code(&direct.overall));
    add_report(&mut out, "", &direct);
    add_report(&mut out, "route.", &route);
    out.line("route", describe(&route.overall));
    out.line("overall", describe(&direct.overall));
    Ok(out)
}

fn frontier(cfg: &RunConfig) -> carleman_core::Result<Outcome> {
    let opts = CertifyOptions::default();
    let beta_m = frontier_epsilon(Family::BetaEqM { m: cfg.m }, cfg.alpha, cfg.tol, opts)?;
    let alpha = frontier_epsilon(Family::BetaEqAlpha, cfg.alpha, cfg.tol, opts)?;
    let entry = |f: &FrontierResult| {
        let mut v = to_value(f);
        v["theta_deg"] = json!(f.theta_deg());
        v
    };
    let mut out = Outcome::new(
        json!({"beta_eq_m": entry(&beta_m), "beta_eq_alpha": entry(&alpha)}),
        EXIT_OK,
    );
    for (name, f) in [("beta=m", &beta_m), ("beta=alpha", &alpha)] {
        out.line(format!("epsilon_sup ({name})"), f.epsilon_sup);
        out.line(format!("theta_deg ({name})"), format!("{:.2}", f.theta_deg()));
    }
    Ok(out)
}

fn scan(cfg: &RunConfig) -> carleman_core::Result<Outcome> {
    let rows = scan_frontier(&cfg.m_values(), cfg.alpha, cfg.tol, CertifyOptions::default());
    let code = if rows.iter().all(|r| r.epsilon_sup.is_some()) {
        EXIT_OK
    } else {
        EXIT_FAIL
    };
    let mut out = Outcome::new(json!({ "rows": to_value(&rows) }), code);
    for r in &rows {
        let value = match (r.epsilon_sup, r.theta_deg, &r.error) {
            (Some(e), Some(t), _) => format!("epsilon_sup {e} theta_deg {t:.2}"),
            (_, _, Some(err)) => format!("error: {err}"),
            _ => "no result".into(),
        };
        out.line(format!("m = {}", r.m), value);
    }
    out.rows = rows;
    Ok(out)
}

fn quadrature(cfg: &RunConfig) -> carleman_core::Result<Outcome> {
    let p = params(cfg)?;
    let mut center = vec![0.0; cfg.dim + 1];
    center[0] = 4.0;
    center[cfg.dim] = 0.5;
    let mut radii = vec![0.8; cfg.dim + 1];
    radii[cfg.dim] = 0.3;
    let u = BumpFunction::new(1.0, center, radii)?;
    let grid = match cfg.grid {
        Some(n) => GridSpec::uniform(cfg.dim, n, Rule::Simpson)?,
        None => GridSpec::default_for(cfg.dim)?,
    };
    let reports = verify_carleman(&u, &p, &cfg.a_list, cfg.k, cfg.k_cap, &grid)?;
    let all_pass = reports.iter().all(|r| r.pass);
    let mut out = Outcome::new(
        json!({"bump": to_value(&u), "grid": to_value(&grid), "reports": to_value(&reports)}),
        if all_pass { EXIT_OK } else { EXIT_FAIL },
    );
    for r in &reports {
        out.verdicts.insert(format!("a={}", r.a), json!(r.pass));
        out.line(
            format!("a = {}", r.a),
            format!(
                "K {} lhs {:.6e} rhs {:.6e} ratio {:.6e} pass {}",
                r.k, r.lhs, r.rhs, r.ratio, r.pass
            ),
        );
    }
    Ok(out)
}

fn identities(cfg: &RunConfig) -> carleman_core::Result<Outcome> {
    let checks = run_identities(&params(cfg)?, cfg.dim, cfg.seed)?;
    let all = checks.iter().all(|c| c.passed);
    let mut out = Outcome::new(
        json!({"seed": cfg.seed, "checks": to_value(&checks)}),
        if all { EXIT_OK } else { EXIT_FAIL },
    );
    for c in &checks {
        out.verdicts.insert(c.name.clone(), json!(c.passed));
        let status = if c.passed { "pass" } else { "FAIL" };
        out.line(
            &c.name,
            format!("{status} worst {:.3e} tol {:.1e} n {}", c.worst, c.tolerance, c.samples),
        );
    }
    Ok(out)
}
