use std::path::PathBuf;

use clap::{Parser, Subcommand};

use carleman_core::identities::DEFAULT_SEED;
use carleman_core::quad::MIN_NODES_PER_AXIS;
use carleman_core::solver::{DEFAULT_GAMMA, DEFAULT_INIT, DEFAULT_MAX_ITER, DEFAULT_TOL};

pub const DEFAULT_M: f64 = 2.46;
pub const DEFAULT_ALPHA: f64 = 1.999;
pub const DEFAULT_EPS: f64 = 0.60;
pub const DEFAULT_A: [f64; 3] = [0.1, 1.0, 10.0];
pub const DEFAULT_K: f64 = 60.0;
pub const DEFAULT_K_CAP: f64 = 240.0;
pub const DEFAULT_FRONTIER_TOL: f64 = 1e-6;
pub const DEFAULT_M_GRID: (f64, f64, usize) = (2.1, 2.9, 9);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Solve the critical (gamma, m, eps) system by damped Newton.
    Solve,
    /// Intersect the two gamma = 1 curves.
    Gamma1,
    /// Certify the sign conditions at one parameter point.
    Check,
    /// Largest certified eps for the beta = m and beta = alpha families.
    Frontier,
    /// Frontier of the beta = m family over a grid of m.
    Scan,
    /// Check the weighted inequality by quadrature on a bump function.
    Quadrature,
    /// Run the structural identity checks.
    Identities,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Gamma1 => "gamma1",
            Command::Check => "check",
            Command::Frontier => "frontier",
            Command::Scan => "scan",
            Command::Quadrature => "quadrature",
            Command::Identities => "identities",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "carleman-cone",
    version,
    about = "Carleman weights for the backward heat operator in cones"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub m: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    /// Weight parameter a; repeat for several values.
    #[arg(long = "a", global = true, allow_negative_numbers = true)]
    pub a: Vec<f64>,
    #[arg(long = "K", global = true, allow_negative_numbers = true)]
    pub k: Option<f64>,
    #[arg(long = "K-cap", global = true, allow_negative_numbers = true)]
    pub k_cap: Option<f64>,
    /// Quadrature nodes per axis (odd).
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol: Option<f64>,
    #[arg(long = "max-iter", global = true)]
    pub max_iter: Option<usize>,
    /// lo:hi:count
    #[arg(long = "m-grid", global = true)]
    pub m_grid: Option<String>,
    /// gamma,m,eps
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub init: Option<String>,
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

/// A configuration problem; the message names the offending key.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

/// Values supplied by flags or a config file; `None` means not given.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub m: Option<f64>,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub eps: Option<f64>,
    pub dim: Option<usize>,
    pub a: Option<Vec<f64>>,
    pub k: Option<f64>,
    pub k_cap: Option<f64>,
    pub grid: Option<usize>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub m_grid: Option<(f64, f64, usize)>,
    pub init: Option<[f64; 3]>,
    pub seed: Option<u64>,
    pub json: Option<bool>,
    pub csv: Option<PathBuf>,
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, UsageError> {
    v.trim()
        .parse()
        .map_err(|_| UsageError(format!("invalid value for {key}: '{v}'")))
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>, UsageError> {
    v.split(',').map(|s| parse_num(key, s)).collect()
}

pub fn parse_m_grid(v: &str) -> Result<(f64, f64, usize), UsageError> {
    let parts: Vec<&str> = v.split(':').collect();
    if parts.len() != 3 {
        return usage(format!("invalid value for m-grid: '{v}' (expected lo:hi:count)"));
    }
    Ok((
        parse_num("m-grid", parts[0])?,
        parse_num("m-grid", parts[1])?,
        parse_num("m-grid", parts[2])?,
    ))
}

pub fn parse_init(v: &str) -> Result<[f64; 3], UsageError> {
    let vals = parse_list("init", v)?;
    match vals[..] {
        [g, m, e] => Ok([g, m, e]),
        _ => usage(format!("invalid value for init: '{v}' (expected g,m,e)")),
    }
}

impl Overrides {
    /// Parses `key=value` lines; `#` starts a comment.
    pub fn from_text(text: &str) -> Result<Self, UsageError> {
        let mut o = Overrides::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return usage(format!("config line {}: expected key=value, got '{line}'", n + 1));
            };
            let key = key.trim();
            let value = value.trim();
            match key.replace('-', "_").as_str() {
                "m" => o.m = Some(parse_num(key, value)?),
                "alpha" => o.alpha = Some(parse_num(key, value)?),
                "gamma" => o.gamma = Some(parse_num(key, value)?),
                "eps" => o.eps = Some(parse_num(key, value)?),
                "dim" => o.dim = Some(parse_num(key, value)?),
                "a" | "a_list" => o.a = Some(parse_list(key, value)?),
                "K" | "k" => o.k = Some(parse_num(key, value)?),
                "K_cap" | "k_cap" => o.k_cap = Some(parse_num(key, value)?),
                "grid" => o.grid = Some(parse_num(key, value)?),
                "tol" => o.tol = Some(parse_num(key, value)?),
                "max_iter" => o.max_iter = Some(parse_num(key, value)?),
                "m_grid" => o.m_grid = Some(parse_m_grid(value)?),
                "init" => o.init = Some(parse_init(value)?),
                "seed" => o.seed = Some(parse_num(key, value)?),
                "json" => o.json = Some(parse_num(key, value)?),
                "csv" => o.csv = Some(PathBuf::from(value)),
                _ => return usage(format!("unknown config key '{key}'")),
            }
        }
        Ok(o)
    }

    pub fn from_cli(cli: &Cli) -> Result<Self, UsageError> {
        Ok(Overrides {
            m: cli.m,
            alpha: cli.alpha,
            gamma: cli.gamma,
            eps: cli.eps,
            dim: cli.dim,
            a: (!cli.a.is_empty()).then(|| cli.a.clone()),
            k: cli.k,
            k_cap: cli.k_cap,
            grid: cli.grid,
            tol: cli.tol,
            max_iter: cli.max_iter,
            m_grid: cli.m_grid.as_deref().map(parse_m_grid).transpose()?,
            init: cli.init.as_deref().map(parse_init).transpose()?,
            seed: cli.seed,
            json: cli.json.then_some(true),
            csv: cli.csv.clone(),
        })
    }

    /// Fields set in `self` win over `lower`.
    pub fn over(self, lower: Overrides) -> Overrides {
        Overrides {
            m: self.m.or(lower.m),
            alpha: self.alpha.or(lower.alpha),
            gamma: self.gamma.or(lower.gamma),
            eps: self.eps.or(lower.eps),
            dim: self.dim.or(lower.dim),
            a: self.a.or(lower.a),
            k: self.k.or(lower.k),
            k_cap: self.k_cap.or(lower.k_cap),
            grid: self.grid.or(lower.grid),
            tol: self.tol.or(lower.tol),
            max_iter: self.max_iter.or(lower.max_iter),
            m_grid: self.m_grid.or(lower.m_grid),
            init: self.init.or(lower.init),
            seed: self.seed.or(lower.seed),
            json: self.json.or(lower.json),
            csv: self.csv.or(lower.csv),
        }
    }
}

/// Fully resolved and validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub m: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub eps: f64,
    pub dim: usize,
    pub a_list: Vec<f64>,
    pub k: f64,
    pub k_cap: f64,
    pub grid: Option<usize>,
    pub tol: f64,
    pub max_iter: usize,
    pub m_grid: (f64, f64, usize),
    pub init: [f64; 3],
    pub seed: u64,
    pub json: bool,
    pub csv: Option<PathBuf>,
}

fn check(ok: bool, key: &str, value: impl std::fmt::Display, range: &str) -> Result<(), UsageError> {
    if ok {
        Ok(())
    } else {
        usage(format!("invalid value for {key}: {value} (must be {range})"))
    }
}

impl RunConfig {
    pub fn resolve(command: Command, o: Overrides) -> Result<Self, UsageError> {
        let default_tol = match command {
            Command::Frontier | Command::Scan => DEFAULT_FRONTIER_TOL,
            _ => DEFAULT_TOL,
        };
        let cfg = RunConfig {
            command,
            m: o.m.unwrap_or(DEFAULT_M),
            alpha: o.alpha.unwrap_or(DEFAULT_ALPHA),
            gamma: o.gamma.unwrap_or(DEFAULT_GAMMA),
            eps: o.eps.unwrap_or(DEFAULT_EPS),
            dim: o.dim.unwrap_or(2),
            a_list: o.a.unwrap_or_else(|| DEFAULT_A.to_vec()),
            k: o.k.unwrap_or(DEFAULT_K),
            k_cap: o.k_cap.unwrap_or(DEFAULT_K_CAP),
            grid: o.grid,
            tol: o.tol.unwrap_or(default_tol),
            max_iter: o.max_iter.unwrap_or(DEFAULT_MAX_ITER),
            m_grid: o.m_grid.unwrap_or(DEFAULT_M_GRID),
            init: o.init.unwrap_or(DEFAULT_INIT),
            seed: o.seed.unwrap_or(DEFAULT_SEED),
            json: o.json.unwrap_or(false),
            csv: o.csv,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), UsageError> {
        check(self.m > 2.0 && self.m < 3.0, "m", self.m, "in (2, 3)")?;
        check(self.alpha > 1.0 && self.alpha <= 2.0, "alpha", self.alpha, "in (1, 2]")?;
        check(
            self.gamma > 0.5 && self.gamma <= 1.0,
            "gamma",
            self.gamma,
            "in (1/2, 1]",
        )?;
        check(self.eps > 0.0 && self.eps < 1.0, "eps", self.eps, "in (0, 1)")?;
        check((2..=3).contains(&self.dim), "dim", self.dim, "2 or 3")?;
        check(!self.a_list.is_empty(), "a", "[]", "a nonempty list")?;
        for a in &self.a_list {
            check(*a >= 0.0 && a.is_finite(), "a", a, "nonnegative")?;
        }
        check(self.k > 0.0 && self.k.is_finite(), "K", self.k, "positive")?;
        check(
            self.k_cap >= self.k && self.k_cap.is_finite(),
            "K-cap",
            self.k_cap,
            "at least K",
        )?;
        if let Some(n) = self.grid {
            check(n >= MIN_NODES_PER_AXIS && n % 2 == 1, "grid", n, "odd and at least 9")?;
        }
        check(self.tol > 0.0 && self.tol.is_finite(), "tol", self.tol, "positive")?;
        check(self.max_iter > 0, "max-iter", self.max_iter, "positive")?;
        let (lo, hi, count) = self.m_grid;
        let grid = format!("{lo}:{hi}:{count}");
        check(
            lo > 2.0 && hi < 3.0 && lo <= hi,
            "m-grid",
            &grid,
            "inside (2, 3) with lo <= hi",
        )?;
        check(
            count > 0 && (count > 1 || lo == hi),
            "m-grid",
            &grid,
            "a positive count",
        )?;
        let [g, m, e] = self.init;
        let init = format!("{g},{m},{e}");
        check(
            g > 0.5 && g <= 1.0 && m > 2.0 && m < 3.0 && e > 0.0 && e < 1.0,
            "init",
            init,
            "inside the solver domain",
        )?;
        if self.csv.is_some() {
            check(
                self.command == Command::Scan,
                "csv",
                self.command.name(),
                "used with scan",
            )?;
        }
        Ok(())
    }

    pub fn m_values(&self) -> Vec<f64> {
        let (lo, hi, count) = self.m_grid;
        if count == 1 {
            return vec![lo];
        }
        (0..count)
            .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig, UsageError> {
        let cli = Cli::try_parse_from(std::iter::once("carleman-cone").chain(args.iter().copied())).unwrap();
        RunConfig::resolve(cli.command, Overrides::from_cli(&cli)?)
    }

    #[test]
    fn defaults() {
        let cfg = parse(&["solve"]).unwrap();
        assert_eq!(cfg.init, [0.80, 2.45, 0.65]);
        assert_eq!(cfg.tol, 1e-12);
        let cfg = parse(&["check", "--m", "2.46", "--alpha", "1.999", "--eps", "0.60"]).unwrap();
        assert_eq!(cfg.gamma, 0.8092);
        assert_eq!(parse(&["frontier"]).unwrap().tol, 1e-6);
        assert_eq!(parse(&["identities"]).unwrap().seed, 42);
    }

    #[test]
    fn invalid_values_name_the_key() {
        assert!(parse(&["frontier", "--m", "5"]).unwrap_err().0.contains("m: 5"));
        assert!(parse(&["check", "--eps", "1.5"]).unwrap_err().0.contains("eps"));
        assert!(parse(&["quadrature", "--grid", "40"]).unwrap_err().0.contains("grid"));
        assert!(parse(&["quadrature", "--K", "300"]).unwrap_err().0.contains("K-cap"));
        assert!(parse(&["solve", "--init", "0.8,2.45"]).unwrap_err().0.contains("init"));
        assert!(parse(&["solve", "--csv", "x.csv"]).unwrap_err().0.contains("csv"));
        assert!(parse(&["scan", "--m-grid", "2.1:2.9"])
            .unwrap_err()
            .0
            .contains("m-grid"));
    }

    #[test]
    fn file_parsing_and_precedence() {
        let file = Overrides::from_text("# comment\nm = 2.5\neps=0.3 # trailing\na=0.5,2\nK-cap = 480\n").unwrap();
        assert_eq!(file.m, Some(2.5));
        assert_eq!(file.a, Some(vec![0.5, 2.0]));
        assert_eq!(file.k_cap, Some(480.0));
        let flags = Overrides {
            m: Some(2.4),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(Command::Check, flags.over(file)).unwrap();
        assert_eq!((cfg.m, cfg.eps, cfg.alpha), (2.4, 0.3, DEFAULT_ALPHA));
    }

    #[test]
    fn file_rejects_unknown_keys() {
        assert!(Overrides::from_text("beta=2").unwrap_err().0.contains("beta"));
        assert!(Overrides::from_text("m 2.4").is_err());
        assert!(Overrides::from_text("m=abc").unwrap_err().0.contains("m"));
    }

    #[test]
    fn m_grid_values() {
        let cfg = parse(&["scan", "--m-grid", "2.1:2.9:9"]).unwrap();
        let v = cfg.m_values();
        assert_eq!(v.len(), 9);
        assert_eq!(v[0], 2.1);
        assert!((v[8] - 2.9).abs() < 1e-15);
    }
}
