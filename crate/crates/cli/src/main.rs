//! `carleman-cone`: command-line front end for the cone Carleman-weight toolkit.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde_json::{json, Value};

use carleman_core::solver::ScanRow;

use commands::{execute, exit_code, Outcome, EXIT_FAIL, EXIT_USAGE};
use config::{Cli, Overrides, RunConfig, UsageError};

fn load_config(cli: &Cli) -> Result<RunConfig, UsageError> {
    let flags = Overrides::from_cli(cli)?;
    let file = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
            Overrides::from_text(&text)?
        }
        None => Overrides::default(),
    };
    RunConfig::resolve(cli.command, flags.over(file))
}

fn envelope(cfg: &RunConfig, result: Value, verdicts: Value) -> Value {
    json!({
        "command": cfg.command.name(),
        "params": {
            "m": cfg.m,
            "alpha": cfg.alpha,
            "gamma": cfg.gamma,
            "eps": cfg.eps,
            "dim": cfg.dim,
            "K": cfg.k,
            "a_list": cfg.a_list,
        },
        "result": result,
        "verdicts": verdicts,
        "version": env!("CARGO_PKG_VERSION"),
    })
}

fn write_csv(path: &Path, rows: &[ScanRow]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["m", "epsilon_sup", "theta_deg"])?;
    let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in rows {
        w.write_record([r.m.to_string(), cell(r.epsilon_sup), cell(r.theta_deg)])?;
    }
    w.flush()?;
    Ok(())
}

fn emit(cfg: &RunConfig, out: &Outcome) -> u8 {
    if let Some(path) = &cfg.csv {
        if let Err(e) = write_csv(path, &out.rows) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return EXIT_FAIL;
        }
    }
    let mut so = std::io::stdout().lock();
    // A closed pipe is not an error of the computation.
    let _ = if cfg.json {
        let verdicts = serde_json::to_value(&out.verdicts).unwrap_or_default();
        writeln!(so, "{}", envelope(cfg, out.result.clone(), verdicts))
    } else {
        writeln!(so, "command: {}", cfg.command.name())
            .and_then(|_| out.lines.iter().try_for_each(|(k, v)| writeln!(so, "{k}: {v}")))
    };
    out.code
}

fn run() -> u8 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    let cfg = match load_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match execute(&cfg) {
        Ok(out) => emit(&cfg, &out),
        Err(e) => {
            let code = exit_code(&e);
            if cfg.json {
                println!("{}", envelope(&cfg, json!({ "error": e.to_string() }), json!({})));
            }
            eprintln!("error: {e}");
            code
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run())
}
