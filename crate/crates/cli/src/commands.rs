use std::io::Write;

use serde_json::{json, Value};

use mwt_core::harness::{
    dkw_bound, format_csv, ks_distance, run_experiment_with, ExperimentConfig, HarnessError, Scale,
};
use mwt_core::limits::{
    classify_regime, lambda_j, limit_law, p_asymptotic, p_recursion, LimitLaw, LimitsError,
    DEFAULT_BAND,
};
use mwt_core::model::{ModelError, SimBudget};

use crate::settings::{pick, require, resolve_threads, FileConfig};
use crate::{
    Cli, CliError, Command, CompareArgs, LambdaArgs, LimitCdfArgs, QmArgs, RegimeArgs, SimArgs,
    UsageError,
};

const DEFAULT_REPLICATES: u64 = 1000;
const DEFAULT_SEED: u64 = 0;
const DEFAULT_ALPHA: f64 = 0.01;

pub fn dispatch(cli: Cli) -> Result<(), CliError> {
    let file = FileConfig::load(cli.config.as_deref())?;
    let threads = resolve_threads(cli.threads, &file, std::env::var("MWT_THREADS").ok())?;
    match cli.command {
        Command::Simulate(args) => simulate(&args, &file, threads),
        Command::Regime(args) => regime(&args, &file),
        Command::LimitCdf(args) => limit_cdf(&args, &file),
        Command::Compare(args) => compare(&args, &file, threads),
        Command::Lambda(args) => lambda(&args, &file),
        Command::Qm(args) => qm(&args, &file),
    }
}

fn limits_error(e: LimitsError) -> CliError {
    match e {
        LimitsError::InvalidArgument(_) | LimitsError::Unclassifiable { .. } => {
            CliError::Usage(e.to_string())
        }
        _ => CliError::Runtime(e.to_string()),
    }
}

fn harness_error(e: HarnessError) -> CliError {
    match e {
        HarnessError::InvalidConfig(_) | HarnessError::Model(ModelError::InvalidArgument(_)) => {
            CliError::Usage(e.to_string())
        }
        HarnessError::Limits(l) => limits_error(l),
        e => CliError::Runtime(e.to_string()),
    }
}

fn print_json(v: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(v).expect("JSON values serialize");
    text.push('\n');
    emit(&text)
}

/// Writes to stdout; a closed reader (e.g. `| head`) is not an error.
fn emit(text: &str) -> Result<(), CliError> {
    match std::io::stdout().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(CliError::Runtime(e.to_string()))
        }
        _ => Ok(()),
    }
}

struct RegimeParams {
    n: u64,
    mu: f64,
    m: u32,
    band: f64,
}

fn m_value(m: u64) -> Result<u32, UsageError> {
    u32::try_from(m).map_err(|_| UsageError(format!("m = {m} is too large")))
}

fn regime_params(args: &RegimeArgs, file: &FileConfig) -> Result<RegimeParams, UsageError> {
    Ok(RegimeParams {
        n: require(pick(args.n, file.count("n")?), "n")?,
        mu: require(pick(args.mu, file.real("mu")?), "mu")?,
        m: m_value(require(pick(args.m, file.count("m")?), "m")?)?,
        band: pick(args.band, file.real("band")?).unwrap_or(DEFAULT_BAND),
    })
}

fn experiment_config(args: &SimArgs, file: &FileConfig) -> Result<ExperimentConfig, CliError> {
    let p = regime_params(&args.regime, file)?;
    let mut config = ExperimentConfig::new(
        p.n,
        p.mu,
        p.m,
        pick(args.replicates, file.count("replicates")?).unwrap_or(DEFAULT_REPLICATES),
        pick(args.seed, file.count("seed")?).unwrap_or(DEFAULT_SEED),
    );
    config.band = p.band;
    let default = SimBudget::default();
    let events =
        pick(args.budget_events, file.count("budget-events")?).unwrap_or(default.max_events);
    let time = pick(args.budget_time, file.real("budget-time")?).unwrap_or(default.max_time);
    config.budget = SimBudget::new(events, time).map_err(|e| CliError::Usage(e.to_string()))?;
    config.scale = match pick(args.scale.clone(), file.string("scale")?).as_deref() {
        None | Some("auto") => Scale::Auto,
        Some(s) => Scale::Explicit(
            crate::settings::parse_real(s).map_err(|e| CliError::Usage(format!("--scale: {e}")))?,
        ),
    };
    if let Some(cap) = pick(args.truncation_cap, file.real("truncation-cap")?) {
        config.truncation_cap = cap;
    }
    config.output_path = pick(args.out.clone(), file.path("out")?);
    Ok(config)
}

fn simulate(args: &SimArgs, file: &FileConfig, threads: Option<usize>) -> Result<(), CliError> {
    let config = experiment_config(args, file)?;
    let outcome = run_experiment_with(&config, threads).map_err(harness_error)?;
    let report = json!({
        "command": "simulate",
        "threads": threads,
        "summary": outcome.summary,
    });
    if config.output_path.is_some() {
        print_json(&report)?;
    } else {
        // CSV on stdout, report on stderr.
        emit(&format_csv(&outcome.records))?;
        eprintln!(
            "{}",
            serde_json::to_string_pretty(&report).expect("JSON values serialize")
        );
    }
    Ok(())
}

fn regime(args: &RegimeArgs, file: &FileConfig) -> Result<(), CliError> {
    let p = regime_params(args, file)?;
    let regime = classify_regime(p.n as f64, p.mu, p.m, p.band).map_err(limits_error)?;
    let law = limit_law(&regime).map_err(limits_error)?;
    print_json(&json!({
        "command": "regime",
        "config": { "n": p.n, "mu": p.mu, "m": p.m, "band": p.band },
        "regime": regime,
        "label": regime.kind.label(),
        "law": law.to_string(),
    }))?;
    Ok(())
}

/// `start:stop:count` (inclusive, evenly spaced) or `t1,t2,...`.
fn parse_grid(s: &str) -> Result<Vec<f64>, UsageError> {
    let bad = |why: &str| UsageError(format!("--t-grid `{s}`: {why}"));
    let real = |p: &str| crate::settings::parse_real(p).map_err(|e| bad(&e));
    let grid: Vec<f64> = if let [a, b, k] = s.split(':').collect::<Vec<_>>().as_slice() {
        let (a, b) = (real(a)?, real(b)?);
        let k = crate::settings::parse_count(k).map_err(|e| bad(&e))?;
        match k {
            0 => return Err(bad("count must be positive")),
            1 => vec![a],
            k => (0..k)
                .map(|i| a + (b - a) * i as f64 / (k - 1) as f64)
                .collect(),
        }
    } else {
        s.split(',').map(real).collect::<Result<_, _>>()?
    };
    if grid.iter().any(|t| !t.is_finite()) {
        return Err(bad("times must be finite"));
    }
    Ok(grid)
}

fn limit_cdf(args: &LimitCdfArgs, file: &FileConfig) -> Result<(), CliError> {
    let grid_spec = require(pick(args.t_grid.clone(), file.string("t-grid")?), "t-grid")?;
    let grid = parse_grid(&grid_spec)?;
    let (law, config) = match pick(args.law.clone(), file.string("law")?) {
        Some(desc) if desc != "auto" => {
            let law: LimitLaw = desc.parse().map_err(limits_error)?;
            (law, json!({ "law": desc, "t-grid": grid_spec }))
        }
        _ => {
            let p = regime_params(&args.regime, file)?;
            let regime = classify_regime(p.n as f64, p.mu, p.m, p.band).map_err(limits_error)?;
            let law = limit_law(&regime).map_err(limits_error)?;
            let config = json!({
                "n": p.n, "mu": p.mu, "m": p.m, "band": p.band,
                "regime": regime.kind.label(), "law": law.to_string(), "t-grid": grid_spec,
            });
            (law, config)
        }
    };
    let mut out = String::new();
    out.push_str(&format!("# {config}\n"));
    out.push_str("t,cdf\n");
    for t in grid {
        out.push_str(&format!("{t},{}\n", law.cdf(t)));
    }
    emit(&out)
}

fn compare(args: &CompareArgs, file: &FileConfig, threads: Option<usize>) -> Result<(), CliError> {
    let mut config = experiment_config(&args.sim, file)?;
    let alpha = pick(args.alpha, file.real("alpha")?).unwrap_or(DEFAULT_ALPHA);
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(CliError::Usage(format!(
            "--alpha must lie in (0, 1), got {alpha}"
        )));
    }
    let law = match pick(args.law.clone(), file.string("law")?).as_deref() {
        None | Some("auto") => {
            let regime = classify_regime(config.n as f64, config.mu, config.m, config.band)
                .map_err(limits_error)?;
            limit_law(&regime).map_err(limits_error)?
        }
        Some(desc) => desc.parse().map_err(limits_error)?,
    };
    config.comparison = Some(law);
    let outcome = run_experiment_with(&config, threads).map_err(harness_error)?;
    let ks = ks_distance(&outcome.distribution, &law);
    let n_samples = outcome.distribution.samples().len() as u64;
    let bound = dkw_bound(n_samples, alpha).map_err(harness_error)?;
    let pass = ks <= bound;
    print_json(&json!({
        "command": "compare",
        "threads": threads,
        "alpha": alpha,
        "law": law.to_string(),
        "ks": ks,
        "dkw_bound": bound,
        "pass": pass,
        "summary": outcome.summary,
    }))?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Runtime(format!(
            "KS distance {ks} exceeds the DKW bound {bound} at alpha = {alpha}"
        )))
    }
}

fn lambda(args: &LambdaArgs, file: &FileConfig) -> Result<(), CliError> {
    let a = require(pick(args.a, file.real("A")?), "A")?;
    let j = require(pick(args.j, file.count("j")?), "j")?;
    let j = m_value(j)?;
    let value = lambda_j(a, j).map_err(limits_error)?;
    print_json(&json!({
        "command": "lambda",
        "config": { "A": a, "j": j },
        "lambda": value,
    }))?;
    Ok(())
}

fn qm(args: &QmArgs, file: &FileConfig) -> Result<(), CliError> {
    let mu = require(pick(args.mu, file.real("mu")?), "mu")?;
    let m = m_value(require(pick(args.m, file.count("m")?), "m")?)?;
    let asymptotic = if args.exact || args.asymptotic {
        args.asymptotic
    } else {
        file.flag("asymptotic")?.unwrap_or(false)
    };
    if m < 1 {
        return Err(CliError::Usage("m must be at least 1".into()));
    }
    let (method, q) = if asymptotic {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(CliError::Usage(format!("mu must be positive, got {mu}")));
        }
        ("asymptotic", p_asymptotic(mu, m))
    } else {
        ("exact", p_recursion(mu, m).map_err(limits_error)?)
    };
    print_json(&json!({
        "command": "qm",
        "config": { "mu": mu, "m": m, "method": method },
        "q": q,
    }))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("2:9:1").unwrap(), vec![2.0]);
        assert_eq!(parse_grid("0.1,1e-2").unwrap(), vec![0.1, 0.01]);
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("a,b").is_err());
        assert!(parse_grid("0:inf:2").is_err());
    }
}
