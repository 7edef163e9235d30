//! One function per subcommand. Each turns a parsed config into a CSV table
//! plus optional JSON sidecars; nothing here touches the filesystem except
//! reading a correlation file named by the config.

use std::path::Path;

use cmixlab::concentration::{
    comparator_bounds, mc_validate_tail, TailValidationConfig, COMPARATOR_NAMES,
};
use cmixlab::experiments::RateExperiment;
use cmixlab::forecasting::{build_pairs, build_pairs_iid, coordinate_risk_mc, train_forecaster};
use cmixlab::learners::make_hypergrid;
use cmixlab::mc;
use cmixlab::processes::{
    add_noise, empirical_correlation_with_se, fit_geometric_rate, generate_trajectory,
    parse_correlation_csv, NoiseModel,
};
use serde::Serialize;

use crate::config::{
    BoundConfig, ForecastConfig, MixingConfig, MixingSource, RatesConfig, SimulateConfig,
    ValidateConfig,
};
use crate::error::{CliError, CliResult};
use crate::output::{fmt_f64, Table};

/// Result of a command: the main table, JSON sidecars keyed by file suffix,
/// and a failure to report after the outputs are written.
#[derive(Debug)]
pub struct Report {
    pub table: Table,
    pub sidecars: Vec<(&'static str, String)>,
    pub failure: Option<CliError>,
}

impl Report {
    fn table(table: Table) -> Self {
        Report {
            table,
            sidecars: Vec::new(),
            failure: None,
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn simulate(cfg: &SimulateConfig, seed: u64) -> CliResult<Report> {
    let burn_in = cfg.burn_in.unwrap_or_else(|| cfg.system.default_burn_in());
    let path = generate_trajectory(&cfg.system, cfg.n, seed, burn_in)?;
    let d = path.dim();
    let states: Vec<Vec<f64>> = match cfg.noise {
        Some(e) => add_noise(&path, &NoiseModel::uniform_box(e, d)?, seed)?,
        None => path.iter().map(<[f64]>::to_vec).collect(),
    };
    let mut table =
        Table::new(std::iter::once("index".to_string()).chain((0..d).map(|j| format!("x{j}"))));
    for (i, s) in states.iter().enumerate() {
        table.push(
            std::iter::once(i.to_string())
                .chain(s.iter().map(|&x| fmt_f64(x)))
                .collect(),
        );
    }
    Ok(Report::table(table))
}

pub fn mixing(cfg: &MixingConfig, config_dir: &Path, seed: u64) -> CliResult<Report> {
    let mut table = Table::new(["lag", "cor", "se", "used"]);
    let mut used = Vec::new();
    match cfg.source()? {
        MixingSource::File(path) => {
            let path = config_dir.join(path);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            for (lag, cor) in parse_correlation_csv(&text)? {
                let ok = cor.is_finite() && cor != 0.0;
                table.push(vec![
                    lag.to_string(),
                    fmt_f64(cor),
                    fmt_f64(f64::NAN),
                    u8::from(ok).to_string(),
                ]);
                if ok {
                    used.push((lag, cor));
                }
            }
        }
        MixingSource::Simulated {
            system,
            dictionary,
            n,
            max_lag,
            burn_in,
        } => {
            let path = generate_trajectory(&system, n, seed, burn_in)?;
            for lag in 1..=max_lag {
                // the strongest correlation over all dictionary pairs
                let mut best: Option<mc::Estimate> = None;
                for h in &dictionary {
                    for g in &dictionary {
                        let est = empirical_correlation_with_se(
                            &path,
                            |s| h.eval(s),
                            |s| g.eval(s),
                            lag,
                        )?;
                        if best.map_or(true, |b| est.mean.abs() > b.mean.abs()) {
                            best = Some(est);
                        }
                    }
                }
                let est = best.expect("dictionary is nonempty");
                let ok = est.mean != 0.0
                    && (est.se.is_nan() || est.mean.abs() >= cfg.significance * est.se);
                table.push(vec![
                    lag.to_string(),
                    fmt_f64(est.mean),
                    fmt_f64(est.se),
                    u8::from(ok).to_string(),
                ]);
                if ok {
                    used.push((lag as u64, est.mean));
                }
            }
        }
    }
    let mut report = Report::table(table);
    match fit_geometric_rate(&used) {
        Ok(fit) => report.sidecars.push(("rate.json", to_json(&fit))),
        Err(e) => report.failure = Some(e.into()),
    }
    Ok(report)
}

pub fn bound(cfg: &BoundConfig) -> CliResult<Report> {
    cfg.validate()?;
    let mut table = Table::new(["n", "eps"].into_iter().chain(COMPARATOR_NAMES));
    for &n in &cfg.n_grid {
        for &eps in &cfg.eps_grid {
            let rows = comparator_bounds(n, eps, &cfg.bounds, &cfg.comparators)?;
            let mut row = vec![n.to_string(), fmt_f64(eps)];
            row.extend(
                rows.iter()
                    .map(|r| r.value.map(fmt_f64).unwrap_or_default()),
            );
            table.push(row);
        }
    }
    Ok(Report::table(table))
}

#[derive(Serialize)]
struct ValidationSummary {
    n0: u64,
    pilot_mean: f64,
    violations: usize,
}

pub fn validate(cfg: &ValidateConfig, seed: u64) -> CliResult<Report> {
    cfg.validate()?;
    let tv = TailValidationConfig {
        system: cfg.system.clone(),
        fb: cfg.bounds,
        rate: cfg.rate,
        n: cfg.n,
        eps_grid: cfg.eps_grid.clone(),
        replicas: cfg.replicas,
        seed,
        pilot_len: cfg.pilot_len,
        iid_surrogate: cfg.iid_surrogate,
    };
    let h = &cfg.observable;
    let result = mc_validate_tail(&tv, |s| h.eval(s))?;
    let mut table = Table::new(["eps", "empirical_tail", "se", "bound", "violated"]);
    for r in &result.rows {
        table.push(vec![
            fmt_f64(r.eps),
            fmt_f64(r.empirical_tail),
            fmt_f64(r.se),
            fmt_f64(r.bound),
            u8::from(r.violated).to_string(),
        ]);
    }
    let count = result.rows.iter().filter(|r| r.violated).count();
    let mut report = Report::table(table);
    report.sidecars.push((
        "summary.json",
        to_json(&ValidationSummary {
            n0: result.n0,
            pilot_mean: result.pilot_mean,
            violations: count,
        }),
    ));
    if count > 0 {
        report.failure = Some(CliError::Violation {
            count,
            total: result.rows.len(),
        });
    }
    Ok(report)
}

#[derive(Serialize)]
struct RatesSummary<'a> {
    summary: &'a [cmixlab::experiments::RateSummary],
    slope: Option<f64>,
}

/// `seed_offset` shifts every configured seed, so `--seed` picks a fresh but
/// reproducible set of replicates.
pub fn rates(cfg: &RatesConfig, seed_offset: u64) -> CliResult<Report> {
    let exp = RateExperiment {
        system: cfg.system.clone(),
        target: cfg.target.clone(),
        noise: cfg.noise,
        loss: cfg.loss.spec()?,
        sizes: cfg.sizes.clone(),
        seeds: cfg
            .seeds
            .iter()
            .map(|s| s.wrapping_add(seed_offset))
            .collect(),
        selection: cfg.selection,
        iid_inputs: cfg.iid_inputs,
        test_size: cfg.test_size,
    };
    exp.validate()?;
    let result = exp.run()?;
    let mut table = Table::new(["n", "seed", "lambda", "sigma", "excess_risk"]);
    for r in &result.rows {
        table.push(vec![
            r.n.to_string(),
            r.seed.to_string(),
            fmt_f64(r.lambda),
            fmt_f64(r.sigma),
            fmt_f64(r.excess_risk),
        ]);
    }
    let mut report = Report::table(table);
    report.sidecars.push((
        "summary.json",
        to_json(&RatesSummary {
            summary: &result.summary,
            slope: result.slope,
        }),
    ));
    Ok(report)
}

pub fn forecast(cfg: &ForecastConfig, seed: u64) -> CliResult<Report> {
    cfg.validate()?;
    let loss = cfg.loss.spec()?;
    let d = cfg.system.dim();
    let noise = NoiseModel::uniform_box(cfg.noise, d)?;
    let mut table = Table::new([
        "n",
        "coordinate",
        "lambda",
        "sigma",
        "train_risk",
        "mc_risk",
        "se",
    ]);
    for &n in &cfg.sizes {
        let ds = if cfg.iid_inputs {
            build_pairs_iid(&cfg.system, &noise, n, seed)?
        } else {
            build_pairs(&cfg.system, &noise, n, seed)?
        };
        let grid = make_hypergrid(ds.len(), d, cfg.grid_cap)?;
        let f = train_forecaster(&ds, &loss, &grid)?;
        let risk_seed = mc::replica_seed(seed, n as u64);
        for (j, (model, sel)) in f.models().iter().zip(f.selections()).enumerate() {
            let risk = coordinate_risk_mc(
                model,
                j,
                &cfg.system,
                &noise,
                &loss,
                cfg.mc_samples,
                risk_seed,
            )?;
            table.push(vec![
                n.to_string(),
                j.to_string(),
                fmt_f64(sel.lambda),
                fmt_f64(sel.sigma),
                fmt_f64(sel.train_risk),
                fmt_f64(risk.mean),
                fmt_f64(risk.se),
            ]);
        }
    }
    Ok(Report::table(table))
}
