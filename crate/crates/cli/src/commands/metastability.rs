//! `swcp metastability`: survival time from the all-infected state on the
//! modified (gamma > 0) small world, across a ladder of torus sizes.

use crate::config::Config;
use crate::csv_row;
use crate::manifest::RunManifest;
use crate::output::{Csv, OutDir};
use rayon::prelude::*;
use serde::Serialize;
use swcp_core::dynamics::{run_all_ones, StopKind};
use swcp_core::rng::{domain_tag, mix, SeqRng, TrialStream};
use swcp_core::stats::{median, ols};
use swcp_core::topology::make_small_world;
use swcp_core::{Error, Result};

const KEYS: &[&str] = &[
    "alpha",
    "beta",
    "lambda",
    "r",
    "gamma",
    "m",
    "d",
    "sides",
    "runs",
    "horizon",
    "lambda1_source",
    "lambda_margin",
    "bootstrap",
    "seed",
    "out_dir",
    "workers",
];

#[derive(Serialize)]
struct SideReport {
    side: u32,
    runs: u64,
    censored: u64,
    median_time: f64,
    /// True when at least half the runs hit the horizon: the median is
    /// only a lower bound and the side is excluded from the fit.
    median_censored: bool,
    q1: f64,
    q3: f64,
    log_median: Option<f64>,
}

#[derive(Serialize)]
struct Summary {
    params: swcp_core::ModelParams,
    horizon: u64,
    seed: u64,
    sides: Vec<SideReport>,
    fitted_sides: Vec<u32>,
    /// Least-squares slope of log median survival vs R^d.
    slope: Option<f64>,
    slope_stderr: Option<f64>,
    t_statistic: Option<f64>,
    lambda_source: Option<String>,
}

fn quartiles(sorted: &[f64]) -> (f64, f64) {
    let q = |frac: f64| {
        let idx = ((sorted.len() as f64 - 1.0) * frac).round() as usize;
        sorted[idx]
    };
    (q(0.25), q(0.75))
}

/// Lambda choice: explicit `lambda`/`alpha` keys win; otherwise consume a
/// cached phase-gap summary and sit `lambda_margin` above its certified
/// lambda_1 upper end.
fn resolve_lambda(config: &Config) -> Result<(Option<f64>, Option<String>)> {
    if config.get_str("lambda").is_some() || config.get_str("alpha").is_some() {
        return Ok((None, None));
    }
    let source = config.get_str("lambda1_source").ok_or_else(|| {
        Error::invalid_parameter(
            "set `lambda`/`alpha` explicitly or point `lambda1_source` at a phase-gap summary",
        )
    })?;
    let text = std::fs::read_to_string(source)
        .map_err(|e| Error::Parse(format!("cannot read {source}: {e}")))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{source}: {e}")))?;
    let lambda1_high = value["lambda1"][1]
        .as_f64()
        .ok_or_else(|| Error::Parse(format!("{source}: missing lambda1 interval")))?;
    let margin = config.get_f64("lambda_margin", 0.1)?;
    Ok((Some(lambda1_high + margin), Some(source.to_string())))
}

pub fn run(config: &Config, out: &OutDir) -> Result<()> {
    config.check_keys(KEYS)?;
    let m = config.get_u32("m", 1)?;
    let d = config.get_u32("d", 1)?;
    let (resolved_lambda, lambda_source) = resolve_lambda(config)?;
    let params = match resolved_lambda {
        Some(lambda) => {
            let r = config.get_f64("r", 2.0)?;
            swcp_core::ModelParams::from_lambda_r(lambda, r, m, d)?
        }
        None => super::params_from(config, m, d)?,
    }
    .with_gamma(config.get_f64("gamma", 0.1)?)?;
    if params.gamma <= 0.0 {
        return Err(Error::invalid_parameter(
            "metastability needs gamma > 0 (the random-neighbor channel drives the recovery)",
        ));
    }
    let sides = config.get_list_u64("sides")?;
    if sides.is_empty() {
        return Err(Error::invalid_parameter(
            "config key `sides` must list torus sizes",
        ));
    }
    let runs = config.get_u64("runs", 200)?;
    if runs == 0 {
        return Err(Error::invalid_parameter("need at least one run per side"));
    }
    let horizon = config.get_u64("horizon", 100_000)?;
    let bootstrap = config.get_u64("bootstrap", 200)?;
    let seed = config.get_u64("seed", 0)?;

    RunManifest::new(
        "metastability",
        config,
        &["metastability_runs.csv", "metastability_summary.json"],
    )
    .write(out.path())?;

    let mut csv = Csv::new(&["side", "replicate", "seed", "kind", "time"]);
    let mut reports = Vec::new();
    let mut all_times: Vec<(u32, Vec<f64>)> = Vec::new();
    for &side in &sides {
        let side = u32::try_from(side)
            .map_err(|_| Error::invalid_parameter(format!("side {side} too large")))?;
        let outcomes: Vec<(u64, StopKind, u64)> = (0..runs)
            .into_par_iter()
            .map(|rep| -> Result<(u64, StopKind, u64)> {
                let graph_seed = mix(seed ^ mix(((side as u64) << 33) ^ rep));
                let g = make_small_world(side, m, d, graph_seed)?;
                let stream = TrialStream::replicate(seed, domain_tag("metastability"), rep);
                let (out, _) = run_all_ones(&g, &params, horizon, &stream, horizon)?;
                Ok((graph_seed, out.kind, out.time))
            })
            .collect::<Result<Vec<_>>>()?;
        for (rep, (graph_seed, kind, time)) in outcomes.iter().enumerate() {
            csv_row!(csv, side, rep, graph_seed, kind, time);
        }
        let mut sorted: Vec<f64> = outcomes.iter().map(|o| o.2 as f64).collect();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let med = median(&sorted);
        let censored = outcomes
            .iter()
            .filter(|o| o.1 == StopKind::Censored)
            .count() as u64;
        let median_censored = censored * 2 >= runs;
        let (q1, q3) = quartiles(&sorted);
        reports.push(SideReport {
            side,
            runs,
            censored,
            median_time: med,
            median_censored,
            q1,
            q3,
            log_median: (!median_censored).then(|| med.ln()),
        });
        if !median_censored {
            all_times.push((side, sorted));
        }
    }
    out.write_text("metastability_runs.csv", &csv.finish())?;

    // Fit log median against R^d over the uncensored sides; the slope's
    // standard error comes from a seeded bootstrap within each side.
    let (slope, slope_se, t_stat, fitted) = if all_times.len() >= 2 {
        let pts: Vec<(f64, f64)> = all_times
            .iter()
            .map(|(side, ts)| ((*side as f64).powi(d as i32), median(ts).ln()))
            .collect();
        let (_, slope) = ols(&pts);
        let mut rng = SeqRng::new(mix(seed ^ 0x0B00_7575)); // bootstrap stream
        let mut slopes = Vec::with_capacity(bootstrap as usize);
        for _ in 0..bootstrap {
            let pts: Vec<(f64, f64)> = all_times
                .iter()
                .map(|(side, ts)| {
                    let resampled: Vec<f64> = (0..ts.len())
                        .map(|_| ts[rng.next_below(ts.len() as u64) as usize])
                        .collect();
                    (
                        (*side as f64).powi(d as i32),
                        median(&resampled).max(1.0).ln(),
                    )
                })
                .collect();
            slopes.push(ols(&pts).1);
        }
        let se = swcp_core::stats::stderr_of_mean(&slopes) * (slopes.len() as f64).sqrt();
        (
            Some(slope),
            Some(se),
            Some(slope / se),
            all_times.iter().map(|(s, _)| *s).collect(),
        )
    } else {
        (None, None, None, Vec::new())
    };

    let summary = Summary {
        params,
        horizon,
        seed,
        sides: reports,
        fitted_sides: fitted,
        slope,
        slope_stderr: slope_se,
        t_statistic: t_stat,
        lambda_source,
    };
    out.write_json("metastability_summary.json", &summary)
}
