//! `swcp growth-rate`: exponential growth/decay rate of E|B_t| over a
//! lambda grid, with the branching random walk as an exact control and
//! submultiplicativity residuals.

use crate::config::Config;
use crate::csv_row;
use crate::manifest::RunManifest;
use crate::output::{Csv, OutDir};
use serde::Serialize;
use swcp_core::analysis::{GrowthConfig, GrowthRateEstimate, GrowthSamples, ProcessKind};
use swcp_core::rng::mix;
use swcp_core::topology::BigWorld;
use swcp_core::{Error, ModelParams, Result};

const KEYS: &[&str] = &[
    "r",
    "m",
    "d",
    "lambda_values",
    "t_min",
    "t_max",
    "replicates",
    "batches",
    "guard_cap",
    "residual_pairs",
    "brw_control",
    "seed",
    "out_dir",
    "workers",
];

#[derive(Serialize)]
struct ResidualReport {
    t: u64,
    s: u64,
    residual: f64,
    stderr: f64,
}

#[derive(Serialize)]
struct LambdaReport {
    lambda: f64,
    contact: GrowthRateEstimate,
    branching: Option<GrowthRateEstimate>,
    log_lambda: f64,
    residuals: Vec<ResidualReport>,
}

#[derive(Serialize)]
struct Summary {
    r: f64,
    m: u32,
    d: u32,
    t_range: (u64, u64),
    replicates: u64,
    seed: u64,
    rows: Vec<LambdaReport>,
    /// Largest lambda with significantly negative rate and smallest with
    /// significantly positive rate (|z| > 3), when both exist.
    sign_change_bracket: Option<(f64, f64)>,
}

fn parse_pairs(config: &Config) -> Result<Vec<(u64, u64)>> {
    match config.get_str("residual_pairs") {
        None => Ok(vec![(5, 5), (5, 10)]),
        Some(raw) => raw
            .split(',')
            .map(|item| {
                let (a, b) = item.trim().split_once(':').ok_or_else(|| {
                    Error::invalid_parameter(format!("residual_pairs item {item:?} must be t:s"))
                })?;
                let t = a.trim().parse().map_err(|_| {
                    Error::invalid_parameter(format!("bad residual pair component {a:?}"))
                })?;
                let s = b.trim().parse().map_err(|_| {
                    Error::invalid_parameter(format!("bad residual pair component {b:?}"))
                })?;
                Ok((t, s))
            })
            .collect(),
    }
}

pub fn run(config: &Config, out: &OutDir) -> Result<()> {
    config.check_keys(KEYS)?;
    let r = config.get_f64("r", 2.0)?;
    let m = config.get_u32("m", 5)?;
    let d = config.get_u32("d", 1)?;
    let lambdas = config.get_list_f64("lambda_values")?;
    if lambdas.is_empty() {
        return Err(Error::invalid_parameter(
            "config key `lambda_values` must list lambdas",
        ));
    }
    let t_min = config.get_u64("t_min", 1)?;
    let t_max = config.get_u64("t_max", 15)?;
    let replicates = config.get_u64("replicates", 20_000)?;
    let batches = config.get_u64("batches", 20)?;
    let guard_cap = config.get_u64("guard_cap", 1_000_000)?;
    let brw_control = config.get_u64("brw_control", 1)? != 0;
    let pairs = parse_pairs(config)?;
    let seed = config.get_u64("seed", 0)?;

    RunManifest::new(
        "growth-rate",
        config,
        &[
            "growth_rate.csv",
            "growth_curves.csv",
            "growth_rate_summary.json",
        ],
    )
    .write(out.path())?;

    let graph = BigWorld::new(m, d);
    let mut rate_csv = Csv::new(&[
        "lambda",
        "c2_hat",
        "stderr",
        "degenerate",
        "brw_c2_hat",
        "brw_stderr",
        "log_lambda",
    ]);
    let mut curves = Csv::new(&["lambda", "process", "t", "log_mean"]);
    let mut rows = Vec::new();

    for &lambda in &lambdas {
        let params = ModelParams::from_lambda_r(lambda, r, m, d)?;
        let cfg = GrowthConfig {
            t_max,
            replicates,
            batches,
            guard_cap,
            seed: mix(seed ^ lambda.to_bits()),
        };
        let samples = GrowthSamples::collect(&graph, &params, ProcessKind::Contact, &cfg)?;
        let contact = samples.fit(t_min, t_max)?;
        for &(t, lm) in &contact.log_means {
            csv_row!(curves, lambda, "contact", t, lm);
        }
        let mut residuals = Vec::new();
        for &(t, s) in &pairs {
            if t + s <= t_max && !contact.degenerate {
                if let Ok((residual, stderr)) = samples.submultiplicativity_residual(t, s) {
                    residuals.push(ResidualReport {
                        t,
                        s,
                        residual,
                        stderr,
                    });
                }
            }
        }
        let branching = if brw_control {
            let b = GrowthSamples::collect(&graph, &params, ProcessKind::Branching, &cfg)?
                .fit(t_min, t_max)?;
            for &(t, lm) in &b.log_means {
                csv_row!(curves, lambda, "branching", t, lm);
            }
            Some(b)
        } else {
            None
        };
        csv_row!(
            rate_csv,
            lambda,
            contact.c2_hat,
            contact.slope_stderr,
            contact.degenerate,
            branching
                .as_ref()
                .map(|b| b.c2_hat.to_string())
                .unwrap_or_default(),
            branching
                .as_ref()
                .map(|b| b.slope_stderr.to_string())
                .unwrap_or_default(),
            lambda.ln()
        );
        rows.push(LambdaReport {
            lambda,
            contact,
            branching,
            log_lambda: lambda.ln(),
            residuals,
        });
    }

    let neg = rows
        .iter()
        .filter(|row| {
            row.contact.degenerate
                || (row.contact.c2_hat < 0.0
                    && row.contact.c2_hat / row.contact.slope_stderr < -3.0)
        })
        .map(|row| row.lambda)
        .fold(None::<f64>, |acc, l| Some(acc.map_or(l, |a| a.max(l))));
    let pos = rows
        .iter()
        .filter(|row| {
            !row.contact.degenerate
                && row.contact.c2_hat > 0.0
                && row.contact.c2_hat / row.contact.slope_stderr > 3.0
        })
        .map(|row| row.lambda)
        .fold(None::<f64>, |acc, l| Some(acc.map_or(l, |a| a.min(l))));
    let sign_change_bracket = match (neg, pos) {
        (Some(a), Some(b)) if a < b => Some((a, b)),
        _ => None,
    };

    out.write_text("growth_rate.csv", &rate_csv.finish())?;
    out.write_text("growth_curves.csv", &curves.finish())?;
    out.write_json(
        "growth_rate_summary.json",
        &Summary {
            r,
            m,
            d,
            t_range: (t_min, t_max),
            replicates,
            seed,
            rows,
            sign_change_bracket,
        },
    )
}
