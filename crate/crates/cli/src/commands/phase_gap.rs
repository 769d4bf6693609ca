//! `swcp phase-gap`: bisect the weak- and strong-survival thresholds on
//! the big world at fixed ratio r and report whether the two intervals
//! separate at this budget.

use crate::config::Config;
use crate::csv_row;
use crate::manifest::RunManifest;
use crate::output::{Csv, OutDir};
use serde::Serialize;
use swcp_core::analysis::{
    bisect_critical, strong_survival_boundary_lambda, BisectConfig, BisectOutcome, PhaseClassifier,
};
use swcp_core::topology::BigWorld;
use swcp_core::{ModelParams, Result};

const KEYS: &[&str] = &[
    "r",
    "m",
    "d",
    "horizon",
    "window",
    "replicates",
    "threshold",
    "tolerance",
    "max_doublings",
    "survival_bracket",
    "return_bracket",
    "survival_guard_cap",
    "return_guard_cap",
    "seed",
    "out_dir",
    "workers",
];

#[derive(Serialize)]
struct Summary {
    r: f64,
    m: u32,
    d: u32,
    horizon: u64,
    replicates: u64,
    seed: u64,
    lambda1: (f64, f64),
    lambda2: (f64, f64),
    /// Conservative gap: lambda2 lower end minus lambda1 upper end.
    gap: f64,
    disjoint: bool,
    message: String,
    strong_survival_boundary_lambda: f64,
}

/// One estimator evaluation in the standard record shape.
#[derive(Serialize)]
struct EstimateRecord {
    operation: String,
    params: ModelParams,
    horizon: u64,
    replicates: u64,
    censored: u64,
    value: f64,
    stderr: f64,
    ci: (f64, f64),
    seed: u64,
}

fn estimate_records(
    outcome: &BisectOutcome,
    cfg: &BisectConfig,
    m: u32,
    d: u32,
) -> Result<Vec<EstimateRecord>> {
    let operation = match outcome.classifier {
        PhaseClassifier::Survival => "estimate_survival_probability",
        PhaseClassifier::Return => "estimate_return_probability",
    };
    outcome
        .trace
        .iter()
        .map(|p| {
            Ok(EstimateRecord {
                operation: operation.to_string(),
                params: ModelParams::from_lambda_r(p.lambda, cfg.ratio, m, d)?,
                horizon: cfg.horizon,
                replicates: p.estimate.replicates,
                censored: p.estimate.censored,
                value: p.estimate.value,
                stderr: p.estimate.stderr,
                ci: (p.estimate.ci_low, p.estimate.ci_high),
                seed: p.estimate.seed,
            })
        })
        .collect()
}

fn bracket(config: &Config, key: &str, default: (f64, f64)) -> Result<(f64, f64)> {
    let v = config.get_list_f64(key)?;
    match v.len() {
        0 => Ok(default),
        2 => Ok((v[0], v[1])),
        _ => Err(swcp_core::Error::invalid_parameter(format!(
            "config key `{key}` must be `lo,hi`"
        ))),
    }
}

fn trace_csv(outcome: &BisectOutcome) -> String {
    let mut csv = Csv::new(&[
        "iteration",
        "lambda",
        "estimate",
        "ci_low",
        "ci_high",
        "decision",
    ]);
    for p in &outcome.trace {
        csv_row!(
            csv,
            p.iteration,
            p.lambda,
            p.estimate.value,
            p.estimate.ci_low,
            p.estimate.ci_high,
            p.decision
        );
    }
    csv.finish()
}

pub fn run(config: &Config, out: &OutDir) -> Result<()> {
    config.check_keys(KEYS)?;
    let r = config.get_f64("r", 2.0)?;
    let m = config.get_u32("m", 10)?;
    let d = config.get_u32("d", 1)?;
    let seed = config.get_u64("seed", 0)?;
    let horizon = config.get_u64("horizon", 300)?;
    let replicates = config.get_u64("replicates", 4000)?;
    let base = BisectConfig {
        ratio: r,
        bracket: (0.0, 0.0),
        horizon,
        window: config.get_u64("window", horizon / 5)?,
        replicates,
        threshold: config.get_f64("threshold", 0.02)?,
        tolerance: config.get_f64("tolerance", 0.05)?,
        max_doublings: config.get_u32("max_doublings", 2)?,
        guard_cap: 0,
        gamma: 0.0,
        process: swcp_core::analysis::ProcessKind::Contact,
        seed,
    };
    let survival_cfg = BisectConfig {
        bracket: bracket(config, "survival_bracket", (0.85, 1.25))?,
        guard_cap: config.get_u64("survival_guard_cap", 5_000)?,
        ..base
    };
    let return_cfg = BisectConfig {
        bracket: bracket(config, "return_bracket", (1.05, 1.45))?,
        guard_cap: config.get_u64("return_guard_cap", 30_000)?,
        ..base
    };

    RunManifest::new(
        "phase-gap",
        config,
        &[
            "phase_gap_survival_trace.csv",
            "phase_gap_return_trace.csv",
            "phase_gap_estimates.json",
            "phase_gap_summary.json",
        ],
    )
    .write(out.path())?;

    let graph = BigWorld::new(m, d);
    let survival = bisect_critical(&graph, PhaseClassifier::Survival, &survival_cfg)?;
    out.write_text("phase_gap_survival_trace.csv", &trace_csv(&survival))?;
    let ret = bisect_critical(&graph, PhaseClassifier::Return, &return_cfg)?;
    out.write_text("phase_gap_return_trace.csv", &trace_csv(&ret))?;

    let mut records = estimate_records(&survival, &survival_cfg, m, d)?;
    records.extend(estimate_records(&ret, &return_cfg, m, d)?);
    out.write_json("phase_gap_estimates.json", &records)?;

    let lambda1 = (survival.lambda_low, survival.lambda_high);
    let lambda2 = (ret.lambda_low, ret.lambda_high);
    let gap = lambda2.0 - lambda1.1;
    let disjoint = gap > 0.0;
    let summary = Summary {
        r,
        m,
        d,
        horizon,
        replicates,
        seed,
        lambda1,
        lambda2,
        gap,
        disjoint,
        message: if disjoint {
            "critical intervals are disjoint".into()
        } else {
            "gap not resolved at this budget".into()
        },
        strong_survival_boundary_lambda: strong_survival_boundary_lambda(r)?,
    };
    out.write_json("phase_gap_summary.json", &summary)
}
