//! Numerical inversion of the survival/return classifiers in lambda.

use super::estimate::{
    estimate_return_probability_process, estimate_survival_probability_process, Estimate,
};
use super::growth::ProcessKind;
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::topology::SiteGraph;
use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseClassifier {
    /// Alive at the horizon: weak-survival proxy, locates lambda_1.
    Survival,
    /// Origin reinfected in the trailing window: strong-survival proxy,
    /// locates lambda_2.
    Return,
}

impl fmt::Display for PhaseClassifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PhaseClassifier::Survival => "survival",
            PhaseClassifier::Return => "return",
        })
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BisectConfig {
    /// Fixed ratio r = alpha/beta along the bisection.
    pub ratio: f64,
    pub bracket: (f64, f64),
    pub horizon: u64,
    /// Trailing window for the return classifier.
    pub window: u64,
    pub replicates: u64,
    pub threshold: f64,
    /// Stop when the bracket is no wider than this.
    pub tolerance: f64,
    /// Replicate doublings allowed when the CI straddles the threshold.
    pub max_doublings: u32,
    pub guard_cap: u64,
    pub gamma: f64,
    /// Contact process or branching random walk.
    pub process: ProcessKind,
    pub seed: u64,
}

impl BisectConfig {
    pub fn desk_scale(ratio: f64, seed: u64) -> Self {
        BisectConfig {
            ratio,
            bracket: (0.5, 2.0),
            horizon: 300,
            window: 60,
            replicates: 4000,
            threshold: 0.02,
            tolerance: 0.05,
            max_doublings: 2,
            guard_cap: 30_000,
            gamma: 0.0,
            process: ProcessKind::Contact,
            seed,
        }
    }
}

/// How a bisection point compared against the threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    Below,
    Above,
    /// CI still straddled the threshold after all replicate doublings;
    /// resolved by the point estimate.
    TieBelow,
    TieAbove,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Below => "below",
            Decision::Above => "above",
            Decision::TieBelow => "tie-below",
            Decision::TieAbove => "tie-above",
        })
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BisectPoint {
    pub iteration: u32,
    pub lambda: f64,
    pub estimate: Estimate,
    pub decision: Decision,
}

#[derive(Clone, Debug, Serialize)]
pub struct BisectOutcome {
    pub classifier: PhaseClassifier,
    pub lambda_low: f64,
    pub lambda_high: f64,
    pub trace: Vec<BisectPoint>,
}

fn classify<G>(
    graph: &G,
    classifier: PhaseClassifier,
    cfg: &BisectConfig,
    lambda: f64,
    replicates: u64,
) -> Result<Estimate>
where
    G: SiteGraph + Sync,
    G::Site: Send,
{
    let (m, d) = graph.radius_spec();
    let params = ModelParams::from_lambda_r(lambda, cfg.ratio, m, d)?.with_gamma(cfg.gamma)?;
    match classifier {
        PhaseClassifier::Survival => estimate_survival_probability_process(
            graph,
            &params,
            cfg.process,
            cfg.horizon,
            replicates,
            cfg.seed,
            cfg.guard_cap,
        ),
        PhaseClassifier::Return => estimate_return_probability_process(
            graph,
            &params,
            cfg.process,
            cfg.horizon,
            cfg.window,
            replicates,
            cfg.seed,
            cfg.guard_cap,
        ),
    }
}

fn decide<G>(
    graph: &G,
    classifier: PhaseClassifier,
    cfg: &BisectConfig,
    lambda: f64,
) -> Result<(Estimate, Decision)>
where
    G: SiteGraph + Sync,
    G::Site: Send,
{
    let mut n = cfg.replicates;
    let mut doublings = 0;
    loop {
        let est = classify(graph, classifier, cfg, lambda, n)?;
        if est.ci_high < cfg.threshold {
            return Ok((est, Decision::Below));
        }
        if est.ci_low > cfg.threshold {
            return Ok((est, Decision::Above));
        }
        if doublings >= cfg.max_doublings {
            let d = if est.value >= cfg.threshold {
                Decision::TieAbove
            } else {
                Decision::TieBelow
            };
            return Ok((est, d));
        }
        doublings += 1;
        n *= 2;
    }
}

/// Bisect the lambda at which the classifier estimate crosses the
/// threshold, at fixed ratio r. All points share the master seed, so the
/// classifier is evaluated under a common coupling and its estimates are
/// monotone along the trace up to censoring effects.
///
/// Returns a bracket `(lambda_low, lambda_high)` of width at most the
/// configured tolerance, with the classifier below the threshold at
/// `lambda_low` and above it at `lambda_high`, plus the full trace.
pub fn bisect_critical<G>(
    graph: &G,
    classifier: PhaseClassifier,
    cfg: &BisectConfig,
) -> Result<BisectOutcome>
where
    G: SiteGraph + Sync,
    G::Site: Send,
{
    let (mut lo, mut hi) = cfg.bracket;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::invalid_parameter(format!(
            "bracket must satisfy lambda_low < lambda_high, got ({lo}, {hi})"
        )));
    }
    let mut trace = Vec::new();
    let mut iteration = 0;

    let (est_lo, dec_lo) = decide(graph, classifier, cfg, lo)?;
    trace.push(BisectPoint {
        iteration,
        lambda: lo,
        estimate: est_lo,
        decision: dec_lo,
    });
    if matches!(dec_lo, Decision::Above | Decision::TieAbove) {
        return Err(Error::Bracket(format!(
            "classifier {classifier} is already above threshold {} at the lower bracket end \
             lambda = {lo} (estimate {:.4}, ci [{:.4}, {:.4}])",
            cfg.threshold, est_lo.value, est_lo.ci_low, est_lo.ci_high
        )));
    }

    iteration += 1;
    let (est_hi, dec_hi) = decide(graph, classifier, cfg, hi)?;
    trace.push(BisectPoint {
        iteration,
        lambda: hi,
        estimate: est_hi,
        decision: dec_hi,
    });
    if matches!(dec_hi, Decision::Below | Decision::TieBelow) {
        return Err(Error::Bracket(format!(
            "classifier {classifier} is still below threshold {} at the upper bracket end \
             lambda = {hi} (estimate {:.4}, ci [{:.4}, {:.4}])",
            cfg.threshold, est_hi.value, est_hi.ci_low, est_hi.ci_high
        )));
    }

    while hi - lo > cfg.tolerance && iteration < 60 {
        iteration += 1;
        let mid = 0.5 * (lo + hi);
        let (est, dec) = decide(graph, classifier, cfg, mid)?;
        trace.push(BisectPoint {
            iteration,
            lambda: mid,
            estimate: est,
            decision: dec,
        });
        match dec {
            Decision::Below | Decision::TieBelow => lo = mid,
            Decision::Above | Decision::TieAbove => hi = mid,
        }
    }

    Ok(BisectOutcome {
        classifier,
        lambda_low: lo,
        lambda_high: hi,
        trace,
    })
}
