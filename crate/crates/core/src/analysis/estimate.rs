//! Monte Carlo estimators for survival and return probabilities.

use super::growth::ProcessKind;
use crate::dynamics::{brw_step, cp_step, single_particle, singleton, total_particles};
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::rng::{domain_tag, TrialStream};
use crate::stats::{wilson_interval, Z95};
use crate::topology::SiteGraph;
use rayon::prelude::*;
use serde::Serialize;

/// A Monte Carlo estimate with a Wilson 95% confidence interval.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub replicates: u64,
    /// Runs cut short by the population guard.
    pub censored: u64,
    pub seed: u64,
}

fn binomial_estimate(successes: u64, n: u64, censored: u64, seed: u64) -> Estimate {
    let p = successes as f64 / n as f64;
    let (ci_low, ci_high) = wilson_interval(successes, n, Z95);
    Estimate {
        value: p,
        stderr: (p * (1.0 - p) / n as f64).sqrt(),
        ci_low,
        ci_high,
        replicates: n,
        censored,
        seed,
    }
}

/// Per-step view of either process: population and origin occupancy.
struct StepView {
    population: u64,
    origin_occupied: bool,
}

fn drive<G: SiteGraph>(
    graph: &G,
    params: &ModelParams,
    kind: ProcessKind,
    horizon: u64,
    stream: &TrialStream,
    mut visit: impl FnMut(u64, StepView) -> bool,
) -> Result<()> {
    let origin = graph.origin();
    match kind {
        ProcessKind::Contact => {
            let mut state = singleton(origin.clone());
            for t in 0..horizon {
                state = cp_step(graph, params, &state, stream, t)?;
                let view = StepView {
                    population: state.len() as u64,
                    origin_occupied: state.contains(&origin),
                };
                if !visit(t + 1, view) {
                    break;
                }
            }
        }
        ProcessKind::Branching => {
            let mut state = single_particle(origin.clone());
            for t in 0..horizon {
                state = brw_step(graph, params, &state, stream, t)?;
                let view = StepView {
                    population: total_particles(&state),
                    origin_occupied: state.contains_key(&origin),
                };
                if !visit(t + 1, view) {
                    break;
                }
            }
        }
    }
    Ok(())
}

/// Outcome of one replicate of the survival experiment.
enum SurvivalRun {
    Dead,
    Alive { guard_tripped: bool },
}

fn survival_replicate<G: SiteGraph>(
    graph: &G,
    params: &ModelParams,
    kind: ProcessKind,
    horizon: u64,
    stream: &TrialStream,
    cap: u64,
) -> Result<SurvivalRun> {
    let mut outcome = SurvivalRun::Alive {
        guard_tripped: false,
    };
    drive(graph, params, kind, horizon, stream, |_, view| {
        if view.population == 0 {
            outcome = SurvivalRun::Dead;
            return false;
        }
        // A population past the cap cannot plausibly die before the
        // horizon; classify as alive instead of burning memory.
        if view.population > cap {
            outcome = SurvivalRun::Alive {
                guard_tripped: true,
            };
            return false;
        }
        true
    })?;
    Ok(outcome)
}

/// Fraction of replicates alive at the horizon, started from a single
/// infection at the origin. Weak-survival proxy for
/// `P(|A_t| > 0 eventually)`. Guard-tripped runs count as alive.
pub fn estimate_survival_probability<G>(
    graph: &G,
    params: &ModelParams,
    horizon: u64,
    replicates: u64,
    master_seed: u64,
    guard_cap: u64,
) -> Result<Estimate>
where
    G: SiteGraph + Sync,
    G::Site: Send,
{
    estimate_survival_probability_process(
        graph,
        params,
        ProcessKind::Contact,
        horizon,
        replicates,
        master_seed,
        guard_cap,
    )
}

/// Survival estimator for either process kind.
pub fn estimate_survival_probability_process<G>(
    graph: &G,
    params: &ModelParams,
    kind: ProcessKind,
    horizon: u64,
    replicates: u64,
    master_seed: u64,
    guard_cap: u64,
) -> Result<Estimate>
where
    G: SiteGraph + Sync,
    G::Site: Send,
{
    if replicates == 0 {
        return Err(Error::invalid_argument("need at least one replicate"));
    }
    let domain = domain_tag("estimate_survival_probability");
    let runs: Result<Vec<SurvivalRun>> = (0..replicates)
        .into_par_iter()
        .map(|rep| {
            let stream = TrialStream::replicate(master_seed, domain, rep);
            survival_replicate(graph, params, kind, horizon, &stream, guard_cap)
        })
        .collect();
    let runs = runs?;
    let mut alive = 0;
    let mut censored = 0;
    for r in &runs {
        if let SurvivalRun::Alive { guard_tripped } = r {
            alive += 1;
            if *guard_tripped {
                censored += 1;
            }
        }
    }
    Ok(binomial_estimate(alive, replicates, censored, master_seed))
}

struct ReturnRun {
    returned: bool,
    guard_tripped: bool,
}

fn return_replicate<G: SiteGraph>(
    graph: &G,
    params: &ModelParams,
    kind: ProcessKind,
    horizon: u64,
    window: u64,
    stream: &TrialStream,
    cap: u64,
) -> Result<ReturnRun> {
    let mut last_origin_hit: Option<u64> = None;
    let mut t_end = horizon;
    let mut guard_tripped = false;
    drive(graph, params, kind, horizon, stream, |t, view| {
        if view.origin_occupied {
            last_origin_hit = Some(t);
        }
        if view.population == 0 {
            return false;
        }
        if view.population > cap {
            // Effective horizon shrinks to the guard time; the trailing
            // window below scales with it.
            t_end = t;
            guard_tripped = true;
            return false;
        }
        true
    })?;
    // Trailing window [t_end - w_eff, t_end]; for guard-censored runs the
    // window keeps the requested window/horizon proportion.
    let w_eff = if t_end == horizon {
        window
    } else {
        ((window as u128 * t_end as u128 + horizon as u128 - 1) / horizon as u128).max(1) as u64
    };
    let window_start = t_end.saturating_sub(w_eff);
    let returned = last_origin_hit.is_some_and(|t| t >= window_start);
    Ok(ReturnRun {
        returned,
        guard_tripped,
    })
}

/// Fraction of replicates in which the origin is reinfected during the
/// trailing window `[T - window, T]`. Strong-survival proxy for
/// `liminf P(0 in A_t) > 0`.
///
/// Runs stopped by the population guard are scored on the trailing
/// window of their effective horizon (same window/horizon proportion)
/// and reported in `censored`; extinction before the window scores as
/// not returned.
pub fn estimate_return_probability<G>(
    graph: &G,
    params: &ModelParams,
    horizon: u64,
    window: u64,
    replicates: u64,
    master_seed: u64,
    guard_cap: u64,
) -> Result<Estimate>
where
    G: SiteGraph + Sync,
    G::Site: Send,
{
    estimate_return_probability_process(
        graph,
        params,
        ProcessKind::Contact,
        horizon,
        window,
        replicates,
        master_seed,
        guard_cap,
    )
}

/// Return estimator for either process kind.
#[allow(clippy::too_many_arguments)]
pub fn estimate_return_probability_process<G>(
    graph: &G,
    params: &ModelParams,
    kind: ProcessKind,
    horizon: u64,
    window: u64,
    replicates: u64,
    master_seed: u64,
    guard_cap: u64,
) -> Result<Estimate>
where
    G: SiteGraph + Sync,
    G::Site: Send,
{
    if replicates == 0 {
        return Err(Error::invalid_argument("need at least one replicate"));
    }
    if window > horizon {
        return Err(Error::invalid_argument(format!(
            "window {window} exceeds horizon {horizon}"
        )));
    }
    let domain = domain_tag("estimate_return_probability");
    let runs: Result<Vec<ReturnRun>> = (0..replicates)
        .into_par_iter()
        .map(|rep| {
            let stream = TrialStream::replicate(master_seed, domain, rep);
            return_replicate(graph, params, kind, horizon, window, &stream, guard_cap)
        })
        .collect();
    let runs = runs?;
    let returned = runs.iter().filter(|r| r.returned).count() as u64;
    let censored = runs.iter().filter(|r| r.guard_tripped).count() as u64;
    Ok(binomial_estimate(
        returned,
        replicates,
        censored,
        master_seed,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::BigWorld;

    #[test]
    fn survival_degenerate_rates() {
        let g = BigWorld::new(1, 1);
        let dead = ModelParams::unconstrained(0.0, 0.0, 1, 1).unwrap();
        let est = estimate_survival_probability(&g, &dead, 20, 200, 1, 2000).unwrap();
        assert_eq!(est.value, 0.0);
        // Saturated rates: every run grows to the guard and counts alive.
        let full = ModelParams::unconstrained(3.0, 1.0, 1, 1).unwrap();
        let est = estimate_survival_probability(&g, &full, 20, 50, 1, 2000).unwrap();
        assert_eq!(est.value, 1.0);
        assert_eq!(est.censored, 50);
    }

    #[test]
    fn return_degenerate_rates() {
        let g = BigWorld::new(1, 1);
        // Self-edge probability 1: the origin is always infected, so every
        // run returns whether or not the guard shortens it.
        let full_self = ModelParams::unconstrained(3.0, 0.5, 1, 1).unwrap();
        let est = estimate_return_probability(&g, &full_self, 20, 4, 50, 1, 2000).unwrap();
        assert_eq!(est.value, 1.0);
        let dead = ModelParams::unconstrained(0.0, 0.0, 1, 1).unwrap();
        let est = estimate_return_probability(&g, &dead, 20, 4, 200, 1, 2000).unwrap();
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn estimate_invariants() {
        let g = BigWorld::new(1, 1);
        let p = ModelParams::new(0.9, 0.4, 1, 1).unwrap();
        let est = estimate_survival_probability(&g, &p, 40, 400, 7, 10_000).unwrap();
        assert!(est.ci_low <= est.value && est.value <= est.ci_high);
        assert!(est.replicates >= est.censored);
    }

    #[test]
    fn window_validation() {
        let g = BigWorld::new(1, 1);
        let p = ModelParams::new(0.9, 0.4, 1, 1).unwrap();
        assert!(estimate_return_probability(&g, &p, 10, 11, 10, 1, 1000).is_err());
    }
}
