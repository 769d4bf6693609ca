//! Exponential growth-rate estimation for E|B_t|.

use crate::dynamics::{brw_step, cp_step, single_particle, singleton, total_particles};
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::rng::{domain_tag, TrialStream};
use crate::stats::{jackknife_stderr, ols};
use crate::topology::SiteGraph;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProcessKind {
    Contact,
    Branching,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GrowthConfig {
    pub t_max: u64,
    pub replicates: u64,
    /// Replicate batches for jackknife standard errors.
    pub batches: u64,
    pub guard_cap: u64,
    pub seed: u64,
}

/// Per-time-step population means over a replicate ensemble, batched for
/// jackknife error estimation.
#[derive(Clone, Debug)]
pub struct GrowthSamples {
    t_max: u64,
    batches: u64,
    /// `batch_totals[b][t]`: summed population of batch b at time t.
    batch_totals: Vec<Vec<f64>>,
    /// Replicates contributing to each batch.
    batch_sizes: Vec<u64>,
    seed: u64,
}

/// Least-squares growth rate of `log E|B_t|`.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthRateEstimate {
    /// Per-step exponential rate; `-inf` in the degenerate regime where
    /// some mean in range is zero (deep subcritical).
    pub c2_hat: f64,
    pub slope_stderr: f64,
    pub t_range: (u64, u64),
    pub log_means: Vec<(u64, f64)>,
    pub degenerate: bool,
    pub replicates: u64,
    pub seed: u64,
}

impl GrowthSamples {
    /// Run `replicates` independent trajectories from a single origin
    /// seed and record the population at every step up to `t_max`.
    pub fn collect<G>(
        graph: &G,
        params: &ModelParams,
        kind: ProcessKind,
        cfg: &GrowthConfig,
    ) -> Result<Self>
    where
        G: SiteGraph + Sync,
        G::Site: Send,
    {
        if cfg.replicates == 0 || cfg.batches == 0 || cfg.replicates < cfg.batches {
            return Err(Error::invalid_argument(
                "need replicates >= batches >= 1 for growth estimation",
            ));
        }
        let domain = domain_tag(match kind {
            ProcessKind::Contact => "growth_rate_contact",
            ProcessKind::Branching => "growth_rate_branching",
        });
        let width = cfg.t_max as usize + 1;
        let b = cfg.batches as usize;

        let run_one = |rep: u64| -> Result<Vec<u64>> {
            let stream = TrialStream::replicate(cfg.seed, domain, rep);
            let mut pops = vec![0u64; width];
            match kind {
                ProcessKind::Contact => {
                    let mut state = singleton(graph.origin());
                    pops[0] = 1;
                    for t in 0..cfg.t_max {
                        state = cp_step(graph, params, &state, &stream, t)?;
                        let pop = state.len() as u64;
                        pops[t as usize + 1] = pop;
                        if pop == 0 {
                            break;
                        }
                        if pop > cfg.guard_cap {
                            return Err(Error::ResourceGuard {
                                time: t + 1,
                                population: pop,
                                cap: cfg.guard_cap,
                            });
                        }
                    }
                }
                ProcessKind::Branching => {
                    let mut state = single_particle(graph.origin());
                    pops[0] = 1;
                    for t in 0..cfg.t_max {
                        state = brw_step(graph, params, &state, &stream, t)?;
                        let pop = total_particles(&state);
                        pops[t as usize + 1] = pop;
                        if pop == 0 {
                            break;
                        }
                        if pop > cfg.guard_cap {
                            return Err(Error::ResourceGuard {
                                time: t + 1,
                                population: pop,
                                cap: cfg.guard_cap,
                            });
                        }
                    }
                }
            }
            Ok(pops)
        };

        let acc = (0..cfg.replicates)
            .into_par_iter()
            .try_fold(
                || vec![vec![0.0f64; width]; b],
                |mut acc, rep| -> Result<Vec<Vec<f64>>> {
                    let pops = run_one(rep)?;
                    let batch = (rep % cfg.batches) as usize;
                    for (t, &p) in pops.iter().enumerate() {
                        acc[batch][t] += p as f64;
                    }
                    Ok(acc)
                },
            )
            .try_reduce(
                || vec![vec![0.0f64; width]; b],
                |mut x, y| {
                    for (xb, yb) in x.iter_mut().zip(&y) {
                        for (xt, yt) in xb.iter_mut().zip(yb) {
                            *xt += yt;
                        }
                    }
                    Ok(x)
                },
            )?;

        let mut batch_sizes = vec![0u64; b];
        for rep in 0..cfg.replicates {
            batch_sizes[(rep % cfg.batches) as usize] += 1;
        }

        Ok(GrowthSamples {
            t_max: cfg.t_max,
            batches: cfg.batches,
            batch_totals: acc,
            batch_sizes,
            seed: cfg.seed,
        })
    }

    pub fn t_max(&self) -> u64 {
        self.t_max
    }

    pub fn replicates(&self) -> u64 {
        self.batch_sizes.iter().sum()
    }

    /// Ensemble mean population at time t.
    pub fn mean(&self, t: u64) -> f64 {
        let total: f64 = self.batch_totals.iter().map(|b| b[t as usize]).sum();
        total / self.replicates() as f64
    }

    /// Mean with batch `skip` left out.
    fn mean_without(&self, t: u64, skip: usize) -> f64 {
        let mut total = 0.0;
        let mut n = 0u64;
        for (i, b) in self.batch_totals.iter().enumerate() {
            if i != skip {
                total += b[t as usize];
                n += self.batch_sizes[i];
            }
        }
        total / n as f64
    }

    /// Least-squares slope of `log mean(t)` over `t in [t_min, t_max]`,
    /// with a jackknife-over-batches standard error. A zero mean anywhere
    /// in range reports the `-inf` regime instead of fitting.
    pub fn fit(&self, t_min: u64, t_max: u64) -> Result<GrowthRateEstimate> {
        if t_min >= t_max || t_max > self.t_max {
            return Err(Error::invalid_argument(format!(
                "need t_min < t_max <= {} (got {t_min}, {t_max})",
                self.t_max
            )));
        }
        let ts: Vec<u64> = (t_min..=t_max).collect();
        let means: Vec<f64> = ts.iter().map(|&t| self.mean(t)).collect();
        if means.iter().any(|&m| m == 0.0) {
            return Ok(GrowthRateEstimate {
                c2_hat: f64::NEG_INFINITY,
                slope_stderr: f64::NAN,
                t_range: (t_min, t_max),
                log_means: ts
                    .iter()
                    .zip(&means)
                    .map(|(&t, &m)| (t, if m > 0.0 { m.ln() } else { f64::NEG_INFINITY }))
                    .collect(),
                degenerate: true,
                replicates: self.replicates(),
                seed: self.seed,
            });
        }
        let pts: Vec<(f64, f64)> = ts
            .iter()
            .zip(&means)
            .map(|(&t, &m)| (t as f64, m.ln()))
            .collect();
        let (_, slope) = ols(&pts);

        let mut loo = Vec::with_capacity(self.batches as usize);
        for skip in 0..self.batches as usize {
            let pts: Option<Vec<(f64, f64)>> = ts
                .iter()
                .map(|&t| {
                    let m = self.mean_without(t, skip);
                    (m > 0.0).then(|| (t as f64, m.ln()))
                })
                .collect();
            match pts {
                Some(pts) => loo.push(ols(&pts).1),
                None => {
                    return Err(Error::domain(
                        "leave-one-out mean hit zero; raise replicates for this t range",
                    ))
                }
            }
        }

        Ok(GrowthRateEstimate {
            c2_hat: slope,
            slope_stderr: jackknife_stderr(&loo),
            t_range: (t_min, t_max),
            log_means: ts.iter().zip(&pts).map(|(&t, p)| (t, p.1)).collect(),
            degenerate: false,
            replicates: self.replicates(),
            seed: self.seed,
        })
    }

    /// Submultiplicativity residual `log E|B_{t+s}| - log E|B_t| - log E|B_s|`
    /// with a jackknife standard error. Nonpositive in expectation for the
    /// contact process; zero for the branching random walk.
    pub fn submultiplicativity_residual(&self, t: u64, s: u64) -> Result<(f64, f64)> {
        if t == 0 || s == 0 || t + s > self.t_max {
            return Err(Error::invalid_argument(format!(
                "need 0 < t, s with t + s <= {}, got ({t}, {s})",
                self.t_max
            )));
        }
        let res_of = |mt: f64, ms: f64, mts: f64| mts.ln() - mt.ln() - ms.ln();
        let (mt, ms, mts) = (self.mean(t), self.mean(s), self.mean(t + s));
        if mt <= 0.0 || ms <= 0.0 || mts <= 0.0 {
            return Err(Error::domain(format!(
                "zero mean among t={t}, s={s}, t+s={}: residual undefined",
                t + s
            )));
        }
        let residual = res_of(mt, ms, mts);
        let mut loo = Vec::with_capacity(self.batches as usize);
        for skip in 0..self.batches as usize {
            let (a, b, c) = (
                self.mean_without(t, skip),
                self.mean_without(s, skip),
                self.mean_without(t + s, skip),
            );
            if a <= 0.0 || b <= 0.0 || c <= 0.0 {
                return Err(Error::domain(
                    "leave-one-out mean hit zero; raise replicates for this (t, s)",
                ));
            }
            loo.push(res_of(a, b, c));
        }
        Ok((residual, jackknife_stderr(&loo)))
    }
}

/// Convenience wrapper: collect samples and fit `[t_min, t_max]`.
pub fn estimate_growth_rate<G>(
    graph: &G,
    params: &ModelParams,
    kind: ProcessKind,
    t_min: u64,
    cfg: &GrowthConfig,
) -> Result<GrowthRateEstimate>
where
    G: SiteGraph + Sync,
    G::Site: Send,
{
    GrowthSamples::collect(graph, params, kind, cfg)?.fit(t_min, cfg.t_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::BigWorld;

    #[test]
    fn brw_slope_matches_galton_watson_mean_law() {
        let g = BigWorld::new(1, 1);
        let p = ModelParams::from_lambda_r(1.2, 2.0, 1, 1).unwrap();
        let cfg = GrowthConfig {
            t_max: 12,
            replicates: 20_000,
            batches: 20,
            guard_cap: 1 << 24,
            seed: 5,
        };
        let est = estimate_growth_rate(&g, &p, ProcessKind::Branching, 1, &cfg).unwrap();
        assert!(!est.degenerate);
        let expect = 1.2f64.ln();
        assert!(
            (est.c2_hat - expect).abs() < 3.0 * est.slope_stderr,
            "slope {} vs log lambda {} (se {})",
            est.c2_hat,
            expect,
            est.slope_stderr
        );
    }

    #[test]
    fn zero_rate_regime_reports_neg_infinity() {
        let g = BigWorld::new(1, 1);
        let p = ModelParams::unconstrained(0.0, 0.0, 1, 1).unwrap();
        let cfg = GrowthConfig {
            t_max: 6,
            replicates: 100,
            batches: 10,
            guard_cap: 1000,
            seed: 1,
        };
        let est = estimate_growth_rate(&g, &p, ProcessKind::Contact, 1, &cfg).unwrap();
        assert!(est.degenerate);
        assert_eq!(est.c2_hat, f64::NEG_INFINITY);
    }

    #[test]
    fn residual_is_zero_for_brw_within_noise() {
        let g = BigWorld::new(1, 1);
        let p = ModelParams::from_lambda_r(1.1, 2.0, 1, 1).unwrap();
        let cfg = GrowthConfig {
            t_max: 10,
            replicates: 20_000,
            batches: 20,
            guard_cap: 1 << 24,
            seed: 6,
        };
        let samples = GrowthSamples::collect(&g, &p, ProcessKind::Branching, &cfg).unwrap();
        let (res, se) = samples.submultiplicativity_residual(5, 5).unwrap();
        assert!(res.abs() < 4.0 * se, "residual {res} bigger than 4 x {se}");
    }

    #[test]
    fn config_validation() {
        let g = BigWorld::new(1, 1);
        let p = ModelParams::new(0.9, 0.4, 1, 1).unwrap();
        let cfg = GrowthConfig {
            t_max: 5,
            replicates: 5,
            batches: 10,
            guard_cap: 100,
            seed: 0,
        };
        assert!(GrowthSamples::collect(&g, &p, ProcessKind::Contact, &cfg).is_err());
    }
}
