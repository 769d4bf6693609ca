//! Trajectory runners and stopping times.

use super::state::{
    single_particle, singleton, total_particles, BrwState, InfectionState, StopKind, StopOutcome,
    TrajectoryPoint,
};
use super::step::{brw_step, cp_step};
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::rng::TrialStream;
use crate::topology::{SiteGraph, SmallWorldGraph};

/// Default population cap for big-world runs; supercritical growth is
/// exponential, so unguarded runs would exhaust memory.
pub const DEFAULT_GUARD_CAP: u64 = 10_000_000;

fn guard(population: u64, cap: u64, time: u64) -> Result<()> {
    if population > cap {
        Err(Error::ResourceGuard {
            time,
            population,
            cap,
        })
    } else {
        Ok(())
    }
}

/// Run the contact process from `start` until extinction, returning
/// `Extinct` at the first empty step or `Censored` at the horizon.
/// Never returns `Returned`.
pub fn run_tau<G: SiteGraph>(
    graph: &G,
    params: &ModelParams,
    start: InfectionState<G::Site>,
    horizon: u64,
    stream: &TrialStream,
    cap: u64,
) -> Result<StopOutcome> {
    if horizon == 0 {
        return Err(Error::invalid_argument("horizon must be >= 1"));
    }
    let mut state = start;
    for t in 0..horizon {
        state = cp_step(graph, params, &state, stream, t)?;
        if state.is_empty() {
            return Ok(StopOutcome {
                kind: StopKind::Extinct,
                time: t + 1,
            });
        }
        guard(state.len() as u64, cap, t + 1)?;
    }
    Ok(StopOutcome {
        kind: StopKind::Censored,
        time: horizon,
    })
}

/// Extinction time from a single infection at the origin.
pub fn run_tau_from_origin<G: SiteGraph>(
    graph: &G,
    params: &ModelParams,
    horizon: u64,
    stream: &TrialStream,
    cap: u64,
) -> Result<StopOutcome> {
    run_tau(
        graph,
        params,
        singleton(graph.origin()),
        horizon,
        stream,
        cap,
    )
}

/// First time `t >= 1` at which the process started from the origin is
/// empty (`Extinct`) or reoccupies the origin (`Returned`); `Censored`
/// at the horizon otherwise.
pub fn run_sigma<G: SiteGraph>(
    graph: &G,
    params: &ModelParams,
    horizon: u64,
    stream: &TrialStream,
    cap: u64,
) -> Result<StopOutcome> {
    if horizon == 0 {
        return Err(Error::invalid_argument("horizon must be >= 1"));
    }
    let origin = graph.origin();
    let mut state = singleton(origin.clone());
    for t in 0..horizon {
        state = cp_step(graph, params, &state, stream, t)?;
        if state.is_empty() {
            return Ok(StopOutcome {
                kind: StopKind::Extinct,
                time: t + 1,
            });
        }
        if state.contains(&origin) {
            return Ok(StopOutcome {
                kind: StopKind::Returned,
                time: t + 1,
            });
        }
        guard(state.len() as u64, cap, t + 1)?;
    }
    Ok(StopOutcome {
        kind: StopKind::Censored,
        time: horizon,
    })
}

/// Run from the all-infected state on a finite small world, recording the
/// population every `sample_every` steps (and always the final step).
/// Returns the stopping outcome and the sampled count trajectory.
pub fn run_all_ones(
    graph: &SmallWorldGraph,
    params: &ModelParams,
    horizon: u64,
    stream: &TrialStream,
    sample_every: u64,
) -> Result<(StopOutcome, Vec<u64>)> {
    if horizon == 0 {
        return Err(Error::invalid_argument("horizon must be >= 1"));
    }
    let sample_every = sample_every.max(1);
    let n = SmallWorldGraph::vertex_count(graph);
    let mut state: InfectionState<u32> = (0..n as u32).collect();
    let mut counts = vec![n];
    for t in 0..horizon {
        state = cp_step(graph, params, &state, stream, t)?;
        if (t + 1) % sample_every == 0 || state.is_empty() || t + 1 == horizon {
            counts.push(state.len() as u64);
        }
        if state.is_empty() {
            return Ok((
                StopOutcome {
                    kind: StopKind::Extinct,
                    time: t + 1,
                },
                counts,
            ));
        }
    }
    Ok((
        StopOutcome {
            kind: StopKind::Censored,
            time: horizon,
        },
        counts,
    ))
}

/// Contact-process trajectory dump from `start`.
pub fn cp_trajectory<G: SiteGraph>(
    graph: &G,
    params: &ModelParams,
    start: InfectionState<G::Site>,
    horizon: u64,
    stream: &TrialStream,
    cap: u64,
) -> Result<(StopOutcome, Vec<TrajectoryPoint>)> {
    let origin = graph.origin();
    let mut state = start;
    let mut points = vec![TrajectoryPoint {
        t: 0,
        population: state.len() as u64,
        origin_infected: state.contains(&origin),
    }];
    for t in 0..horizon {
        state = cp_step(graph, params, &state, stream, t)?;
        points.push(TrajectoryPoint {
            t: t + 1,
            population: state.len() as u64,
            origin_infected: state.contains(&origin),
        });
        if state.is_empty() {
            return Ok((
                StopOutcome {
                    kind: StopKind::Extinct,
                    time: t + 1,
                },
                points,
            ));
        }
        guard(state.len() as u64, cap, t + 1)?;
    }
    Ok((
        StopOutcome {
            kind: StopKind::Censored,
            time: horizon,
        },
        points,
    ))
}

/// Branching-random-walk trajectory dump from a single origin particle.
pub fn brw_trajectory<G: SiteGraph>(
    graph: &G,
    params: &ModelParams,
    horizon: u64,
    stream: &TrialStream,
    cap: u64,
) -> Result<(StopOutcome, Vec<TrajectoryPoint>)> {
    let origin = graph.origin();
    let mut state: BrwState<G::Site> = single_particle(origin.clone());
    let mut points = vec![TrajectoryPoint {
        t: 0,
        population: 1,
        origin_infected: true,
    }];
    for t in 0..horizon {
        state = brw_step(graph, params, &state, stream, t)?;
        let population = total_particles(&state);
        points.push(TrajectoryPoint {
            t: t + 1,
            population,
            origin_infected: state.contains_key(&origin),
        });
        if population == 0 {
            return Ok((
                StopOutcome {
                    kind: StopKind::Extinct,
                    time: t + 1,
                },
                points,
            ));
        }
        guard(population, cap, t + 1)?;
    }
    Ok((
        StopOutcome {
            kind: StopKind::Censored,
            time: horizon,
        },
        points,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::BigWorld;

    fn stream(rep: u64) -> TrialStream {
        TrialStream::replicate(2024, 9, rep)
    }

    #[test]
    fn tau_trivial_cases() {
        let g = BigWorld::new(1, 1);
        let dead = ModelParams::unconstrained(0.0, 0.0, 1, 1).unwrap();
        let out = run_tau_from_origin(&g, &dead, 10, &stream(0), 1000).unwrap();
        assert_eq!(
            out,
            StopOutcome {
                kind: StopKind::Extinct,
                time: 1
            }
        );

        let full = ModelParams::unconstrained(3.0, 1.0, 1, 1).unwrap();
        let out = run_tau_from_origin(&g, &full, 5, &stream(0), u64::MAX).unwrap();
        assert_eq!(
            out,
            StopOutcome {
                kind: StopKind::Censored,
                time: 5
            }
        );
    }

    #[test]
    fn sigma_trivial_cases() {
        let g = BigWorld::new(1, 1);
        let dead = ModelParams::unconstrained(0.0, 0.0, 1, 1).unwrap();
        let out = run_sigma(&g, &dead, 10, &stream(1), 1000).unwrap();
        assert_eq!(
            out,
            StopOutcome {
                kind: StopKind::Extinct,
                time: 1
            }
        );

        // Per-edge self-infection probability 1: returned at t = 1.
        let full = ModelParams::unconstrained(3.0, 0.5, 1, 1).unwrap();
        let out = run_sigma(&g, &full, 10, &stream(1), u64::MAX).unwrap();
        assert_eq!(
            out,
            StopOutcome {
                kind: StopKind::Returned,
                time: 1
            }
        );
    }

    #[test]
    fn resource_guard_trips() {
        let g = BigWorld::new(1, 1);
        let full = ModelParams::unconstrained(3.0, 1.0, 1, 1).unwrap();
        let err = run_tau_from_origin(&g, &full, 50, &stream(2), 100).unwrap_err();
        match err {
            Error::ResourceGuard {
                population, cap, ..
            } => {
                assert!(population > cap);
            }
            other => panic!("expected resource guard, got {other:?}"),
        }
    }

    #[test]
    fn sigma_return_rate_at_t1_is_self_edge_probability() {
        // On the big world only the self-trial can reoccupy the origin at
        // t = 1, so P(Returned at 1) = alpha/(2m+1)^d exactly.
        let g = BigWorld::new(1, 1);
        let p = ModelParams::new(0.6, 0.3, 1, 1).unwrap();
        let n = 100_000u64;
        let mut hits = 0u64;
        for rep in 0..n {
            let out = run_sigma(&g, &p, 1, &stream(rep), u64::MAX).unwrap();
            if out
                == (StopOutcome {
                    kind: StopKind::Returned,
                    time: 1,
                })
            {
                hits += 1;
            }
        }
        let p_hat = hits as f64 / n as f64;
        let expect = 0.2;
        let se = (expect * (1.0 - expect) / n as f64).sqrt();
        assert!((p_hat - expect).abs() < 3.0 * se, "p_hat = {p_hat}");
    }

    #[test]
    fn all_ones_trivial_cases() {
        let g = crate::topology::make_small_world(8, 1, 1, 3).unwrap();
        let dead = ModelParams::unconstrained(0.0, 0.0, 1, 1).unwrap();
        let (out, counts) = run_all_ones(&g, &dead, 10, &stream(3), 1).unwrap();
        assert_eq!(
            out,
            StopOutcome {
                kind: StopKind::Extinct,
                time: 1
            }
        );
        assert_eq!(counts, vec![8, 0]);

        let full = ModelParams::unconstrained(3.0, 1.0, 1, 1).unwrap();
        let (out, counts) = run_all_ones(&g, &full, 10, &stream(3), 1).unwrap();
        assert_eq!(
            out,
            StopOutcome {
                kind: StopKind::Censored,
                time: 10
            }
        );
        assert!(counts.iter().all(|&c| c == 8));
    }

    #[test]
    fn trajectories_are_deterministic_in_the_seed() {
        let g = BigWorld::new(1, 1);
        let p = ModelParams::new(0.9, 0.4, 1, 1).unwrap();
        let (o1, t1) =
            cp_trajectory(&g, &p, singleton(g.origin()), 30, &stream(7), 1 << 20).unwrap();
        let (o2, t2) =
            cp_trajectory(&g, &p, singleton(g.origin()), 30, &stream(7), 1 << 20).unwrap();
        assert_eq!(o1, o2);
        assert_eq!(
            t1.iter().map(|p| p.population).collect::<Vec<_>>(),
            t2.iter().map(|p| p.population).collect::<Vec<_>>()
        );
    }
}
