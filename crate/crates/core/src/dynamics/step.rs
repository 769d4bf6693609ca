//! One-step transition kernels for the contact process and the branching
//! random walk.
//!
//! Every trial is keyed by (stream, time, source site, particle, channel),
//! so a step is a pure function of its arguments: iteration order over the
//! state cannot influence the result, coupled runs at different parameters
//! share trial outcomes exactly, and the contact process run with particle
//! index 0 is dominated by the branching random walk pointwise.

use super::state::{BrwState, InfectionState};
use crate::error::{Error, Result};
use crate::fx;
use crate::params::ModelParams;
use crate::rng::TrialStream;
use crate::topology::SiteGraph;

fn check_compatibility<G: SiteGraph>(graph: &G, params: &ModelParams) -> Result<()> {
    let (gm, gd) = graph.radius_spec();
    if gm != params.m || gd != params.d {
        return Err(Error::invalid_parameter(format!(
            "graph has (m, d) = ({gm}, {gd}) but params have ({}, {})",
            params.m, params.d
        )));
    }
    if params.gamma > 0.0 && graph.vertex_count().is_none() {
        return Err(Error::invalid_parameter(
            "gamma > 0 requires a finite graph: a uniform random grid neighbor is undefined on an infinite graph",
        ));
    }
    Ok(())
}

/// Run the infection trials of one source particle and hand each
/// successful target to `emit`.
#[inline]
fn births_from<G: SiteGraph>(
    graph: &G,
    params: &ModelParams,
    stream: &TrialStream,
    time: u64,
    site: &G::Site,
    particle: u64,
    mut emit: impl FnMut(G::Site),
) {
    let trials = stream.site_trials(time, graph.site_key(site), particle);
    let alpha_channels = graph.alpha_target_count(site);
    let p_short = params.short_edge_prob();
    if p_short > 0.0 {
        for ch in 0..alpha_channels {
            if trials.unit(ch) < p_short {
                emit(graph.alpha_target(site, ch));
            }
        }
    }
    let m_sites = params.ball_volume();
    if params.beta > 0.0 && trials.unit(m_sites) < params.beta {
        emit(graph.long_neighbor(site));
    }
    if params.gamma > 0.0 && trials.unit(m_sites + 1) < params.gamma {
        if let Some(target) = graph.uniform_site(trials.word(m_sites + 2)) {
            emit(target);
        }
    }
}

/// One contact-process step: every infected site runs independent
/// Bernoulli trials against itself, each short-range neighbor, its
/// long-range partner, and (gamma > 0, finite graphs only) one uniformly
/// random grid vertex; the new state is the union of all successes.
pub fn cp_step<G: SiteGraph>(
    graph: &G,
    params: &ModelParams,
    state: &InfectionState<G::Site>,
    stream: &TrialStream,
    time: u64,
) -> Result<InfectionState<G::Site>> {
    check_compatibility(graph, params)?;
    let mut next = fx::set_with_capacity(state.len() + state.len() / 2 + 4);
    for site in state {
        births_from(graph, params, stream, time, site, 0, |target| {
            next.insert(target);
        });
    }
    Ok(next)
}

/// One branching-random-walk step: each particle independently runs the
/// same trials, and the next count at a site is the total number of
/// births there. Expected total population multiplies by lambda per step.
pub fn brw_step<G: SiteGraph>(
    graph: &G,
    params: &ModelParams,
    state: &BrwState<G::Site>,
    stream: &TrialStream,
    time: u64,
) -> Result<BrwState<G::Site>> {
    check_compatibility(graph, params)?;
    let mut next = fx::map_with_capacity(state.len() + state.len() / 2 + 4);
    for (site, &count) in state {
        for particle in 0..count {
            births_from(graph, params, stream, time, site, particle, |target| {
                *next.entry(target).or_insert(0) += 1;
            });
        }
    }
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::state::{single_particle, singleton, total_particles};
    use crate::topology::{make_small_world, BigWorld, BigWorldAddress, Comb};

    fn stream() -> TrialStream {
        TrialStream::replicate(12345, 1, 0)
    }

    #[test]
    fn empty_state_is_absorbing() {
        let g = BigWorld::new(1, 1);
        let p = ModelParams::new(0.9, 0.3, 1, 1).unwrap();
        let empty: InfectionState<BigWorldAddress> = Default::default();
        assert!(cp_step(&g, &p, &empty, &stream(), 0).unwrap().is_empty());
        let empty: BrwState<BigWorldAddress> = Default::default();
        assert!(brw_step(&g, &p, &empty, &stream(), 0).unwrap().is_empty());
    }

    #[test]
    fn zero_rates_kill_any_state() {
        let g = BigWorld::new(1, 1);
        let p = ModelParams::unconstrained(0.0, 0.0, 1, 1).unwrap();
        let mut state = singleton(g.origin());
        state.insert("+(3)".parse().unwrap());
        state.insert("-(2;1)".parse().unwrap());
        assert!(cp_step(&g, &p, &state, &stream(), 0).unwrap().is_empty());
    }

    #[test]
    fn saturated_rates_fill_closed_ball_plus_partner() {
        // Per-edge probability 1 everywhere: a single seed produces the
        // closed short ball and the long partner, (2m+1)^d + 1 sites.
        let g = BigWorld::new(1, 1);
        let p = ModelParams::unconstrained(3.0, 1.0, 1, 1).unwrap();
        let state = singleton(g.origin());
        let next = cp_step(&g, &p, &state, &stream(), 0).unwrap();
        assert_eq!(next.len(), 4);
        for s in ["+(0)", "+(-1)", "+(1)", "-(0)"] {
            assert!(next.contains(&s.parse().unwrap()), "missing {s}");
        }
    }

    #[test]
    fn gamma_on_infinite_graph_is_rejected() {
        let g = BigWorld::new(1, 1);
        let p = ModelParams::new(0.9, 0.3, 1, 1)
            .unwrap()
            .with_gamma(0.1)
            .unwrap();
        let state = singleton(g.origin());
        assert!(cp_step(&g, &p, &state, &stream(), 0).is_err());
        let g = make_small_world(8, 1, 1, 1).unwrap();
        let state = singleton(0u32);
        assert!(cp_step(&g, &p, &state, &stream(), 0).is_ok());
    }

    #[test]
    fn mismatched_radius_spec_is_rejected() {
        let g = BigWorld::new(2, 1);
        let p = ModelParams::new(0.9, 0.3, 1, 1).unwrap();
        assert!(cp_step(&g, &p, &singleton(g.origin()), &stream(), 0).is_err());
    }

    #[test]
    fn gamma_births_land_uniformly_on_the_grid() {
        // gamma alone: one birth per step, anywhere on the torus. The
        // target may be the source itself or an existing neighbor.
        let g = make_small_world(64, 1, 1, 21).unwrap();
        let p = ModelParams::unconstrained(0.0, 0.0, 1, 1)
            .unwrap()
            .with_gamma(1.0)
            .unwrap();
        let mut counts = vec![0u64; 64];
        let n = 64_000u64;
        for rep in 0..n {
            let s = TrialStream::replicate(5150, 4, rep);
            let next = cp_step(&g, &p, &singleton(17u32), &s, 0).unwrap();
            assert_eq!(next.len(), 1);
            counts[*next.iter().next().unwrap() as usize] += 1;
        }
        // Chi-square uniformity over all 64 cells at the 99.9% level.
        let expected = n as f64 / 64.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        let cutoff = crate::stats::chi_square_quantile(63, 3.090_232_306_167_813);
        assert!(chi2 < cutoff, "chi2 {chi2} vs cutoff {cutoff}");
        assert!(counts[17] > 0, "self-hits are allowed and expected");
    }

    #[test]
    fn comb_teeth_emit_only_long_range() {
        let g = Comb::new(1, 1);
        let p = ModelParams::unconstrained(3.0, 1.0, 1, 1).unwrap();
        let tooth: BigWorldAddress = "+(2;0)".parse().unwrap();
        let next = cp_step(&g, &p, &singleton(tooth), &stream(), 0).unwrap();
        assert_eq!(next.len(), 1);
        assert!(next.contains(&"+(2)".parse().unwrap()));
    }

    #[test]
    fn brw_counts_add_instead_of_saturating() {
        let g = BigWorld::new(1, 1);
        let p = ModelParams::unconstrained(3.0, 1.0, 1, 1).unwrap();
        let mut state = single_particle(g.origin());
        state.insert("+(1)".parse().unwrap(), 1);
        let next = brw_step(&g, &p, &state, &stream(), 0).unwrap();
        // Each particle deterministically births 4: totals add.
        assert_eq!(total_particles(&next), 8);
        // +(0) and +(1) each receive from both sources.
        assert_eq!(next[&"+(0)".parse::<BigWorldAddress>().unwrap()], 2);
        assert_eq!(next[&"+(1)".parse::<BigWorldAddress>().unwrap()], 2);
    }

    #[test]
    fn cp_state_is_contained_in_brw_support_under_coupling() {
        let g = BigWorld::new(1, 1);
        let p = ModelParams::new(0.9, 0.4, 1, 1).unwrap();
        for rep in 0..200 {
            let s = TrialStream::replicate(777, 2, rep);
            let mut cp = singleton(g.origin());
            let mut brw = single_particle(g.origin());
            for t in 0..12 {
                cp = cp_step(&g, &p, &cp, &s, t).unwrap();
                brw = brw_step(&g, &p, &brw, &s, t).unwrap();
                for site in &cp {
                    assert!(brw.contains_key(site), "rep {rep} t {t}: {site} missing");
                }
            }
        }
    }

    #[test]
    fn subset_states_have_subset_successors() {
        let g = make_small_world(16, 1, 1, 4).unwrap();
        let p = ModelParams::new(0.8, 0.3, 1, 1)
            .unwrap()
            .with_gamma(0.05)
            .unwrap();
        for rep in 0..200 {
            let s = TrialStream::replicate(31, 3, rep);
            let mut small = singleton(3u32);
            let mut large: InfectionState<u32> = [3u32, 7, 12].into_iter().collect();
            for t in 0..8 {
                small = cp_step(&g, &p, &small, &s, t).unwrap();
                large = cp_step(&g, &p, &large, &s, t).unwrap();
                assert!(small.is_subset(&large), "rep {rep} t {t}");
            }
        }
    }
}
