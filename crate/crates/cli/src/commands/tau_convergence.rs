//! `swcp tau-convergence`: empirical distributions of the stopping times
//! tau and sigma on small worlds of increasing size against the big
//! world, with sup-norm distances and stochastic-domination checks.

use crate::config::Config;
use crate::csv_row;
use crate::manifest::RunManifest;
use crate::output::{Csv, OutDir};
use rayon::prelude::*;
use serde::Serialize;
use swcp_core::dynamics::{run_sigma, run_tau_from_origin, StopKind, StopOutcome};
use swcp_core::params::ModelParams;
use swcp_core::rng::{domain_tag, mix, TrialStream};
use swcp_core::stats::{ecdf_counts, sup_distance};
use swcp_core::topology::{make_small_world, BigWorld};
use swcp_core::Result;

const KEYS: &[&str] = &[
    "alpha",
    "beta",
    "lambda",
    "r",
    "m",
    "d",
    "horizon",
    "replicates",
    "big_replicates",
    "sides",
    "guard_cap",
    "seed",
    "out_dir",
    "workers",
];

#[derive(Serialize)]
struct GraphReport {
    side: u32,
    tau_sup_distance: f64,
    sigma_sup_distance: f64,
    /// CDF_S(t) >= CDF_B(t) - 3 SE at every t <= horizon.
    tau_domination_ok: bool,
    sigma_domination_ok: bool,
    tau_p1: f64,
    sigma_censored: u64,
    tau_censored: u64,
}

#[derive(Serialize)]
struct Summary {
    params: ModelParams,
    horizon: u64,
    replicates: u64,
    big_replicates: u64,
    seed: u64,
    /// Closed form P(tau = 1) = (1 - alpha/(2m+1)^d)^((2m+1)^d) (1 - beta),
    /// identical for every graph family.
    tau_p1_closed_form: f64,
    big_tau_p1: f64,
    graphs: Vec<GraphReport>,
}

struct Samples {
    tau: Vec<StopOutcome>,
    sigma: Vec<StopOutcome>,
}

fn times(outcomes: &[StopOutcome], which: StopKind) -> Vec<u64> {
    // Censored runs keep their horizon time and fall outside every CDF bin.
    outcomes
        .iter()
        .map(|o| if o.kind == which { o.time } else { u64::MAX })
        .collect()
}

fn outcome_csv(outcomes: &[StopOutcome], seed: u64) -> String {
    let mut csv = Csv::new(&["replicate", "seed", "kind", "time"]);
    for (i, o) in outcomes.iter().enumerate() {
        csv_row!(csv, i, seed, o.kind, o.time);
    }
    csv.finish()
}

fn domination_ok(cdf_small: &[f64], cdf_big: &[f64], n_small: f64, n_big: f64) -> bool {
    cdf_small.iter().zip(cdf_big).all(|(&ps, &pb)| {
        let se = (ps * (1.0 - ps) / n_small + pb * (1.0 - pb) / n_big).sqrt();
        ps >= pb - 3.0 * se
    })
}

pub fn run(config: &Config, out: &OutDir) -> Result<()> {
    config.check_keys(KEYS)?;
    let m = config.get_u32("m", 1)?;
    let d = config.get_u32("d", 1)?;
    let params = super::params_from(config, m, d)?;
    let horizon = config.get_u64("horizon", 50)?;
    let replicates = config.get_u64("replicates", 10_000)?;
    if horizon == 0 || replicates == 0 {
        return Err(swcp_core::Error::invalid_parameter(
            "horizon and replicates must be at least 1",
        ));
    }
    // The big-world curves are the shared reference every small world is
    // compared against; a sharper reference keeps the comparisons from
    // being noise-limited. Small-world samples share trial streams, so
    // their mutual comparison is already variance-reduced.
    let big_replicates = config.get_u64("big_replicates", replicates * 10)?;
    let seed = config.get_u64("seed", 0)?;
    let guard_cap = config.get_u64("guard_cap", 1_000_000)?;
    let sides = config.get_list_u64("sides")?;
    if sides.is_empty() {
        return Err(swcp_core::Error::invalid_parameter(
            "config key `sides` must list torus sizes",
        ));
    }

    let mut output_names: Vec<String> = vec![
        "tau_cdfs.csv".into(),
        "sigma_cdfs.csv".into(),
        "tau_outcomes_big.csv".into(),
        "sigma_outcomes_big.csv".into(),
        "tau_convergence_summary.json".into(),
    ];
    for &side in &sides {
        output_names.push(format!("tau_outcomes_R{side}.csv"));
        output_names.push(format!("sigma_outcomes_R{side}.csv"));
    }
    let names_ref: Vec<&str> = output_names.iter().map(|s| s.as_str()).collect();
    RunManifest::new("tau-convergence", config, &names_ref).write(out.path())?;

    // Big world reference.
    let big = BigWorld::new(m, d);
    let big_samples = Samples {
        tau: (0..big_replicates)
            .into_par_iter()
            .map(|rep| {
                let s = TrialStream::replicate(seed, domain_tag("tau_big"), rep);
                run_tau_from_origin(&big, &params, horizon, &s, guard_cap)
            })
            .collect::<Result<Vec<_>>>()?,
        sigma: (0..big_replicates)
            .into_par_iter()
            .map(|rep| {
                let s = TrialStream::replicate(seed, domain_tag("sigma_big"), rep);
                run_sigma(&big, &params, horizon, &s, guard_cap)
            })
            .collect::<Result<Vec<_>>>()?,
    };
    out.write_text("tau_outcomes_big.csv", &outcome_csv(&big_samples.tau, seed))?;
    out.write_text(
        "sigma_outcomes_big.csv",
        &outcome_csv(&big_samples.sigma, seed),
    )?;

    let tau_cdf_big = ecdf_counts(&times(&big_samples.tau, StopKind::Extinct), horizon);
    let sigma_ret_or_dead: Vec<u64> = big_samples
        .sigma
        .iter()
        .map(|o| {
            if o.kind == StopKind::Censored {
                u64::MAX
            } else {
                o.time
            }
        })
        .collect();
    let sigma_cdf_big = ecdf_counts(&sigma_ret_or_dead, horizon);

    let mut tau_csv_cols: Vec<Vec<f64>> = vec![tau_cdf_big.clone()];
    let mut sigma_csv_cols: Vec<Vec<f64>> = vec![sigma_cdf_big.clone()];
    let mut reports = Vec::new();

    for &side in &sides {
        let side = u32::try_from(side)
            .map_err(|_| swcp_core::Error::invalid_parameter(format!("side {side} too large")))?;
        // A fresh matching per replicate samples the annealed ensemble.
        let run_pair = |domain: &str, use_sigma: bool| -> Result<Vec<StopOutcome>> {
            (0..replicates)
                .into_par_iter()
                .map(|rep| {
                    let graph_seed = mix(seed ^ mix((side as u64) << 32 ^ rep));
                    let g = make_small_world(side, m, d, graph_seed)?;
                    let s = TrialStream::replicate(seed, domain_tag(domain), rep);
                    if use_sigma {
                        run_sigma(&g, &params, horizon, &s, guard_cap)
                    } else {
                        run_tau_from_origin(&g, &params, horizon, &s, guard_cap)
                    }
                })
                .collect()
        };
        let tau_outcomes = run_pair("tau_small", false)?;
        let sigma_outcomes = run_pair("sigma_small", true)?;
        out.write_text(
            &format!("tau_outcomes_R{side}.csv"),
            &outcome_csv(&tau_outcomes, seed),
        )?;
        out.write_text(
            &format!("sigma_outcomes_R{side}.csv"),
            &outcome_csv(&sigma_outcomes, seed),
        )?;

        let tau_cdf = ecdf_counts(&times(&tau_outcomes, StopKind::Extinct), horizon);
        let sigma_times: Vec<u64> = sigma_outcomes
            .iter()
            .map(|o| {
                if o.kind == StopKind::Censored {
                    u64::MAX
                } else {
                    o.time
                }
            })
            .collect();
        let sigma_cdf = ecdf_counts(&sigma_times, horizon);

        reports.push(GraphReport {
            side,
            tau_sup_distance: sup_distance(&tau_cdf, &tau_cdf_big),
            sigma_sup_distance: sup_distance(&sigma_cdf, &sigma_cdf_big),
            tau_domination_ok: domination_ok(
                &tau_cdf,
                &tau_cdf_big,
                replicates as f64,
                big_replicates as f64,
            ),
            sigma_domination_ok: domination_ok(
                &sigma_cdf,
                &sigma_cdf_big,
                replicates as f64,
                big_replicates as f64,
            ),
            tau_p1: tau_cdf[1],
            tau_censored: tau_outcomes
                .iter()
                .filter(|o| o.kind == StopKind::Censored)
                .count() as u64,
            sigma_censored: sigma_outcomes
                .iter()
                .filter(|o| o.kind == StopKind::Censored)
                .count() as u64,
        });
        tau_csv_cols.push(tau_cdf);
        sigma_csv_cols.push(sigma_cdf);
    }

    let mut header = vec!["t".to_string(), "big".to_string()];
    header.extend(sides.iter().map(|s| format!("R{s}")));
    let header_ref: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
    for (name, cols) in [
        ("tau_cdfs.csv", &tau_csv_cols),
        ("sigma_cdfs.csv", &sigma_csv_cols),
    ] {
        let mut csv = Csv::new(&header_ref);
        for t in 0..=horizon as usize {
            let mut row = vec![t.to_string()];
            row.extend(cols.iter().map(|c| c[t].to_string()));
            csv.row(&row);
        }
        out.write_text(name, &csv.finish())?;
    }

    let m_sites = params.ball_volume() as f64;
    let tau_p1_closed_form = (1.0 - params.alpha / m_sites).powf(m_sites) * (1.0 - params.beta);
    let summary = Summary {
        params,
        horizon,
        replicates,
        big_replicates,
        seed,
        tau_p1_closed_form,
        big_tau_p1: tau_cdf_big[1],
        graphs: reports,
    };
    out.write_json("tau_convergence_summary.json", &summary)
}
