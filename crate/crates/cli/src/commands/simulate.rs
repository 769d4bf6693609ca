//! `swcp simulate`: raw single-run trajectory dump.

use crate::config::Config;
use crate::csv_row;
use crate::manifest::RunManifest;
use crate::output::{Csv, OutDir};
use serde::Serialize;
use swcp_core::dynamics::{brw_trajectory, cp_trajectory, singleton, StopOutcome, TrajectoryPoint};
use swcp_core::rng::{domain_tag, TrialStream};
use swcp_core::topology::{make_small_world, BigWorld, Comb, SiteGraph};
use swcp_core::{Error, Result};

const KEYS: &[&str] = &[
    "family",
    "process",
    "start",
    "alpha",
    "beta",
    "lambda",
    "r",
    "gamma",
    "m",
    "d",
    "side",
    "graph_seed",
    "horizon",
    "guard_cap",
    "seed",
    "out_dir",
    "workers",
];

#[derive(Serialize)]
struct Summary {
    family: String,
    process: String,
    start: String,
    params: swcp_core::ModelParams,
    outcome: StopOutcome,
    final_population: u64,
    seed: u64,
}

fn trajectory_csv(points: &[TrajectoryPoint]) -> String {
    let mut csv = Csv::new(&["t", "population", "origin_infected"]);
    for p in points {
        csv_row!(csv, p.t, p.population, p.origin_infected);
    }
    csv.finish()
}

pub fn run(config: &Config, out: &OutDir) -> Result<()> {
    config.check_keys(KEYS)?;
    let family = config.get_str("family").unwrap_or("big-world").to_string();
    let process = config.get_str("process").unwrap_or("contact").to_string();
    let start = config.get_str("start").unwrap_or("origin").to_string();
    let m = config.get_u32("m", 1)?;
    let d = config.get_u32("d", 1)?;
    let params = super::params_from(config, m, d)?.with_gamma(config.get_f64("gamma", 0.0)?)?;
    let horizon = config.get_u64("horizon", 100)?;
    let guard_cap = config.get_u64("guard_cap", swcp_core::dynamics::DEFAULT_GUARD_CAP)?;
    let seed = config.get_u64("seed", 0)?;
    let stream = TrialStream::replicate(seed, domain_tag("simulate"), 0);

    RunManifest::new(
        "simulate",
        config,
        &["trajectory.csv", "simulate_summary.json"],
    )
    .write(out.path())?;

    let (outcome, points) = match (family.as_str(), process.as_str()) {
        ("big-world", "contact") => {
            let g = BigWorld::new(m, d);
            cp_trajectory(
                &g,
                &params,
                singleton(g.origin()),
                horizon,
                &stream,
                guard_cap,
            )?
        }
        ("big-world", "branching") => {
            brw_trajectory(&BigWorld::new(m, d), &params, horizon, &stream, guard_cap)?
        }
        ("comb", "contact") => {
            let g = Comb::new(m, d);
            cp_trajectory(
                &g,
                &params,
                singleton(g.origin()),
                horizon,
                &stream,
                guard_cap,
            )?
        }
        ("comb", "branching") => {
            brw_trajectory(&Comb::new(m, d), &params, horizon, &stream, guard_cap)?
        }
        ("small-world", p) => {
            let side = config.get_u32("side", 0)?;
            if side == 0 {
                return Err(Error::invalid_parameter(
                    "small-world simulation needs `side`",
                ));
            }
            let g = make_small_world(side, m, d, config.get_u64("graph_seed", seed)?)?;
            match (p, start.as_str()) {
                ("contact", "origin") => cp_trajectory(
                    &g,
                    &params,
                    singleton(g.origin()),
                    horizon,
                    &stream,
                    guard_cap,
                )?,
                ("contact", "all-ones") => {
                    let full = (0..SiteGraph::vertex_count(&g).unwrap() as u32).collect();
                    cp_trajectory(&g, &params, full, horizon, &stream, guard_cap)?
                }
                ("branching", "origin") => {
                    brw_trajectory(&g, &params, horizon, &stream, guard_cap)?
                }
                _ => {
                    return Err(Error::invalid_parameter(format!(
                        "unsupported process/start combination {p}/{start}"
                    )))
                }
            }
        }
        _ => {
            return Err(Error::invalid_parameter(format!(
                "unknown family/process {family}/{process}"
            )))
        }
    };

    let final_population = points.last().map(|p| p.population).unwrap_or(0);
    out.write_text("trajectory.csv", &trajectory_csv(&points))?;
    out.write_json(
        "simulate_summary.json",
        &Summary {
            family,
            process,
            start,
            params,
            outcome,
            final_population,
            seed,
        },
    )
}
