//! `swcp critical-values`: closed-form table for the comb critical value,
//! the K_M lower bounds, the limiting quadratic root, and the
//! strong-survival boundary.

use crate::config::Config;
use crate::csv_row;
use crate::manifest::RunManifest;
use crate::output::{Csv, OutDir};
use serde::Serialize;
use swcp_core::analysis::{
    comb_brw_critical, lambda2_brw_lower_bound, limiting_quadratic_root,
    strong_survival_boundary_lambda,
};
use swcp_core::Result;

const KEYS: &[&str] = &["r_values", "m_values", "out_dir", "seed", "workers"];

#[derive(Serialize)]
struct Row {
    r: f64,
    m_sites: Option<u64>,
    lambda2_km_lower_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda2_km_error: Option<String>,
    comb_critical: f64,
    limiting_quadratic_root: f64,
    strong_survival_boundary_lambda: f64,
}

#[derive(Serialize)]
struct Summary {
    rows: Vec<Row>,
}

pub fn run(config: &Config, out: &OutDir) -> Result<()> {
    config.check_keys(KEYS)?;
    let mut r_values = config.get_list_f64("r_values")?;
    if r_values.is_empty() {
        r_values = vec![1.0];
    }
    let m_values = config.get_list_u64("m_values")?;

    RunManifest::new(
        "critical-values",
        config,
        &["critical_values.csv", "critical_values_summary.json"],
    )
    .write(out.path())?;

    let mut csv = Csv::new(&[
        "r",
        "m_sites",
        "lambda2_km_lower_bound",
        "comb_critical",
        "limiting_quadratic_root",
        "strong_survival_boundary_lambda",
    ]);
    let mut rows = Vec::new();
    for &r in &r_values {
        let comb = comb_brw_critical(r)?;
        let quad = limiting_quadratic_root(r)?;
        let boundary = strong_survival_boundary_lambda(r)?;
        if m_values.is_empty() {
            csv_row!(csv, r, "", "", comb, quad, boundary);
            rows.push(Row {
                r,
                m_sites: None,
                lambda2_km_lower_bound: None,
                lambda2_km_error: None,
                comb_critical: comb,
                limiting_quadratic_root: quad,
                strong_survival_boundary_lambda: boundary,
            });
        }
        for &m_sites in &m_values {
            // Per-row domain errors are reported, not fatal.
            let (bound, err) = match lambda2_brw_lower_bound(r, m_sites) {
                Ok(b) => (Some(b), None),
                Err(e) => (None, Some(e.to_string())),
            };
            let bound_text = bound
                .map(|b| b.to_string())
                .unwrap_or_else(|| "error".into());
            csv_row!(csv, r, m_sites, bound_text, comb, quad, boundary);
            rows.push(Row {
                r,
                m_sites: Some(m_sites),
                lambda2_km_lower_bound: bound,
                lambda2_km_error: err,
                comb_critical: comb,
                limiting_quadratic_root: quad,
                strong_survival_boundary_lambda: boundary,
            });
        }
    }
    out.write_text("critical_values.csv", &csv.finish())?;
    out.write_json("critical_values_summary.json", &Summary { rows })
}
