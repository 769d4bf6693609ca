//! Experiment subcommands.

pub mod critical_values;
pub mod growth_rate;
pub mod metastability;
pub mod phase_gap;
pub mod simulate;
pub mod tau_convergence;

use crate::config::Config;
use swcp_core::{Error, ModelParams, Result};

/// Build ModelParams from either (alpha, beta) or (lambda, r) keys.
pub fn params_from(config: &Config, m: u32, d: u32) -> Result<ModelParams> {
    match (config.get_str("alpha"), config.get_str("lambda")) {
        (Some(_), None) => {
            let alpha = config.require_f64("alpha")?;
            let beta = config.require_f64("beta")?;
            ModelParams::unconstrained(alpha, beta, m, d)
        }
        (None, Some(_)) => {
            let lambda = config.require_f64("lambda")?;
            let r = config.get_f64("r", 2.0)?;
            ModelParams::from_lambda_r(lambda, r, m, d)
        }
        (Some(_), Some(_)) => Err(Error::invalid_parameter(
            "give either alpha/beta or lambda/r, not both",
        )),
        (None, None) => Err(Error::invalid_parameter(
            "missing infection parameters: set alpha/beta or lambda/r",
        )),
    }
}
