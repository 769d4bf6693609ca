//! Infection parameters shared by every graph family.

use crate::error::{Error, Result};
use serde::Serialize;

/// Infection parameters of the discrete-time contact process and
/// branching random walk.
///
/// `alpha` is the total short-range mass: a site infects itself and each
/// of its `(2m+1)^d - 1` short-range neighbors with probability
/// `alpha / (2m+1)^d`. `beta` is the long-range edge probability and
/// `gamma` the uniform random-neighbor probability of the modified
/// small-world model. Derived quantities: `lambda = alpha + beta`,
/// `r = alpha / beta`, `u = 1 / (1 + r)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModelParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub m: u32,
    pub d: u32,
}

impl ModelParams {
    /// Construct with the default ordering constraint `alpha > beta > 0`
    /// (the ratio r is kept in (1, infinity)).
    pub fn new(alpha: f64, beta: f64, m: u32, d: u32) -> Result<Self> {
        let p = Self::unconstrained(alpha, beta, m, d)?;
        if !(alpha > beta && beta > 0.0) {
            return Err(Error::invalid_parameter(format!(
                "alpha > beta > 0 required by default (got alpha={alpha}, beta={beta}); \
                 use ModelParams::unconstrained to override"
            )));
        }
        Ok(p)
    }

    /// Construct without the `alpha > beta > 0` ordering constraint.
    /// Degenerate corners (alpha = 0, beta = 0, beta = 1, ...) are legal
    /// here; all probability-range checks still apply.
    pub fn unconstrained(alpha: f64, beta: f64, m: u32, d: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid_parameter(
                "short-range radius m must be >= 1",
            ));
        }
        if d == 0 {
            return Err(Error::invalid_parameter("dimension d must be >= 1"));
        }
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::invalid_parameter(format!(
                "alpha must be finite and >= 0, got {alpha}"
            )));
        }
        if !(0.0..=1.0).contains(&beta) {
            return Err(Error::invalid_parameter(format!(
                "beta must lie in [0, 1], got {beta}"
            )));
        }
        let p = ModelParams {
            alpha,
            beta,
            gamma: 0.0,
            m,
            d,
        };
        let per_edge = p.short_edge_prob();
        if !(0.0..=1.0).contains(&per_edge) {
            return Err(Error::invalid_parameter(format!(
                "alpha/(2m+1)^d = {per_edge} is not a probability (alpha={alpha}, m={m}, d={d})"
            )));
        }
        Ok(p)
    }

    /// Construct from `(lambda, r)`: `alpha = lambda r/(1+r)`,
    /// `beta = lambda/(1+r)`.
    pub fn from_lambda_r(lambda: f64, r: f64, m: u32, d: u32) -> Result<Self> {
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::invalid_parameter(format!(
                "lambda must be finite and >= 0, got {lambda}"
            )));
        }
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::invalid_parameter(format!(
                "ratio r must be positive, got {r}"
            )));
        }
        Self::unconstrained(lambda * r / (1.0 + r), lambda / (1.0 + r), m, d)
    }

    /// Add a gamma channel (uniform random grid neighbor).
    pub fn with_gamma(mut self, gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::invalid_parameter(format!(
                "gamma must lie in [0, 1], got {gamma}"
            )));
        }
        self.gamma = gamma;
        Ok(self)
    }

    /// Number of alpha-mass targets, `(2m+1)^d`.
    pub fn ball_volume(&self) -> u64 {
        (2 * self.m as u64 + 1).pow(self.d)
    }

    /// Per-edge short-range probability `alpha/(2m+1)^d`.
    pub fn short_edge_prob(&self) -> f64 {
        self.alpha / self.ball_volume() as f64
    }

    pub fn lambda(&self) -> f64 {
        self.alpha + self.beta
    }

    pub fn ratio(&self) -> f64 {
        self.alpha / self.beta
    }

    /// `u = 1/(1+r) = beta/(alpha+beta)`.
    pub fn u(&self) -> f64 {
        self.beta / (self.alpha + self.beta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_quantities() {
        let p = ModelParams::new(0.9, 0.45, 5, 1).unwrap();
        assert!((p.lambda() - 1.35).abs() < 1e-15);
        assert!((p.ratio() - 2.0).abs() < 1e-15);
        assert!((p.u() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(p.ball_volume(), 11);
    }

    #[test]
    fn from_lambda_r_round_trips() {
        let p = ModelParams::from_lambda_r(1.2, 2.0, 10, 1).unwrap();
        assert!((p.lambda() - 1.2).abs() < 1e-12);
        assert!((p.ratio() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn ordering_constraint_is_enforced_by_default() {
        assert!(ModelParams::new(0.4, 0.5, 1, 1).is_err());
        assert!(ModelParams::new(0.5, 0.0, 1, 1).is_err());
        assert!(ModelParams::unconstrained(0.4, 0.5, 1, 1).is_ok());
        assert!(ModelParams::unconstrained(0.0, 0.0, 1, 1).is_ok());
    }

    #[test]
    fn per_edge_probability_must_be_valid() {
        // alpha up to (2m+1)^d is allowed; beyond is not.
        assert!(ModelParams::unconstrained(3.0, 1.0, 1, 1).is_ok());
        assert!(ModelParams::unconstrained(3.1, 1.0, 1, 1).is_err());
        assert!(ModelParams::unconstrained(0.5, 1.5, 1, 1).is_err());
    }

    #[test]
    fn gamma_validation() {
        let p = ModelParams::new(0.9, 0.3, 1, 1).unwrap();
        assert!(p.with_gamma(0.1).is_ok());
        assert!(p.with_gamma(-0.1).is_err());
        assert!(p.with_gamma(1.1).is_err());
    }
}
