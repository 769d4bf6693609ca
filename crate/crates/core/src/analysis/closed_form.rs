//! Closed-form critical values.

use crate::error::{Error, Result};

fn require_positive_ratio(r: f64) -> Result<()> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::invalid_parameter(format!(
            "ratio r must be positive, got {r}"
        )));
    }
    Ok(())
}

/// Critical value of the branching random walk on the comb at ratio
/// `r = alpha/beta`: `2(r+1) / (r + sqrt(r^2 + 4))`. Independent of m,
/// strictly greater than 1 for every finite r > 0, and tending to 1 as
/// r grows.
pub fn comb_brw_critical(r: f64) -> Result<f64> {
    require_positive_ratio(r)?;
    Ok(2.0 * (r + 1.0) / (r + (r * r + 4.0).sqrt()))
}

/// Largest eigenvalue of the level matrix `[[alpha, beta], [beta, 0]]`:
/// the largest root of `x^2 - alpha x - beta^2 = 0`, namely
/// `(alpha + sqrt(alpha^2 + 4 beta^2)) / 2`. It exceeds 1 exactly when
/// `alpha + beta^2 > 1`.
pub fn level_matrix_eigenvalue(alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha.is_finite() && alpha >= 0.0) || !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::invalid_parameter(format!(
            "alpha and beta must be finite and nonnegative, got ({alpha}, {beta})"
        )));
    }
    Ok(0.5 * (alpha + (alpha * alpha + 4.0 * beta * beta).sqrt()))
}

/// Both real roots of `a x^2 + b x + c = 0`, smaller first, computed in
/// the cancellation-free form.
pub fn solve_quadratic(a: f64, b: f64, c: f64) -> Result<(f64, f64)> {
    if a == 0.0 {
        return Err(Error::invalid_argument("not a quadratic: a = 0"));
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Err(Error::domain(format!(
            "complex roots: discriminant {disc} < 0"
        )));
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let (r1, r2) = if q == 0.0 { (0.0, 0.0) } else { (q / a, c / q) };
    Ok(if r1 <= r2 { (r1, r2) } else { (r2, r1) })
}

/// Positive root of the limiting first-return quadratic
/// `(1/(1+r)^2) lambda^2 + (r/(r+1)) lambda - 1 = 0`, solved numerically.
/// Algebraically identical to [`comb_brw_critical`]; the two routes are
/// kept independent so consistency can be checked.
pub fn limiting_quadratic_root(r: f64) -> Result<f64> {
    require_positive_ratio(r)?;
    let a = 1.0 / ((1.0 + r) * (1.0 + r));
    let b = r / (r + 1.0);
    let (lo, hi) = solve_quadratic(a, b, -1.0)?;
    Ok(if hi > 0.0 { hi } else { lo })
}

/// The lambda value on the strong-survival boundary `alpha + beta^2 = 1`
/// at fixed ratio r: with `alpha = r beta`, solve `r beta + beta^2 = 1`
/// and return `lambda = (r + 1) beta`.
pub fn strong_survival_boundary_lambda(r: f64) -> Result<f64> {
    require_positive_ratio(r)?;
    let beta = 0.5 * ((r * r + 4.0).sqrt() - r);
    Ok((r + 1.0) * beta)
}
