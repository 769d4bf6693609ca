//! The birth-and-death chain behind the strong-survival lower bound.
//!
//! The random walk on K_M projects through `phi` onto a chain on the
//! nonnegative integers. Its first-return generating function F solves a
//! three-term difference equation whose decaying root theta_2 yields a
//! closed form; the strong-survival critical value of the branching
//! random walk on K_M is bounded below by sup{lambda : F(lambda) < 1},
//! which converges to the comb critical value as M grows.

use crate::error::{Error, Result};
use serde::Serialize;

/// All chain quantities at one `(lambda, r, M)` triple.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ChainAnalysis {
    pub lambda: f64,
    pub r: f64,
    pub m_sites: u64,
    /// `u = 1/(1+r)`: probability of a long-range jump.
    pub u: f64,
    /// Difference-equation coefficients of `a h(2n+2) - b h(2n) + c h(2n-2) = 0`.
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub theta1: f64,
    pub theta2: f64,
    /// First-passage generating value from state 1.
    pub h1: f64,
    /// First-return generating function `F = lambda (1 - u + u h(1))`.
    pub f: f64,
    /// Green function `G = 1/(1 - F)`, present when `F < 1`.
    pub green: Option<f64>,
}

fn check_u_m(u: f64, m_sites: u64) -> Result<()> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::invalid_parameter(format!(
            "u must lie in (0, 1), got {u}"
        )));
    }
    if m_sites < 2 {
        return Err(Error::invalid_parameter(format!(
            "M must be >= 2, got {m_sites}"
        )));
    }
    Ok(())
}

/// Transition row of the projected chain at state `j`.
///
/// State 0 holds with probability `1-u` and moves to 1 with probability
/// `u`. Odd states (last coordinate 0) drift down: `r(j, j-1) = u`,
/// `r(j, j) = (1-u)/M`, `r(j, j+1) = (1-u)(1 - 1/M)`. Even states >= 2
/// (last coordinate nonzero) drift up: `r(j, j+1) = u`,
/// `r(j, j-1) = (1-u)/M`, `r(j, j) = (1-u)(1 - 1/M)`.
pub fn chain_kernel(j: u64, u: f64, m_sites: u64) -> Result<Vec<(u64, f64)>> {
    check_u_m(u, m_sites)?;
    let m = m_sites as f64;
    Ok(if j == 0 {
        vec![(0, 1.0 - u), (1, u)]
    } else if j % 2 == 1 {
        vec![
            (j - 1, u),
            (j, (1.0 - u) / m),
            (j + 1, (1.0 - u) * (1.0 - 1.0 / m)),
        ]
    } else {
        vec![
            (j - 1, (1.0 - u) / m),
            (j, (1.0 - u) * (1.0 - 1.0 / m)),
            (j + 1, u),
        ]
    })
}

/// Coefficients of the homogeneous difference equation
/// `a h(2n+2) - b h(2n) + c h(2n-2) = 0`.
pub fn chain_coefficients(lambda: f64, u: f64, m_sites: u64) -> (f64, f64, f64) {
    let m = m_sites as f64;
    let a = lambda * lambda * u * (1.0 - u) * (1.0 - 1.0 / m);
    let b = 1.0
        - lambda * (1.0 - u) / m
        - (lambda - lambda * lambda * (1.0 - u) / m) * (1.0 - u) * (1.0 - 1.0 / m)
        - lambda * lambda * (1.0 - u) * (1.0 - u) * (1.0 - 1.0 / m) / m
        - lambda * lambda * u * u;
    let c = lambda * lambda * u * (1.0 - u) / m;
    (a, b, c)
}

/// The smaller root `theta_2` of `a theta^2 - b theta + c = 0`, computed
/// in the cancellation-free form `2c / (b + sqrt(b^2 - 4ac))`.
/// `theta_2 ~ c/b -> 0` as `M -> infinity`.
pub fn chain_theta2(lambda: f64, u: f64, m_sites: u64) -> Result<f64> {
    check_u_m(u, m_sites)?;
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::invalid_parameter(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    let (a, b, c) = chain_coefficients(lambda, u, m_sites);
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Err(Error::domain(format!(
            "complex roots at lambda = {lambda}: b^2 - 4ac = {disc} < 0 \
             (outside the radius of convergence)"
        )));
    }
    // Real roots with b <= 0 lie beyond the radius of convergence on a
    // spurious branch (theta_2 < 0 cannot be a generating-function
    // solution); only the branch continuous with lambda -> 0 is valid.
    if b <= 0.0 {
        return Err(Error::domain(format!(
            "b = {b} <= 0 at lambda = {lambda}: outside the radius of convergence"
        )));
    }
    Ok(2.0 * c / (b + disc.sqrt()))
}

/// The larger root `theta_1`.
pub fn chain_theta1(lambda: f64, u: f64, m_sites: u64) -> Result<f64> {
    chain_theta2(lambda, u, m_sites)?;
    let (a, b, c) = chain_coefficients(lambda, u, m_sites);
    let disc = b * b - 4.0 * a * c;
    Ok((b + disc.sqrt()) / (2.0 * a))
}

/// Full chain analysis at `(lambda, r, M)`: solves `h(1)` from the
/// one-step relation with `h(0) = 1` and `h(2) = theta_2`, then
/// `F = lambda (1 - u + u h(1))` and `G = 1/(1-F)` when `F < 1`.
pub fn chain_analysis(lambda: f64, r: f64, m_sites: u64) -> Result<ChainAnalysis> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::invalid_parameter(format!(
            "ratio r must be positive, got {r}"
        )));
    }
    let u = 1.0 / (1.0 + r);
    check_u_m(u, m_sites)?;
    let (a, b, c) = chain_coefficients(lambda, u, m_sites);
    let theta2 = chain_theta2(lambda, u, m_sites)?;
    let theta1 = chain_theta1(lambda, u, m_sites)?;
    let m = m_sites as f64;
    let denom = 1.0 - lambda * (1.0 - u) / m;
    if denom <= 0.0 {
        return Err(Error::domain(format!(
            "h(1) solve has nonpositive denominator 1 - lambda(1-u)/M = {denom}"
        )));
    }
    let h1 = lambda * (u + (1.0 - u) * (1.0 - 1.0 / m) * theta2) / denom;
    let f = lambda * (1.0 - u + u * h1);
    let green = if f < 1.0 { Some(1.0 / (1.0 - f)) } else { None };
    Ok(ChainAnalysis {
        lambda,
        r,
        m_sites,
        u,
        a,
        b,
        c,
        theta1,
        theta2,
        h1,
        f,
        green,
    })
}

/// Value of the first-return generating function in the M -> infinity
/// limit: `lambda (1 - u) + u^2 lambda^2`.
pub fn chain_f_limit(lambda: f64, r: f64) -> f64 {
    let u = 1.0 / (1.0 + r);
    lambda * (1.0 - u) + u * u * lambda * lambda
}

/// Lower bound for the strong-survival critical value of the branching
/// random walk on K_M: `sup{lambda : F(lambda) < 1}`, located by
/// bisection to absolute tolerance 1e-9. Lambdas where the closed form
/// leaves its real-root domain count as the upper side of the bracket.
/// Converges to [`super::closed_form::comb_brw_critical`] as M grows.
pub fn lambda2_brw_lower_bound(r: f64, m_sites: u64) -> Result<f64> {
    lambda2_brw_lower_bound_with_hi(r, m_sites, 4.0)
}

pub fn lambda2_brw_lower_bound_with_hi(r: f64, m_sites: u64, lambda_hi: f64) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::invalid_parameter(format!(
            "ratio r must be positive, got {r}"
        )));
    }
    if m_sites < 2 {
        return Err(Error::invalid_parameter(format!(
            "M must be >= 2, got {m_sites}"
        )));
    }
    let below = |lambda: f64| -> bool {
        match chain_analysis(lambda, r, m_sites) {
            Ok(an) => an.f < 1.0,
            Err(_) => false,
        }
    };
    let mut lo = 1e-9;
    let mut hi = lambda_hi;
    if !below(lo) {
        return Err(Error::Bracket(format!(
            "F is not below 1 at the lower bracket end lambda = {lo}"
        )));
    }
    if below(hi) {
        return Err(Error::Bracket(format!(
            "F stays below 1 up to lambda = {hi}; raise the upper bracket"
        )));
    }
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if below(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::closed_form::comb_brw_critical;

    #[test]
    fn kernel_rows_match_printed_values() {
        let u = 0.25;
        let m = 4;
        assert_eq!(chain_kernel(0, u, m).unwrap(), vec![(0, 0.75), (1, 0.25)]);
        let row = chain_kernel(1, u, m).unwrap();
        assert_eq!(row[0], (0, 0.25));
        assert!((row[1].1 - 0.75 / 4.0).abs() < 1e-15);
        assert!((row[2].1 - 0.75 * 0.75).abs() < 1e-15);
        assert_eq!(row[2].0, 2);
    }

    #[test]
    fn kernel_rows_sum_to_one() {
        for &u in &[0.1, 1.0 / 3.0, 0.5, 0.9] {
            for &m in &[2u64, 3, 27, 1000] {
                for j in 0..=100 {
                    let s: f64 = chain_kernel(j, u, m).unwrap().iter().map(|e| e.1).sum();
                    assert!((s - 1.0).abs() < 1e-12, "u={u} m={m} j={j}: {s}");
                }
            }
        }
    }

    #[test]
    fn coefficient_c_value() {
        // c = lambda^2 u (1-u) / M at lambda=1, u=0.5, M=4.
        let (_, _, c) = chain_coefficients(1.0, 0.5, 4);
        assert!((c - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn coefficients_m_limit() {
        let u = 1.0 / 3.0;
        let lambda = 1.1;
        let (a, _, c) = chain_coefficients(lambda, u, 1_000_000_000);
        assert!(c < 1e-8);
        assert!((a - lambda * lambda * u * (1.0 - u)).abs() < 1e-8);
    }

    #[test]
    fn theta2_is_a_root_and_small_for_large_m() {
        let u = 1.0 / 3.0;
        for &(lambda, m) in &[(1.05, 27u64), (1.1, 100), (0.9, 5)] {
            let (a, b, c) = chain_coefficients(lambda, u, m);
            let t2 = chain_theta2(lambda, u, m).unwrap();
            let residual = a * t2 * t2 - b * t2 + c;
            assert!(
                residual.abs() < 1e-12 * b.abs().max(1.0),
                "residual {residual}"
            );
            let t1 = chain_theta1(lambda, u, m).unwrap();
            assert!(t2 <= t1);
        }
        // theta_2 ~ c/b -> 0 as M -> infinity.
        assert!(chain_theta2(1.1, 1.0 / 3.0, 1_000_000).unwrap() < 1e-5);
    }

    #[test]
    fn recurrence_holds_for_theta2_powers() {
        // h(2n) = theta_2^n satisfies a h(2n+2) - b h(2n) + c h(2n-2) = 0.
        let (a, b, c) = chain_coefficients(1.05, 1.0 / 3.0, 27);
        let t2 = chain_theta2(1.05, 1.0 / 3.0, 27).unwrap();
        for n in 1..=20 {
            let res = a * t2.powi(n + 1) - b * t2.powi(n) + c * t2.powi(n - 1);
            assert!(res.abs() < 1e-10, "n={n}: {res}");
        }
    }

    #[test]
    fn f_vanishes_with_lambda() {
        let an = chain_analysis(1e-6, 2.0, 27).unwrap();
        assert!(an.f < 1e-5);
        assert!(an.green.unwrap() > 1.0);
    }

    #[test]
    fn f_approaches_limit_formula() {
        // At r = 1, lambda = 1.2 the limit is 0.96.
        assert!((chain_f_limit(1.2, 1.0) - 0.96).abs() < 1e-12);
        assert!((chain_f_limit(1.25, 1.0) - 1.015625).abs() < 1e-12);
        let an = chain_analysis(1.2, 1.0, 1_000_000).unwrap();
        assert!((an.f - 0.96).abs() < 1e-4, "F = {}", an.f);
    }

    #[test]
    fn f_is_monotone_in_lambda() {
        // Scan until the closed form leaves its real-root domain (the
        // radius of convergence); F must be nondecreasing on the way.
        let mut prev = 0.0;
        let mut in_domain = 0;
        for i in 1..=100 {
            let lambda = 0.012 * i as f64;
            match chain_analysis(lambda, 2.0, 27) {
                Ok(an) => {
                    assert!(an.f >= prev, "F not monotone at lambda = {lambda}");
                    prev = an.f;
                    in_domain += 1;
                }
                Err(_) => break,
            }
        }
        // The domain reaches past lambda = 1 for (r, M) = (2, 27).
        assert!(
            in_domain >= 85,
            "domain ended after {in_domain} grid points"
        );
    }

    #[test]
    fn lower_bound_converges_to_comb_value() {
        let comb = comb_brw_critical(1.0).unwrap();
        let b6 = lambda2_brw_lower_bound(1.0, 1_000_000).unwrap();
        assert!((b6 - comb).abs() < 1e-3, "{b6} vs {comb}");
        // Cauchy-like convergence: consecutive gaps shrink.
        let b4 = lambda2_brw_lower_bound(1.0, 10_000).unwrap();
        let b5 = lambda2_brw_lower_bound(1.0, 100_000).unwrap();
        assert!((b4 - b5).abs() > (b5 - b6).abs());
    }

    #[test]
    fn lower_bound_exceeds_one_for_large_m() {
        for &r in &[1.5, 2.0, 4.0] {
            for &m in &[100u64, 1000, 100_000] {
                assert!(lambda2_brw_lower_bound(r, m).unwrap() > 1.0, "r={r} M={m}");
            }
        }
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        assert!(lambda2_brw_lower_bound(0.0, 27).is_err());
        assert!(lambda2_brw_lower_bound(2.0, 1).is_err());
        assert!(chain_kernel(1, 0.0, 27).is_err());
        assert!(chain_theta2(-1.0, 0.5, 27).is_err());
    }
}
