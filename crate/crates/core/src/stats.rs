//! Small statistics toolbox used by the Monte Carlo estimators and tests.

/// 97.5% standard normal quantile, the z used by every 95% interval here.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for a binomial proportion. The interval always
/// contains the point estimate; at 0 or n successes the touched endpoint
/// is exact.
pub fn wilson_interval(successes: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = successes as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = p + z2 / (2.0 * nf);
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    let lo = if successes == 0 {
        0.0
    } else {
        ((center - half) / denom).max(0.0)
    };
    let hi = if successes == n {
        1.0
    } else {
        ((center + half) / denom).min(1.0)
    };
    (lo, hi)
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Standard error of the mean (sample standard deviation / sqrt n).
pub fn stderr_of_mean(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return f64::NAN;
    }
    let mu = mean(xs);
    let var = xs.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / (n as f64 - 1.0);
    (var / n as f64).sqrt()
}

/// Median by sorting a copy. NaNs are not expected in inputs.
pub fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Ordinary least squares fit y = intercept + slope * x.
pub fn ols(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum::<f64>();
    let sxy = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>();
    let slope = sxy / sxx;
    (my - slope * mx, slope)
}

/// Jackknife standard error of an estimator from its leave-one-out values.
pub fn jackknife_stderr(leave_one_out: &[f64]) -> f64 {
    let b = leave_one_out.len() as f64;
    if leave_one_out.len() < 2 {
        return f64::NAN;
    }
    let mu = mean(leave_one_out);
    let ss = leave_one_out
        .iter()
        .map(|x| (x - mu) * (x - mu))
        .sum::<f64>();
    ((b - 1.0) / b * ss).sqrt()
}

/// Empirical CDF of integer-valued samples evaluated on 0..=t_max.
/// Samples beyond t_max contribute to no bin (censored mass stays out).
pub fn ecdf_counts(samples: &[u64], t_max: u64) -> Vec<f64> {
    let n = samples.len() as f64;
    let mut counts = vec![0u64; t_max as usize + 1];
    for &s in samples {
        if s <= t_max {
            counts[s as usize] += 1;
        }
    }
    let mut acc = 0u64;
    counts
        .iter()
        .map(|&c| {
            acc += c;
            acc as f64 / n
        })
        .collect()
}

/// Sup-norm distance between two CDFs sampled on the same grid.
pub fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Upper-tail chi-square quantile via the Wilson–Hilferty approximation,
/// adequate for the large degrees of freedom used in uniformity checks.
pub fn chi_square_quantile(dof: u64, z: f64) -> f64 {
    let k = dof as f64;
    let t = 1.0 - 2.0 / (9.0 * k) + z * (2.0 / (9.0 * k)).sqrt();
    k * t * t * t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_degenerate_endpoints() {
        let (lo, hi) = wilson_interval(0, 100, Z95);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.05);
        let (lo, hi) = wilson_interval(100, 100, Z95);
        assert_eq!(hi, 1.0);
        assert!(lo > 0.95);
    }

    #[test]
    fn wilson_contains_point_estimate() {
        for &(s, n) in &[(3u64, 50u64), (25, 50), (49, 50), (1, 1000)] {
            let (lo, hi) = wilson_interval(s, n, Z95);
            let p = s as f64 / n as f64;
            assert!(lo <= p && p <= hi);
        }
    }

    #[test]
    fn ols_recovers_exact_line() {
        let pts: Vec<(f64, f64)> = (0..10).map(|t| (t as f64, 3.0 - 0.5 * t as f64)).collect();
        let (b0, b1) = ols(&pts);
        assert!((b0 - 3.0).abs() < 1e-12);
        assert!((b1 + 0.5).abs() < 1e-12);
    }

    #[test]
    fn ecdf_and_sup_distance() {
        let a = ecdf_counts(&[1, 1, 2, 5], 4);
        assert_eq!(a, vec![0.0, 0.5, 0.75, 0.75, 0.75]);
        let b = ecdf_counts(&[1, 2, 2, 3], 4);
        let d = sup_distance(&a, &b);
        assert!((d - 0.25).abs() < 1e-12);
    }

    #[test]
    fn chi_square_quantile_matches_tables() {
        // chi2(0.95, 10) = 18.307, chi2(0.95, 100) = 124.342
        assert!((chi_square_quantile(10, 1.6448536269514722) - 18.307).abs() < 0.35);
        assert!((chi_square_quantile(100, 1.6448536269514722) - 124.342).abs() < 0.25);
    }

    #[test]
    fn median_handles_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
