use crate::dist::{binom_pmf, hyper_pmf, hyper_support};
use crate::error::{check_alpha, check_probability, domain, Error, Result};
use crate::interval::proportion_interval;
use super::MethodCoverage;
use crate::{Interval, IntervalKind, Method, SampleSummary};

/// Largest researcher's sample accepted by [`exact_ci_coverage`].
pub const EXACT_CI_MAX_N: u64 = 10_000;
/// Largest representative sample accepted by [`exact_pi_coverage`].
pub const EXACT_PI_MAX_N: u64 = 500;

fn require_kind(method: Method, kind: IntervalKind, context: &str) -> Result<()> {
    if method.kind() != kind || method == Method::Mean {
        return Err(Error::UnsupportedMethod {
            method: method.id().to_string(),
            context: context.to_string(),
        });
    }
    Ok(())
}

/// Exact coverage of a confidence interval for `p`:
/// `Σ_y P(Y_n = y) · 1{p ∈ interval(y)}` under `Binomial(n, p)`.
pub fn exact_ci_coverage(method: Method, n: u64, p: f64, alpha: f64) -> Result<f64> {
    require_kind(method, IntervalKind::Confidence, "exact confidence-interval coverage")?;
    check_probability(p, "p")?;
    check_alpha(alpha)?;
    if n == 0 {
        return domain("sample size n must be at least 1");
    }
    if n > EXACT_CI_MAX_N {
        return Err(Error::ResourceLimit(format!(
            "exact confidence coverage supports n <= {EXACT_CI_MAX_N}, got n = {n}"
        )));
    }
    let mut total = 0.0;
    for y in 0..=n {
        let iv: Interval<f64> = proportion_interval(method, &SampleSummary::new(n, y)?, None, alpha)?;
        if iv.contains(p) {
            total += binom_pmf(n, p, y)?;
        }
    }
    Ok(total)
}

/// Exact coverage of a prediction interval for `p̂_N`, summing over the joint
/// law `Y_N ~ Binomial(N, p)`, `Y_n | Y_N ~ Hypergeometric(N, Y_N, n)`.
pub fn exact_pi_coverage(method: Method, big_n: u64, n: u64, p: f64, alpha: f64) -> Result<f64> {
    pi_coverage(method, big_n, n, p, alpha, false)
}

/// [`exact_pi_coverage`] with endpoints rounded outward to the `1/N` lattice.
pub fn exact_pi_coverage_snapped(method: Method, big_n: u64, n: u64, p: f64, alpha: f64) -> Result<f64> {
    pi_coverage(method, big_n, n, p, alpha, true)
}

fn pi_coverage(method: Method, big_n: u64, n: u64, p: f64, alpha: f64, snap: bool) -> Result<f64> {
    require_kind(method, IntervalKind::Prediction, "exact prediction-interval coverage")?;
    check_probability(p, "p")?;
    check_alpha(alpha)?;
    if n == 0 || n > big_n {
        return domain(format!("sizes must satisfy 1 <= n <= N, got n = {n}, N = {big_n}"));
    }
    if big_n > EXACT_PI_MAX_N {
        return Err(Error::ResourceLimit(format!(
            "exact prediction coverage supports N <= {EXACT_PI_MAX_N}, got N = {big_n}"
        )));
    }
    let intervals = (0..=n)
        .map(|y| {
            let iv: Interval<f64> = proportion_interval(method, &SampleSummary::new(n, y)?, Some(big_n), alpha)?;
            Ok(if snap { iv.snapped_to_grid(big_n) } else { iv })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = 0.0;
    for k in 0..=big_n {
        let weight: f64 = binom_pmf(big_n, p, k)?;
        if weight == 0.0 {
            continue;
        }
        let target = k as f64 / big_n as f64;
        let mut inner = 0.0;
        for y in hyper_support(big_n, k, n)? {
            if intervals[y as usize].contains(target) {
                inner += hyper_pmf::<f64>(big_n, k, n, y)?;
            }
        }
        total += weight * inner;
    }
    Ok(total)
}

/// Exact coverage together with the exact expected width, packaged like a
/// Monte Carlo record (`coverage_se = 0`, no replicates).
///
/// Confidence methods ignore `big_n`. Intervals depend on the data only
/// through `y` and `Y_n ~ Binomial(n, p)` marginally, so the expected width
/// is a single binomial sum for both kinds.
pub fn exact_coverage_record(
    method: Method,
    big_n: u64,
    n: u64,
    p: f64,
    alpha: f64,
    snap: bool,
) -> Result<MethodCoverage> {
    let coverage = match method.kind() {
        IntervalKind::Confidence => exact_ci_coverage(method, n, p, alpha)?,
        IntervalKind::Prediction => pi_coverage(method, big_n, n, p, alpha, snap)?,
    };
    let snap_pi = snap && method.kind() == IntervalKind::Prediction;
    let mut mean_width = 0.0;
    for y in 0..=n {
        let iv: Interval<f64> = proportion_interval(method, &SampleSummary::new(n, y)?, Some(big_n), alpha)?;
        let iv = if snap_pi { iv.snapped_to_grid(big_n) } else { iv };
        mean_width += binom_pmf::<f64>(n, p, y)? * iv.width();
    }
    Ok(MethodCoverage {
        method,
        kind: method.kind(),
        target: method.target(),
        nominal_level: 1.0 - alpha,
        coverage,
        coverage_se: 0.0,
        mean_width,
        replicates_used: 0,
        degenerate_count: 0,
    })
}

/// `max_y |Σ_k P(Y_N = k) P(Y_n = y | Y_N = k) − P(Y_n = y)|`: how far the
/// Binomial-mixed hypergeometric law of the sample count is from
/// `Binomial(n, p)`. Zero up to rounding.
pub fn marginal_check(big_n: u64, n: u64, p: f64) -> Result<f64> {
    check_probability(p, "p")?;
    if n > big_n {
        return domain(format!("sample size n = {n} must satisfy n <= N = {big_n}"));
    }
    if big_n > EXACT_PI_MAX_N {
        return Err(Error::ResourceLimit(format!(
            "marginal check supports N <= {EXACT_PI_MAX_N}, got N = {big_n}"
        )));
    }
    let weights = (0..=big_n).map(|k| binom_pmf(big_n, p, k)).collect::<Result<Vec<f64>>>()?;
    let mut worst = 0.0f64;
    for y in 0..=n {
        let mut mixed = 0.0;
        for (k, w) in weights.iter().enumerate() {
            mixed += w * hyper_pmf::<f64>(big_n, k as u64, n, y)?;
        }
        worst = worst.max((mixed - binom_pmf::<f64>(n, p, y)?).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ci_coverage_reference_values() {
        // Independent scipy computation (beta quantiles for Clopper-Pearson).
        let wald = exact_ci_coverage(Method::Wald, 25, 0.3, 0.05).unwrap();
        assert_abs_diff_eq!(wald, 0.9492897428830991, epsilon = 1e-9);
        assert!(wald > 0.85 && wald < 0.97);
        let wilson = exact_ci_coverage(Method::Wilson, 25, 0.3, 0.05).unwrap();
        assert_abs_diff_eq!(wilson, 0.9225129860178742, epsilon = 1e-9);
        let cp = exact_ci_coverage(Method::ClopperPearson, 25, 0.3, 0.05).unwrap();
        assert_abs_diff_eq!(cp, 0.9735697315947995, epsilon = 1e-9);
    }

    #[test]
    fn ci_coverage_at_degenerate_rate() {
        assert_eq!(exact_ci_coverage(Method::Wald, 25, 0.0, 0.05).unwrap(), 1.0);
        assert_eq!(exact_ci_coverage(Method::Wilson, 25, 0.0, 0.05).unwrap(), 1.0);
        assert_eq!(exact_ci_coverage(Method::ClopperPearson, 25, 1.0, 0.05).unwrap(), 1.0);
    }

    #[test]
    fn pi_coverage_reference_values() {
        let cases = [
            (0.3, 0.947369803459821, 0.9921548187138238, 0.9490244894396194),
            (0.4, 0.9451934171501596, 0.9930347258083556, 0.948569364083938),
            (0.5, 0.9440172479005314, 0.9937209670637167, 0.9440342395612055),
        ];
        for (p, fpc, cons, quad) in cases {
            assert_abs_diff_eq!(exact_pi_coverage(Method::WaldFpc, 200, 100, p, 0.05).unwrap(), fpc, epsilon = 1e-9);
            assert_abs_diff_eq!(
                exact_pi_coverage(Method::Conservative, 200, 100, p, 0.05).unwrap(),
                cons,
                epsilon = 1e-9
            );
            assert_abs_diff_eq!(exact_pi_coverage(Method::Quadratic, 200, 100, p, 0.05).unwrap(), quad, epsilon = 1e-9);
        }
    }

    #[test]
    fn census_prediction_coverage_is_one() {
        for m in [Method::WaldFpc, Method::Quadratic] {
            assert_abs_diff_eq!(exact_pi_coverage(m, 40, 40, 0.3, 0.05).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn snapping_dominates() {
        for m in [Method::WaldFpc, Method::Quadratic, Method::QuadraticNFree] {
            let plain = exact_pi_coverage(m, 120, 30, 0.2, 0.05).unwrap();
            let snapped = exact_pi_coverage_snapped(m, 120, 30, 0.2, 0.05).unwrap();
            assert!(snapped >= plain - 1e-15);
        }
    }

    #[test]
    fn limits_and_wrong_methods() {
        assert!(matches!(
            exact_pi_coverage(Method::WaldFpc, 501, 100, 0.4, 0.05),
            Err(Error::ResourceLimit(_))
        ));
        assert!(matches!(
            exact_ci_coverage(Method::Wald, 10_001, 0.4, 0.05),
            Err(Error::ResourceLimit(_))
        ));
        assert!(matches!(
            exact_ci_coverage(Method::WaldFpc, 10, 0.4, 0.05),
            Err(Error::UnsupportedMethod { .. })
        ));
        assert!(matches!(
            exact_pi_coverage(Method::Mean, 10, 5, 0.4, 0.05),
            Err(Error::UnsupportedMethod { .. })
        ));
        assert!(exact_pi_coverage(Method::WaldFpc, 10, 11, 0.4, 0.05).is_err());
    }

    #[test]
    fn exact_record_width() {
        let r = exact_coverage_record(Method::WaldFpc, 40, 40, 0.3, 0.05, false).unwrap();
        assert_eq!((r.coverage_se, r.mean_width), (0.0, 0.0));
        assert_abs_diff_eq!(r.coverage, 1.0, epsilon = 1e-12);
        let ci = exact_coverage_record(Method::Wald, 999, 25, 0.3, 0.05, false).unwrap();
        assert_abs_diff_eq!(ci.coverage, 0.9492897428830991, epsilon = 1e-9);
        assert!(ci.mean_width > 0.2 && ci.mean_width < 0.5);
    }

    #[test]
    fn marginal_examples() {
        assert!(marginal_check(10, 4, 0.5).unwrap() <= 1e-10);
        assert!(marginal_check(10, 10, 0.3).unwrap() <= 1e-12);
        assert!(marginal_check(40, 1, 0.25).unwrap() <= 1e-10);
        assert!(marginal_check(10, 11, 0.3).is_err());
    }
}
