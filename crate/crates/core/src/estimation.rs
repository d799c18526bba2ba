//! Confidence intervals for the process rate `p`.

use crate::dist::{binom_cdf, binom_sf, norm_quantile};
use crate::error::{check_alpha, Result};
use crate::interval::{Interval, IntervalKind, Target};
use crate::{Real, SampleSummary};

/// Bisection stops once the bracket is this narrow.
const BISECTION_TOLERANCE: f64 = 1e-12;
const BISECTION_MAX_STEPS: usize = 200;

/// Two-sided critical value `z_{α/2}`.
pub fn critical_value<T: Real>(alpha: T) -> Result<T> {
    check_alpha(alpha)?;
    norm_quantile(T::one() - alpha / T::lit(2.0))
}

pub(crate) fn small_sample(summary: &SampleSummary) -> bool {
    summary.y() < 5 || summary.n() - summary.y() < 5
}

/// Endpoints of `center ± half_width`, clamped to `[0, 1]`.
pub(crate) fn symmetric_proportion_interval<T: Real>(
    summary: &SampleSummary,
    center: T,
    half_width: T,
    alpha: T,
    kind: IntervalKind,
    target: Target,
) -> Interval<T> {
    let mut iv = Interval::new(center - half_width, center + half_width, alpha, kind, target).clamp_unit();
    iv.degenerate = summary.is_boundary();
    iv.small_sample = small_sample(summary);
    iv
}

/// Wald interval `p̂ ± z √(p̂ (1 − p̂) / n)`, clamped to `[0, 1]`.
///
/// At `y ∈ {0, n}` the standard error is zero and the interval collapses to
/// `{p̂}`; the result is flagged `degenerate` instead of failing.
pub fn wald_ci<T: Real>(summary: &SampleSummary, alpha: T) -> Result<Interval<T>> {
    let z = critical_value(alpha)?;
    let p: T = summary.p_hat();
    let se = (p * (T::one() - p) / T::from_count(summary.n())).sqrt();
    Ok(symmetric_proportion_interval(
        summary,
        p,
        z * se,
        alpha,
        IntervalKind::Confidence,
        Target::ParameterP,
    ))
}

/// Score (Wilson) interval:
/// `(2np̂ + z² ∓ z √(z² + 4np̂(1 − p̂))) / (2(n + z²))`.
pub fn wilson_ci<T: Real>(summary: &SampleSummary, alpha: T) -> Result<Interval<T>> {
    let z = critical_value(alpha)?;
    let p: T = summary.p_hat();
    let n = T::from_count(summary.n());
    let two = T::lit(2.0);
    let z2 = z * z;
    let center = two * n * p + z2;
    let spread = z * (z2 + T::lit(4.0) * n * p * (T::one() - p)).sqrt();
    let denom = two * (n + z2);
    // The roots are exactly 0 at y = 0 and exactly 1 at y = n.
    let lower = if summary.y() == 0 {
        T::zero()
    } else {
        ((center - spread) / denom).min(p)
    };
    let upper = if summary.y() == summary.n() {
        T::one()
    } else {
        ((center + spread) / denom).max(p)
    };
    let mut iv = Interval::new(lower, upper, alpha, IntervalKind::Confidence, Target::ParameterP).clamp_unit();
    iv.small_sample = small_sample(summary);
    Ok(iv)
}

/// Solves `f(p) = target` on `[0, 1]` for `f` increasing in `p`.
fn bisect_increasing<T: Real>(f: impl Fn(T) -> T, target: T) -> T {
    let (mut lo, mut hi) = (T::zero(), T::one());
    let tol = T::lit(BISECTION_TOLERANCE);
    for _ in 0..BISECTION_MAX_STEPS {
        if hi - lo <= tol {
            break;
        }
        let mid = (lo + hi) / T::lit(2.0);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / T::lit(2.0)
}

/// Equal-tailed exact interval: the lower end solves `P(Y ≥ y | p) = α/2`
/// and the upper end `P(Y ≤ y | p) = α/2`, each by bisection on binomial
/// tail sums.
pub fn clopper_pearson_ci<T: Real>(summary: &SampleSummary, alpha: T) -> Result<Interval<T>> {
    check_alpha(alpha)?;
    let (n, y) = (summary.n(), summary.y());
    let half = alpha / T::lit(2.0);
    let lower = if y == 0 {
        T::zero()
    } else {
        bisect_increasing(|p| binom_sf(n, p, y).expect("valid tail"), half)
    };
    let upper = if y == n {
        T::one()
    } else {
        // P(Y ≤ y | p) decreases in p, so bisect its complement.
        bisect_increasing(|p| T::one() - binom_cdf(n, p, y).expect("valid tail"), T::one() - half)
    };
    Ok(Interval::new(lower, upper, alpha, IntervalKind::Confidence, Target::ParameterP))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn s(n: u64, y: u64) -> SampleSummary {
        SampleSummary::new(n, y).unwrap()
    }

    #[test]
    fn wald_penny_spin() {
        let iv = wald_ci(&s(200, 83), 0.05).unwrap();
        assert_abs_diff_eq!(iv.lower, 0.346713465266056, epsilon = 1e-12);
        assert_abs_diff_eq!(iv.upper, 0.483286534733944, epsilon = 1e-12);
        assert_abs_diff_eq!(iv.level, 0.95, epsilon = 1e-15);
        assert_eq!(iv.kind, IntervalKind::Confidence);
        assert_eq!(iv.target, Target::ParameterP);
        assert!(!iv.degenerate && !iv.small_sample);
    }

    #[test]
    fn wald_boundary_collapses_with_flag() {
        let iv = wald_ci(&s(10, 0), 0.05).unwrap();
        assert_eq!((iv.lower, iv.upper), (0.0, 0.0));
        assert!(iv.degenerate && iv.small_sample);
    }

    #[test]
    fn wald_shrinks_as_alpha_grows() {
        let iv = wald_ci(&s(100, 50), 1.0 - 1e-9).unwrap();
        assert!(iv.width() < 1e-9);
        assert!(iv.contains(0.5));
        assert!(wald_ci(&s(100, 50), 1.0).is_err());
        assert!(wald_ci(&s(100, 50), 0.0).is_err());
    }

    #[test]
    fn wilson_reference_values() {
        let iv = wilson_ci(&s(10, 0), 0.05).unwrap();
        assert_eq!(iv.lower, 0.0);
        assert_abs_diff_eq!(iv.upper, 0.277532799862889, epsilon = 1e-12);

        let iv = wilson_ci(&s(200, 83), 0.05).unwrap();
        assert_abs_diff_eq!(iv.lower, 0.348942854497576, epsilon = 1e-12);
        assert_abs_diff_eq!(iv.upper, 0.48426085098656, epsilon = 1e-12);
        let wald = wald_ci(&s(200, 83), 0.05).unwrap();
        assert!(iv.contains(0.415));
        assert!(iv.midpoint() > wald.midpoint() && iv.midpoint() < 0.5);

        let iv = wilson_ci(&s(100, 100), 0.05).unwrap();
        let z = critical_value(0.05).unwrap();
        assert_abs_diff_eq!(iv.upper, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(iv.lower, 100.0 / (100.0 + z * z), epsilon = 1e-14);
    }

    #[test]
    fn clopper_pearson_closed_forms() {
        let iv = clopper_pearson_ci(&s(10, 0), 0.05).unwrap();
        assert_eq!(iv.lower, 0.0);
        assert_abs_diff_eq!(iv.upper, 1.0 - 0.025f64.powf(0.1), epsilon = 1e-10);
        assert_abs_diff_eq!(iv.upper, 0.308497107818761, epsilon = 1e-10);
        let iv = clopper_pearson_ci(&s(10, 10), 0.05).unwrap();
        assert_abs_diff_eq!(iv.lower, 0.025f64.powf(0.1), epsilon = 1e-10);
        assert_eq!(iv.upper, 1.0);
    }

    #[test]
    fn clopper_pearson_matches_beta_quantiles() {
        // Beta-quantile route: Beta(y, n−y+1) at α/2 and Beta(y+1, n−y) at 1−α/2.
        let iv = clopper_pearson_ci(&s(200, 83), 0.05).unwrap();
        assert_abs_diff_eq!(iv.lower, 0.34593366818078, epsilon = 1e-9);
        assert_abs_diff_eq!(iv.upper, 0.486624685616803, epsilon = 1e-9);
        assert!(iv.width() > wald_ci(&s(200, 83), 0.05).unwrap().width());
    }

    #[test]
    fn clopper_pearson_tails_hit_half_alpha() {
        for &(n, y) in &[(5u64, 1u64), (25, 7), (50, 49), (200, 83)] {
            let iv = clopper_pearson_ci(&s(n, y), 0.05).unwrap();
            assert_abs_diff_eq!(binom_sf(n, iv.lower, y).unwrap(), 0.025, epsilon = 1e-8);
            assert_abs_diff_eq!(binom_cdf(n, iv.upper, y).unwrap(), 0.025, epsilon = 1e-8);
        }
    }
}
