//! Moments of the researcher's sample count and proportion, conditional on
//! the representative sample and unconditional under the process, plus the
//! two plug-in variance estimators.
//!
//! Conditioning on the full measurement vector of the representative sample
//! enters only through its success count `Y_N`, so every conditional
//! function takes `(N, Y_N, n)`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentPair<T> {
    pub mean: T,
    pub variance: T,
}

/// Sufficient statistics of a binary sample: `y` successes among `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SampleSummary {
    n: u64,
    y: u64,
}

impl SampleSummary {
    pub fn new(n: u64, y: u64) -> Result<Self> {
        if n == 0 {
            return domain("sample size n must be at least 1");
        }
        if y > n {
            return domain(format!("success count y = {y} must satisfy y <= n = {n}"));
        }
        Ok(SampleSummary { n, y })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn y(&self) -> u64 {
        self.y
    }

    pub fn p_hat<T: Scalar>(&self) -> T {
        T::from_count(self.y) / T::from_count(self.n)
    }

    /// True when the sample is all failures or all successes.
    pub fn is_boundary(&self) -> bool {
        self.y == 0 || self.y == self.n
    }

    /// The individuals of the representative sample left out of this one:
    /// `N − n` of them with `Y_N − y` successes.
    pub fn complement(&self, big_n: u64, y_big_n: u64) -> Result<SampleSummary> {
        if big_n <= self.n {
            return domain(format!("complement needs N = {big_n} > n = {}", self.n));
        }
        if y_big_n < self.y || y_big_n - self.y > big_n - self.n {
            return domain(format!(
                "Y_N = {y_big_n} is inconsistent with y = {} of n = {} and N = {big_n}",
                self.y, self.n
            ));
        }
        SampleSummary::new(big_n - self.n, y_big_n - self.y)
    }
}

fn check_conditional(big_n: u64, y_big_n: u64, n: u64) -> Result<()> {
    if big_n < 2 {
        return domain(format!("conditional moments need N >= 2, got N = {big_n}"));
    }
    if y_big_n > big_n {
        return domain(format!("Y_N = {y_big_n} must satisfy Y_N <= N = {big_n}"));
    }
    if n == 0 || n > big_n {
        return domain(format!("sample size must satisfy 1 <= n <= N, got n = {n}, N = {big_n}"));
    }
    Ok(())
}

/// Mean `n Y_N / N` and variance `(1 − (n−1)/(N−1)) n p̂_N (1 − p̂_N)` of the
/// sample success count given the representative sample.
pub fn conditional_moments_count<T: Scalar>(big_n: u64, y_big_n: u64, n: u64) -> Result<MomentPair<T>> {
    check_conditional(big_n, y_big_n, n)?;
    let c = T::from_count;
    let p_big = c(y_big_n) / c(big_n);
    let fpc = T::one() - c(n - 1) / c(big_n - 1);
    Ok(MomentPair {
        mean: c(n) * p_big,
        variance: fpc * c(n) * p_big * (T::one() - p_big),
    })
}

/// The same moments on the proportion scale: mean `p̂_N`, variance
/// `(1 − (n−1)/(N−1)) p̂_N (1 − p̂_N) / n`.
pub fn conditional_moments_proportion<T: Scalar>(big_n: u64, y_big_n: u64, n: u64) -> Result<MomentPair<T>> {
    let count = conditional_moments_count::<T>(big_n, y_big_n, n)?;
    let nn = T::from_count(n);
    Ok(MomentPair {
        mean: count.mean / nn,
        variance: count.variance / (nn * nn),
    })
}

/// Mean `p` and variance `p (1 − p) / n` of `p̂_n` under `Binomial(n, p)`.
pub fn unconditional_moments_proportion<T: Scalar>(n: u64, p: T) -> Result<MomentPair<T>> {
    if n == 0 {
        return domain("sample size n must be at least 1");
    }
    if p < T::zero() || p > T::one() {
        return domain(format!("p must lie in [0, 1], got {p:?}"));
    }
    Ok(MomentPair {
        mean: p,
        variance: p * (T::one() - p) / T::from_count(n),
    })
}

/// Plug-in `p̂ (1 − p̂) / n`. Its expectation is `(n−1)/n` times the true
/// variance of `p̂`.
pub fn var_estimate_biased<T: Scalar>(summary: &SampleSummary) -> T {
    let p: T = summary.p_hat();
    p * (T::one() - p) / T::from_count(summary.n)
}

/// `p̂ (1 − p̂) / (n − 1)`, unbiased for `p (1 − p) / n`.
pub fn var_estimate_unbiased<T: Scalar>(summary: &SampleSummary) -> Result<T> {
    if summary.n < 2 {
        return domain("unbiased variance estimate needs n >= 2");
    }
    let p: T = summary.p_hat();
    Ok(p * (T::one() - p) / T::from_count(summary.n - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::exact::binom_pmf_exact;
    use approx::assert_abs_diff_eq;
    use num_rational::Ratio;

    type Q = Ratio<i128>;

    /// Exact moments of the subset success count over every size-`n` subset
    /// of a pool with `k` successes among `big_n`.
    fn enumerate_subsets(big_n: usize, k: usize, n: usize) -> (Q, Q) {
        let mut sums = Vec::new();
        for mask in 0u32..(1 << big_n) {
            if mask.count_ones() as usize == n {
                sums.push(((mask & ((1 << k) - 1)).count_ones()) as i128);
            }
        }
        let m = Q::from_integer(sums.len() as i128);
        let mean = sums.iter().map(|&s| Q::from_integer(s)).sum::<Q>() / m;
        let var = sums
            .iter()
            .map(|&s| (Q::from_integer(s) - mean) * (Q::from_integer(s) - mean))
            .sum::<Q>()
            / m;
        (mean, var)
    }

    #[test]
    fn count_moments_match_252_subsets() {
        let (m, v) = enumerate_subsets(10, 4, 5);
        let closed = conditional_moments_count::<Q>(10, 4, 5).unwrap();
        assert_eq!(closed.mean, m);
        assert_eq!(closed.variance, v);
        assert_eq!(closed.variance, Q::new(2, 3));

        let float = conditional_moments_count::<f64>(10, 4, 5).unwrap();
        assert_abs_diff_eq!(float.mean, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(float.variance, 2.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn count_degenerate_cases() {
        let none = conditional_moments_count::<f64>(10, 0, 5).unwrap();
        assert_eq!((none.mean, none.variance), (0.0, 0.0));
        let census = conditional_moments_count::<f64>(10, 4, 10).unwrap();
        assert_eq!((census.mean, census.variance), (4.0, 0.0));
    }

    #[test]
    fn proportion_moments() {
        let m = conditional_moments_proportion::<Q>(10, 4, 5).unwrap();
        assert_eq!(m.mean, Q::new(2, 5));
        assert_eq!(m.variance, Q::new(2, 75));
        let census = conditional_moments_proportion::<f64>(10, 4, 10).unwrap();
        assert_eq!(census.variance, 0.0);
        assert_abs_diff_eq!(census.mean, 0.4, epsilon = 1e-15);
        let two = conditional_moments_proportion::<f64>(2, 1, 1).unwrap();
        assert_eq!((two.mean, two.variance), (0.5, 0.25));
    }

    #[test]
    fn conditional_domain_errors() {
        assert!(conditional_moments_count::<f64>(1, 0, 1).is_err());
        assert!(conditional_moments_count::<f64>(10, 11, 5).is_err());
        assert!(conditional_moments_count::<f64>(10, 4, 0).is_err());
        assert!(conditional_moments_count::<f64>(10, 4, 11).is_err());
    }

    #[test]
    fn unconditional() {
        let zero = unconditional_moments_proportion(5, 0.0).unwrap();
        assert_eq!((zero.mean, zero.variance), (0.0, 0.0));
        let m = unconditional_moments_proportion(5, Q::new(3, 10)).unwrap();
        assert_eq!((m.mean, m.variance), (Q::new(3, 10), Q::new(21, 500)));
        // Exact sum over the six Binomial(5, 0.3) outcomes.
        let p = Q::new(3, 10);
        let mean: Q = (0..=5).map(|y| binom_pmf_exact(5, p, y) * Q::new(y as i128, 5)).sum();
        let var: Q = (0..=5)
            .map(|y| binom_pmf_exact(5, p, y) * (Q::new(y as i128, 5) - p) * (Q::new(y as i128, 5) - p))
            .sum();
        assert_eq!((mean, var), (m.mean, m.variance));
        let one = unconditional_moments_proportion(1, 0.5).unwrap();
        assert_eq!((one.mean, one.variance), (0.5, 0.25));
        assert!(unconditional_moments_proportion(0, 0.5).is_err());
        assert!(unconditional_moments_proportion(3, 1.5).is_err());
    }

    #[test]
    fn estimators_on_penny_data() {
        let s = SampleSummary::new(200, 83).unwrap();
        assert_abs_diff_eq!(var_estimate_biased::<f64>(&s), 0.001213875, epsilon = 1e-15);
        assert_abs_diff_eq!(
            var_estimate_unbiased::<f64>(&s).unwrap(),
            0.00121997487437186,
            epsilon = 1e-15
        );
        let zero = SampleSummary::new(10, 0).unwrap();
        assert_eq!(var_estimate_biased::<f64>(&zero), 0.0);
        let two = SampleSummary::new(2, 1).unwrap();
        assert_eq!(var_estimate_unbiased::<f64>(&two).unwrap(), 0.25);
        let one = SampleSummary::new(1, 1).unwrap();
        assert_eq!(var_estimate_biased::<f64>(&one), 0.0);
        assert!(var_estimate_unbiased::<f64>(&one).is_err());
    }

    #[test]
    fn estimator_expectations_exact() {
        let p = Q::new(3, 10);
        let expect = |f: &dyn Fn(&SampleSummary) -> Q| -> Q {
            (0..=5)
                .map(|y| binom_pmf_exact(5, p, y) * f(&SampleSummary::new(5, y).unwrap()))
                .sum()
        };
        assert_eq!(expect(&|s| var_estimate_biased(s)), Q::new(21, 625));
        assert_eq!(expect(&|s| var_estimate_unbiased(s).unwrap()), Q::new(21, 500));
    }

    #[test]
    fn summary_validation_and_complement() {
        assert!(SampleSummary::new(0, 0).is_err());
        assert!(SampleSummary::new(10, 11).is_err());
        let s = SampleSummary::new(4, 1).unwrap();
        let rest = s.complement(10, 3).unwrap();
        assert_eq!((rest.n(), rest.y()), (6, 2));
        assert!(s.complement(10, 0).is_err());
        assert!(s.complement(10, 8).is_err());
        assert!(s.complement(4, 1).is_err());
    }
}
