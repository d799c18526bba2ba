//! Prediction intervals for statistics of the representative sample: its
//! success proportion `p̂_N` and its mean `X̄_N`.
//!
//! Each interval is the matching confidence interval for the process
//! parameter shrunk by the finite population correction `√((N − n)/N)`, and
//! collapses to a point at a census (`n = N`).

use serde::{Deserialize, Serialize};

use crate::error::{check_alpha, domain, Error, Result};
use crate::estimation::{critical_value, small_sample, symmetric_proportion_interval};
use crate::interval::{Interval, IntervalKind, Target};
use crate::{Real, SampleSummary};

/// Residual negative discriminants down to this size are rounding noise.
const DISCRIMINANT_FLOOR: f64 = -1e-14;

/// Summary of a continuous researcher's sample. `sd` uses the `n − 1` divisor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanSummary<T> {
    n: u64,
    mean: T,
    sd: T,
}

impl<T: Real> MeanSummary<T> {
    pub fn new(n: u64, mean: T, sd: T) -> Result<Self> {
        if n < 2 {
            return domain(format!("mean summary needs n >= 2, got n = {n}"));
        }
        if !mean.is_finite() {
            return domain("sample mean must be finite");
        }
        if !sd.is_finite() || sd < T::zero() {
            return domain(format!("sample standard deviation must be finite and >= 0, got {sd:?}"));
        }
        Ok(MeanSummary { n, mean, sd })
    }

    pub fn from_values(values: &[T]) -> Result<Self> {
        let n = values.len() as u64;
        if n < 2 {
            return domain(format!("mean summary needs n >= 2, got n = {n}"));
        }
        let count = T::from_count(n);
        let mean = values.iter().fold(T::zero(), |a, &x| a + x) / count;
        let ss = values.iter().fold(T::zero(), |a, &x| a + (x - mean) * (x - mean));
        MeanSummary::new(n, mean, (ss / (count - T::one())).sqrt())
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> T {
        self.mean
    }

    pub fn sd(&self) -> T {
        self.sd
    }
}

fn check_sizes(n: u64, big_n: u64) -> Result<()> {
    if n > big_n {
        return domain(format!("sample size n = {n} must satisfy n <= N = {big_n}"));
    }
    Ok(())
}

/// `√(1 − n/N)`, exactly zero at a census.
pub fn fpc_factor<T: Real>(n: u64, big_n: u64) -> Result<T> {
    check_sizes(n, big_n)?;
    if big_n == 0 {
        return domain("population size N must be at least 1");
    }
    Ok((T::from_count(big_n - n) / T::from_count(big_n)).sqrt())
}

/// `p̂_n ± z √(1 − n/N) √(p̂_n (1 − p̂_n) / n)`, clamped to `[0, 1]`.
pub fn wald_fpc_pi<T: Real>(summary: &SampleSummary, big_n: u64, alpha: T) -> Result<Interval<T>> {
    let fpc: T = fpc_factor(summary.n(), big_n)?;
    let z = critical_value(alpha)?;
    let p: T = summary.p_hat();
    let se = (p * (T::one() - p) / T::from_count(summary.n())).sqrt();
    Ok(symmetric_proportion_interval(
        summary,
        p,
        z * fpc * se,
        alpha,
        IntervalKind::Prediction,
        Target::StatisticPN,
    ))
}

/// N-free prediction interval: the Wald endpoints without the correction,
/// which can only widen the interval since `√(1 − n/N) < 1`.
pub fn conservative_pi<T: Real>(summary: &SampleSummary, alpha: T) -> Result<Interval<T>> {
    let z = critical_value(alpha)?;
    let p: T = summary.p_hat();
    let se = (p * (T::one() - p) / T::from_count(summary.n())).sqrt();
    Ok(symmetric_proportion_interval(
        summary,
        p,
        z * se,
        alpha,
        IntervalKind::Prediction,
        Target::StatisticPN,
    ))
}

/// Roots of `(1 + c) q² − (2p̂ + c) q + p̂² = 0`, i.e. the set of `q` with
/// `(p̂ − q)² ≤ c q (1 − q)`.
///
/// The discriminant is evaluated as `c (c + 4 p̂ (1 − p̂))`. The root nearer
/// the boundary comes from the product of roots, working on the side of ½
/// where that root is small, so `p̂ ∈ {0, 1}` yields exact boundary roots.
fn quadratic_roots<T: Real>(p_hat: T, c: T) -> (T, T) {
    if c == T::zero() {
        return (p_hat, p_hat);
    }
    let half = T::lit(0.5);
    let mirrored = p_hat > half;
    let p = if mirrored { T::one() - p_hat } else { p_hat };
    let mut disc = c * (c + T::lit(4.0) * p * (T::one() - p));
    if disc < T::zero() {
        debug_assert!(disc >= T::lit(DISCRIMINANT_FLOOR));
        disc = T::zero();
    }
    let lead = T::one() + c;
    let upper = (T::lit(2.0) * p + c + disc.sqrt()) / (T::lit(2.0) * lead);
    let lower = p * p / (lead * upper);
    let (lower, upper) = if mirrored {
        (T::one() - upper, T::one() - lower)
    } else {
        (lower, upper)
    };
    (lower.min(p_hat).max(T::zero()), upper.max(p_hat).min(T::one()))
}

fn quadratic_interval<T: Real>(summary: &SampleSummary, c: T, alpha: T) -> Interval<T> {
    let (lower, upper) = quadratic_roots(summary.p_hat(), c);
    let mut iv = Interval::new(lower, upper, alpha, IntervalKind::Prediction, Target::StatisticPN);
    iv.small_sample = small_sample(summary);
    iv
}

/// Prediction interval from inverting the standardized statistic that uses
/// `p̂_N (1 − p̂_N)` in its scale, with `c = z² (N − n)/(nN)`.
pub fn quadratic_pi<T: Real>(summary: &SampleSummary, big_n: u64, alpha: T) -> Result<Interval<T>> {
    check_sizes(summary.n(), big_n)?;
    let z = critical_value(alpha)?;
    let c = z * z * T::from_count(big_n - summary.n()) / T::from_count(summary.n()) / T::from_count(big_n);
    Ok(quadratic_interval(summary, c, alpha))
}

/// [`quadratic_pi`] with `(N − n)/(nN)` replaced by its upper bound `1/n`.
pub fn quadratic_pi_nfree<T: Real>(summary: &SampleSummary, alpha: T) -> Result<Interval<T>> {
    let z = critical_value(alpha)?;
    let c = z * z / T::from_count(summary.n());
    Ok(quadratic_interval(summary, c, alpha))
}

/// `X̄_n ± z √((N − n)/N) S_n / √n` for the representative-sample mean.
/// Not clamped: the measurement scale is unbounded.
pub fn mean_pi<T: Real>(summary: &MeanSummary<T>, big_n: u64, alpha: T) -> Result<Interval<T>> {
    check_alpha(alpha)?;
    let fpc: T = fpc_factor(summary.n, big_n)?;
    let z = critical_value(alpha)?;
    let half = z * fpc * summary.sd / T::from_count(summary.n).sqrt();
    let mut iv = Interval::new(
        summary.mean - half,
        summary.mean + half,
        alpha,
        IntervalKind::Prediction,
        Target::StatisticMeanN,
    );
    iv.degenerate = summary.sd == T::zero();
    Ok(iv)
}

/// Which variance enters the scale of the standardized statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale<T> {
    /// `p (1 − p)` with the true process rate.
    TrueP(T),
    /// `p̂_n (1 − p̂_n)` from the researcher's sample.
    PlugInSample,
    /// `p̂_N (1 − p̂_N)` from the representative sample.
    PlugInRepresentative,
}

impl<T> Scale<T> {
    pub fn id(&self) -> &'static str {
        match self {
            Scale::TrueP(_) => "true-p",
            Scale::PlugInSample => "plug-in-n",
            Scale::PlugInRepresentative => "plug-in-N",
        }
    }
}

/// `(p̂_n − p̂_N) / (√((N − n)/N) √(v / n))` with `v` chosen by `scale`.
pub fn standardized_stat<T: Real>(p_hat_n: T, p_hat_big: T, n: u64, big_n: u64, scale: Scale<T>) -> Result<T> {
    if n == 0 || n >= big_n {
        return domain(format!("standardized statistic needs 1 <= n < N, got n = {n}, N = {big_n}"));
    }
    let v = match scale {
        Scale::TrueP(p) => p * (T::one() - p),
        Scale::PlugInSample => p_hat_n * (T::one() - p_hat_n),
        Scale::PlugInRepresentative => p_hat_big * (T::one() - p_hat_big),
    };
    if v.is_nan() || v <= T::zero() {
        return Err(Error::Degenerate(format!(
            "{} scale has zero variance",
            scale.id()
        )));
    }
    let fpc: T = fpc_factor(n, big_n)?;
    Ok((p_hat_n - p_hat_big) / (fpc * (v / T::from_count(n)).sqrt()))
}
