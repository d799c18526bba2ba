use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::{estimation, prediction, Real, SampleSummary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalKind {
    Confidence,
    Prediction,
}

/// What an interval is meant to cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// The process rate `p`.
    ParameterP,
    /// The representative-sample proportion `p̂_N`.
    StatisticPN,
    /// The representative-sample mean `X̄_N`.
    StatisticMeanN,
}

impl IntervalKind {
    pub fn as_str(self) -> &'static str {
        match self {
            IntervalKind::Confidence => "confidence",
            IntervalKind::Prediction => "prediction",
        }
    }
}

impl Target {
    pub fn as_str(self) -> &'static str {
        match self {
            Target::ParameterP => "parameter_p",
            Target::StatisticPN => "statistic_pN",
            Target::StatisticMeanN => "statistic_meanN",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    pub lower: T,
    pub upper: T,
    /// Nominal level `1 − α`.
    pub level: T,
    pub kind: IntervalKind,
    pub target: Target,
    /// A variance estimate vanished because `p̂ ∈ {0, 1}`.
    pub degenerate: bool,
    /// `n p̂ < 5` or `n (1 − p̂) < 5` for a normal-approximation interval.
    pub small_sample: bool,
}

impl<T: Real> Interval<T> {
    pub(crate) fn new(lower: T, upper: T, alpha: T, kind: IntervalKind, target: Target) -> Self {
        debug_assert!(lower <= upper, "interval endpoints out of order");
        Interval {
            lower,
            upper,
            level: T::one() - alpha,
            kind,
            target,
            degenerate: false,
            small_sample: false,
        }
    }

    pub(crate) fn clamp_unit(mut self) -> Self {
        self.lower = self.lower.max(T::zero()).min(T::one());
        self.upper = self.upper.max(T::zero()).min(T::one());
        self
    }

    pub fn width(&self) -> T {
        self.upper - self.lower
    }

    pub fn midpoint(&self) -> T {
        (self.lower + self.upper) / T::lit(2.0)
    }

    /// Closed-interval membership.
    pub fn contains(&self, x: T) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn contains_interval(&self, other: &Interval<T>) -> bool {
        self.lower <= other.lower && other.upper <= self.upper
    }

    /// Rounds the endpoints outward to the lattice `{0, 1/N, …, 1}` on which a
    /// representative-sample proportion lives.
    pub fn snapped_to_grid(mut self, big_n: u64) -> Self {
        let grid = T::from_count(big_n);
        // Endpoints already on the lattice up to rounding stay put.
        let slack = T::lit(1e-9);
        self.lower = ((self.lower * grid + slack).floor() / grid).max(T::zero());
        self.upper = ((self.upper * grid - slack).ceil() / grid).min(T::one());
        self
    }
}

/// Interval constructions available to the CLI and the coverage harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    Wald,
    Wilson,
    ClopperPearson,
    WaldFpc,
    Conservative,
    Quadratic,
    QuadraticNFree,
    Mean,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::Wald,
        Method::Wilson,
        Method::ClopperPearson,
        Method::WaldFpc,
        Method::Conservative,
        Method::Quadratic,
        Method::QuadraticNFree,
        Method::Mean,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Method::Wald => "wald",
            Method::Wilson => "wilson",
            Method::ClopperPearson => "clopper-pearson",
            Method::WaldFpc => "wald-fpc",
            Method::Conservative => "conservative",
            Method::Quadratic => "quadratic",
            Method::QuadraticNFree => "quadratic-nfree",
            Method::Mean => "mean",
        }
    }

    pub fn kind(self) -> IntervalKind {
        match self {
            Method::Wald | Method::Wilson | Method::ClopperPearson => IntervalKind::Confidence,
            _ => IntervalKind::Prediction,
        }
    }

    pub fn target(self) -> Target {
        match self {
            Method::Wald | Method::Wilson | Method::ClopperPearson => Target::ParameterP,
            Method::Mean => Target::StatisticMeanN,
            _ => Target::StatisticPN,
        }
    }

    /// Whether the construction needs the representative-sample size `N`.
    pub fn needs_population_size(self) -> bool {
        matches!(self, Method::WaldFpc | Method::Quadratic | Method::Mean)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.id() == s)
            .ok_or_else(|| Error::UnknownMethod(s.to_string()))
    }
}

/// Computes the interval `method` produces for binary data.
///
/// `big_n` is required by the methods that use the representative-sample size
/// and ignored by the others.
pub fn proportion_interval<T: Real>(
    method: Method,
    summary: &SampleSummary,
    big_n: Option<u64>,
    alpha: T,
) -> Result<Interval<T>> {
    let population = || match big_n {
        Some(v) => Ok(v),
        None => domain(format!("method `{method}` requires the population size N")),
    };
    match method {
        Method::Wald => estimation::wald_ci(summary, alpha),
        Method::Wilson => estimation::wilson_ci(summary, alpha),
        Method::ClopperPearson => estimation::clopper_pearson_ci(summary, alpha),
        Method::WaldFpc => prediction::wald_fpc_pi(summary, population()?, alpha),
        Method::Conservative => prediction::conservative_pi(summary, alpha),
        Method::Quadratic => prediction::quadratic_pi(summary, population()?, alpha),
        Method::QuadraticNFree => prediction::quadratic_pi_nfree(summary, alpha),
        Method::Mean => Err(Error::UnsupportedMethod {
            method: method.id().to_string(),
            context: "binary data".to_string(),
        }),
    }
}
