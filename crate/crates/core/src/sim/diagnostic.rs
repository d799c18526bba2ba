use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::config::StudyConfig;
use super::runner::fold_replicates;
use crate::dist::{norm_cdf, sample_binomial, sample_hypergeometric, StreamRng};
use crate::error::{domain, Error, Result};
use crate::prediction::{standardized_stat, Scale};

/// Variance used in the scale of the standardized statistic; the true-`p`
/// variant takes `p` from the study's process.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScaleKind {
    #[serde(rename = "true-p")]
    TrueP,
    #[serde(rename = "plug-in-n")]
    PlugInSample,
    #[serde(rename = "plug-in-N")]
    PlugInRepresentative,
}

impl ScaleKind {
    pub const ALL: [ScaleKind; 3] = [ScaleKind::TrueP, ScaleKind::PlugInSample, ScaleKind::PlugInRepresentative];

    pub fn with_rate(self, p: f64) -> Scale<f64> {
        match self {
            ScaleKind::TrueP => Scale::TrueP(p),
            ScaleKind::PlugInSample => Scale::PlugInSample,
            ScaleKind::PlugInRepresentative => Scale::PlugInRepresentative,
        }
    }

    pub fn id(self) -> &'static str {
        self.with_rate(0.5).id()
    }
}

impl fmt::Display for ScaleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ScaleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScaleKind::ALL
            .into_iter()
            .find(|k| k.id() == s)
            .ok_or_else(|| Error::Domain(format!("unknown scale `{s}` (expected true-p, plug-in-n or plug-in-N)")))
    }
}

/// Summary of simulated standardized statistics against `N(0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitDiagnostic {
    pub scale: ScaleKind,
    /// Kolmogorov–Smirnov distance `sup |F_R(x) − Φ(x)|`. Reported as a
    /// distance only: the statistic lives on a lattice, so the usual KS
    /// p-values do not apply.
    pub ks_stat: f64,
    /// Sample mean of the usable replicates (NaN when there are none).
    pub mean: f64,
    /// Sample variance with divisor `m − 1` (NaN when fewer than two).
    pub variance: f64,
    pub used: u64,
    /// Replicates whose scale variance was zero.
    pub excluded: u64,
}

/// `sup_x |F_m(x) − Φ(x)|` for the empirical distribution of `values`.
pub fn ks_distance_to_normal(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 1.0;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = norm_cdf(x);
            ((i + 1) as f64 / m - f).max(f - i as f64 / m)
        })
        .fold(0.0, f64::max)
}

/// Simulates the standardized difference `p̂_n − p̂_N` over the configured
/// replicates and compares it with the standard normal.
pub fn limit_diagnostic(config: &StudyConfig, scale: ScaleKind) -> Result<LimitDiagnostic> {
    config.process.validate()?;
    let p = match config.process.bernoulli_rate() {
        Some(p) => p,
        None => return domain("the limit diagnostic needs a bernoulli process"),
    };
    let (big_n, n) = (config.population_size, config.sample_size);
    if n == 0 || n >= big_n {
        return domain(format!("the limit diagnostic needs 1 <= n < N, got n = {n}, N = {big_n}"));
    }
    if config.replicates == 0 {
        return domain("replicates must be at least 1");
    }
    let scale_value = scale.with_rate(p);
    let (values, excluded) = fold_replicates(
        config.replicates,
        || (Vec::new(), 0u64),
        |(values, excluded), r| {
            let mut rng = StreamRng::new(config.seed, r);
            let y_big = sample_binomial(&mut rng, big_n, p)?;
            let y = sample_hypergeometric(&mut rng, big_n, y_big, n)?;
            let p_hat_n = y as f64 / n as f64;
            let p_hat_big = y_big as f64 / big_n as f64;
            match standardized_stat(p_hat_n, p_hat_big, n, big_n, scale_value) {
                Ok(v) => values.push(v),
                Err(Error::Degenerate(_)) => *excluded += 1,
                Err(e) => return Err(e),
            }
            Ok(())
        },
        |(mut a, ea), (b, eb)| {
            a.extend(b);
            (a, ea + eb)
        },
    )?;
    let m = values.len() as f64;
    let mean = if values.is_empty() {
        f64::NAN
    } else {
        values.iter().sum::<f64>() / m
    };
    let variance = if values.len() < 2 {
        f64::NAN
    } else {
        values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (m - 1.0)
    };
    Ok(LimitDiagnostic {
        scale,
        ks_stat: ks_distance_to_normal(&values),
        mean,
        variance,
        used: values.len() as u64,
        excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::ProcessSpec;
    use crate::Method;

    fn config(p: f64, big_n: u64, n: u64, replicates: u64) -> StudyConfig {
        StudyConfig {
            process: ProcessSpec::Bernoulli { p },
            population_size: big_n,
            sample_size: n,
            alpha: 0.05,
            replicates,
            seed: 3,
            methods: vec![Method::WaldFpc],
            snap_to_grid: false,
        }
    }

    #[test]
    fn ks_distance_basics() {
        assert_eq!(ks_distance_to_normal(&[]), 1.0);
        // A single point at 0 leaves a jump of one half either side.
        assert!((ks_distance_to_normal(&[0.0]) - 0.5).abs() < 1e-15);
        // Ties collapse into one jump.
        let tied = ks_distance_to_normal(&[0.0, 0.0, 0.0, 0.0]);
        assert!((tied - 0.5).abs() < 1e-15);
        let grid: Vec<f64> = (1..1000)
            .map(|i| crate::dist::norm_quantile(i as f64 / 1000.0).unwrap())
            .collect();
        assert!(ks_distance_to_normal(&grid) < 1.1e-3);
    }

    #[test]
    fn tiny_sizes_do_not_crash() {
        for scale in ScaleKind::ALL {
            let d = limit_diagnostic(&config(0.3, 4, 3, 200), scale).unwrap();
            assert_eq!(d.used + d.excluded, 200);
            assert!(d.ks_stat > 0.1);
        }
        let d = limit_diagnostic(&config(0.3, 4, 3, 200), ScaleKind::PlugInSample).unwrap();
        assert!(d.excluded > 0);
    }

    #[test]
    fn all_excluded_reports_nan_moments() {
        let d = limit_diagnostic(&config(0.0, 10, 5, 50), ScaleKind::PlugInRepresentative).unwrap();
        assert_eq!((d.used, d.excluded), (0, 50));
        assert!(d.mean.is_nan() && d.variance.is_nan());
        assert_eq!(d.ks_stat, 1.0);
    }

    #[test]
    fn rejects_census_and_normal_process() {
        assert!(limit_diagnostic(&config(0.3, 100, 100, 10), ScaleKind::TrueP).is_err());
        let mut c = config(0.3, 100, 10, 10);
        c.process = ProcessSpec::Normal { mu: 0.0, sigma: 1.0 };
        assert!(limit_diagnostic(&c, ScaleKind::TrueP).is_err());
    }

    #[test]
    fn scale_ids_parse() {
        for k in ScaleKind::ALL {
            assert_eq!(k.id().parse::<ScaleKind>().unwrap(), k);
        }
        assert!("plugin".parse::<ScaleKind>().is_err());
    }
}
