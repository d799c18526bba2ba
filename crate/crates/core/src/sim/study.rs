use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::config::{ProcessSpec, StudyConfig};
use super::runner::fold_replicates;
use crate::dist::{sample_binomial, sample_hypergeometric, sample_srs, StreamRng};
use crate::error::{Error, Result};
use crate::interval::proportion_interval;
use crate::prediction::mean_pi;
use crate::{Interval, IntervalKind, MeanSummary, Method, SampleSummary, Target};

/// Coverage bookkeeping for one method in one study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodCoverage {
    pub method: Method,
    pub kind: IntervalKind,
    pub target: Target,
    pub nominal_level: f64,
    pub coverage: f64,
    /// `√(c (1 − c) / R)`; zero for exact computations.
    pub coverage_se: f64,
    pub mean_width: f64,
    pub replicates_used: u64,
    /// Replicates whose interval had a vanishing variance estimate.
    pub degenerate_count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub config: StudyConfig,
    pub methods: Vec<MethodCoverage>,
    /// Bernoulli studies only: replicates in which the realised `p̂_N`
    /// differs from `p`, i.e. where the confidence and prediction targets
    /// are distinct numbers.
    pub target_split_count: u64,
}

impl CoverageReport {
    pub fn get(&self, method: Method) -> Option<&MethodCoverage> {
        self.methods.iter().find(|m| m.method == method)
    }
}

#[derive(Debug, Clone, Default)]
struct Tally {
    hits: u64,
    width_sum: f64,
    degenerate: u64,
}

#[derive(Debug, Clone)]
struct Acc {
    tallies: Vec<Tally>,
    target_split: u64,
}

impl Acc {
    fn new(methods: usize) -> Self {
        Acc {
            tallies: vec![Tally::default(); methods],
            target_split: 0,
        }
    }

    fn record(&mut self, slot: usize, iv: &Interval<f64>, target: f64) {
        let t = &mut self.tallies[slot];
        t.hits += u64::from(iv.contains(target));
        t.width_sum += iv.width();
        t.degenerate += u64::from(iv.degenerate);
    }

    fn merge(mut self, other: Acc) -> Acc {
        for (a, b) in self.tallies.iter_mut().zip(other.tallies) {
            a.hits += b.hits;
            a.width_sum += b.width_sum;
            a.degenerate += b.degenerate;
        }
        self.target_split += other.target_split;
        self
    }
}

/// Runs a Monte Carlo coverage study.
///
/// Replicate `r` draws from stream `r` of the configured seed: it generates a
/// representative sample of size `N`, takes a simple random sample of size
/// `n` from it, builds every configured interval and checks it against its
/// own target (`p` for confidence intervals, the realised `p̂_N` or `X̄_N`
/// for prediction intervals).
pub fn simulate_study(config: &StudyConfig) -> Result<CoverageReport> {
    config.validate()?;
    let acc = match config.process {
        ProcessSpec::Bernoulli { p } => run_bernoulli(config, p)?,
        ProcessSpec::Normal { mu, sigma } => run_normal(config, mu, sigma)?,
    };
    let r = config.replicates as f64;
    let methods = config
        .methods
        .iter()
        .zip(acc.tallies)
        .map(|(&method, t)| {
            let coverage = t.hits as f64 / r;
            MethodCoverage {
                method,
                kind: method.kind(),
                target: method.target(),
                nominal_level: 1.0 - config.alpha,
                coverage,
                coverage_se: (coverage * (1.0 - coverage) / r).sqrt(),
                mean_width: t.width_sum / r,
                replicates_used: config.replicates,
                degenerate_count: t.degenerate,
            }
        })
        .collect();
    Ok(CoverageReport {
        config: config.clone(),
        methods,
        target_split_count: acc.target_split,
    })
}

/// Repeats a study for each representative-sample size in `sizes`.
pub fn simulate_over_sizes(config: &StudyConfig, sizes: &[u64]) -> Result<Vec<CoverageReport>> {
    sizes
        .iter()
        .map(|&big_n| {
            simulate_study(&StudyConfig {
                population_size: big_n,
                ..config.clone()
            })
        })
        .collect()
}

/// Intervals depend on the data only through `y`, so they are tabulated once.
fn interval_table(config: &StudyConfig) -> Result<Vec<Vec<Interval<f64>>>> {
    let (big_n, n) = (config.population_size, config.sample_size);
    config
        .methods
        .iter()
        .map(|&m| {
            (0..=n)
                .map(|y| {
                    let summary = SampleSummary::new(n, y)?;
                    let iv = proportion_interval(m, &summary, Some(big_n), config.alpha)?;
                    Ok(if config.snap_to_grid && m.kind() == IntervalKind::Prediction {
                        iv.snapped_to_grid(big_n)
                    } else {
                        iv
                    })
                })
                .collect()
        })
        .collect()
}

fn run_bernoulli(config: &StudyConfig, p: f64) -> Result<Acc> {
    let table = interval_table(config)?;
    let (big_n, n) = (config.population_size, config.sample_size);
    let targets: Vec<Target> = config.methods.iter().map(|m| m.target()).collect();
    fold_replicates(
        config.replicates,
        || Acc::new(config.methods.len()),
        |acc, r| {
            let mut rng = StreamRng::new(config.seed, r);
            let y_big = sample_binomial(&mut rng, big_n, p)?;
            let y = sample_hypergeometric(&mut rng, big_n, y_big, n)?;
            let p_hat_big = y_big as f64 / big_n as f64;
            acc.target_split += u64::from(p_hat_big != p);
            for (slot, ivs) in table.iter().enumerate() {
                let target = match targets[slot] {
                    Target::ParameterP => p,
                    _ => p_hat_big,
                };
                acc.record(slot, &ivs[y as usize], target);
            }
            Ok(())
        },
        Acc::merge,
    )
}

fn run_normal(config: &StudyConfig, mu: f64, sigma: f64) -> Result<Acc> {
    let (big_n, n) = (config.population_size, config.sample_size);
    let law = Normal::new(mu, sigma).map_err(|e| Error::Domain(e.to_string()))?;
    fold_replicates(
        config.replicates,
        || Acc::new(config.methods.len()),
        |acc, r| {
            let mut rng = StreamRng::new(config.seed, r);
            let population: Vec<f64> = (0..big_n).map(|_| law.sample(&mut rng)).collect();
            let picked: Vec<f64> = sample_srs(&mut rng, big_n as usize, n as usize)?
                .into_iter()
                .map(|i| population[i])
                .collect();
            // Same summation order as the sample mean, so a census matches exactly.
            let mean_big = population.iter().fold(0.0, |a, &x| a + x) / big_n as f64;
            let summary = MeanSummary::from_values(&picked)?;
            let iv = mean_pi(&summary, big_n, config.alpha)?;
            for slot in 0..config.methods.len() {
                acc.record(slot, &iv, mean_big);
            }
            Ok(())
        },
        Acc::merge,
    )
}
