use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::Method;

/// The generating process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProcessSpec {
    Bernoulli { p: f64 },
    Normal { mu: f64, sigma: f64 },
}

impl ProcessSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ProcessSpec::Bernoulli { p } if !(0.0..=1.0).contains(&p) => {
                domain(format!("bernoulli rate p must lie in [0, 1], got {p}"))
            }
            ProcessSpec::Normal { mu, .. } if !mu.is_finite() => domain("normal mean must be finite"),
            ProcessSpec::Normal { sigma, .. } if !(sigma > 0.0 && sigma.is_finite()) => {
                domain(format!("normal sigma must be positive, got {sigma}"))
            }
            _ => Ok(()),
        }
    }

    pub fn bernoulli_rate(&self) -> Option<f64> {
        match *self {
            ProcessSpec::Bernoulli { p } => Some(p),
            ProcessSpec::Normal { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub process: ProcessSpec,
    /// Size `N` of the representative sample.
    pub population_size: u64,
    /// Size `n` of the researcher's sample.
    pub sample_size: u64,
    pub alpha: f64,
    pub replicates: u64,
    pub seed: u64,
    pub methods: Vec<Method>,
    /// Round prediction-interval endpoints outward to multiples of `1/N`.
    pub snap_to_grid: bool,
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        self.process.validate()?;
        let (big_n, n) = (self.population_size, self.sample_size);
        if n == 0 || n > big_n {
            return domain(format!("sizes must satisfy 1 <= n <= N, got n = {n}, N = {big_n}"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return domain(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if self.replicates == 0 {
            return domain("replicates must be at least 1");
        }
        if self.methods.is_empty() {
            return domain("at least one method is required");
        }
        for &m in &self.methods {
            let fits = match self.process {
                ProcessSpec::Bernoulli { .. } => m != Method::Mean,
                ProcessSpec::Normal { .. } => m == Method::Mean,
            };
            if !fits {
                let context = match self.process {
                    ProcessSpec::Bernoulli { .. } => "a bernoulli process",
                    ProcessSpec::Normal { .. } => "a normal process",
                };
                return Err(Error::UnsupportedMethod {
                    method: m.id().to_string(),
                    context: context.to_string(),
                });
            }
        }
        if self.methods.contains(&Method::Mean) && n < 2 {
            return domain("the mean prediction interval needs n >= 2");
        }
        Ok(())
    }
}
