//! Coverage studies over the process → representative sample → researcher's
//! sample hierarchy.
//!
//! Small problems are checked exactly by summing over the joint
//! Binomial × Hypergeometric law ([`exact_pi_coverage`], [`exact_ci_coverage`]);
//! larger ones by Monte Carlo ([`simulate_study`]). Monte Carlo results depend
//! only on the configuration and seed, never on the number of worker threads.

mod config;
mod diagnostic;
mod exact;
mod runner;
mod study;

pub use config::{ProcessSpec, StudyConfig};
pub use diagnostic::{ks_distance_to_normal, limit_diagnostic, LimitDiagnostic, ScaleKind};
pub use exact::{
    exact_ci_coverage, exact_coverage_record, exact_pi_coverage, exact_pi_coverage_snapped, marginal_check, EXACT_CI_MAX_N,
    EXACT_PI_MAX_N,
};
pub use runner::with_threads;
pub use study::{simulate_over_sizes, simulate_study, CoverageReport, MethodCoverage};
