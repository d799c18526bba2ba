use predint::sim::{exact_pi_coverage, simulate_study, ProcessSpec, StudyConfig};
use predint::Method;

const PI_METHODS: [Method; 4] = [Method::WaldFpc, Method::Conservative, Method::Quadratic, Method::QuadraticNFree];

#[test]
fn monte_carlo_agrees_with_exact_sum() {
    let cfg = StudyConfig {
        process: ProcessSpec::Bernoulli { p: 0.4 },
        population_size: 200,
        sample_size: 100,
        alpha: 0.05,
        replicates: 100_000,
        seed: 5,
        methods: PI_METHODS.to_vec(),
        snap_to_grid: false,
    };
    let report = simulate_study(&cfg).unwrap();
    for m in &report.methods {
        let exact = exact_pi_coverage(m.method, 200, 100, 0.4, 0.05).unwrap();
        let band = 4.0 * (exact * (1.0 - exact) / cfg.replicates as f64).sqrt();
        assert!(
            (m.coverage - exact).abs() <= band,
            "{}: simulated {} exact {} band {}",
            m.method,
            m.coverage,
            exact,
            band
        );
    }
}

#[test]
fn conservative_interval_reaches_nominal() {
    let cfg = StudyConfig {
        process: ProcessSpec::Bernoulli { p: 0.5 },
        population_size: 400,
        sample_size: 200,
        alpha: 0.05,
        replicates: 100_000,
        seed: 11,
        methods: vec![Method::Conservative],
        snap_to_grid: false,
    };
    let report = simulate_study(&cfg).unwrap();
    assert!(report.methods[0].coverage >= 0.94, "{}", report.methods[0].coverage);
}

#[test]
fn conservative_dominates_in_every_exact_computation() {
    for big_n in [20u64, 75, 160] {
        for n in [1, big_n / 4, big_n / 2, big_n - 1, big_n] {
            for p in [0.05, 0.2, 0.5, 0.81] {
                let fpc = exact_pi_coverage(Method::WaldFpc, big_n, n, p, 0.05).unwrap();
                let cons = exact_pi_coverage(Method::Conservative, big_n, n, p, 0.05).unwrap();
                assert!(cons >= fpc - 1e-15, "N={big_n} n={n} p={p}");
                let quad = exact_pi_coverage(Method::Quadratic, big_n, n, p, 0.05).unwrap();
                let nfree = exact_pi_coverage(Method::QuadraticNFree, big_n, n, p, 0.05).unwrap();
                assert!(nfree >= quad - 1e-15, "N={big_n} n={n} p={p}");
            }
        }
    }
}
