mod output;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use predint::prediction::{fpc_factor, mean_pi};
use predint::sim::{
    exact_coverage_record, limit_diagnostic, simulate_study, with_threads, MethodCoverage, ProcessSpec, ScaleKind,
    StudyConfig, EXACT_CI_MAX_N, EXACT_PI_MAX_N,
};
use predint::{proportion_interval, Error, Interval, MeanSummary, Method, SampleSummary};

use output::{
    render_diagnostic, render_interval, render_rows, sig10_opt, DiagnosticRow, Format, IntervalRecord, Row,
};

/// Confidence and prediction intervals for proportions and means, with
/// coverage studies.
#[derive(Parser)]
#[command(name = "predint", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Confidence interval for the process rate p.
    Ci(CiArgs),
    /// Prediction interval for the proportion or mean of a larger sample of size N.
    Pi(PiArgs),
    /// Coverage study, by simulation or exact enumeration.
    Coverage(CoverageArgs),
    /// Normal-limit diagnostic for the standardized difference p̂_n − p̂_N.
    Diagnose(DiagnoseArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum CiMethod {
    Wald,
    Wilson,
    ClopperPearson,
}

#[derive(Clone, Copy, ValueEnum)]
enum PiMethod {
    WaldFpc,
    Conservative,
    Quadratic,
    QuadraticNfree,
    Mean,
}

#[derive(Clone, Copy, ValueEnum)]
enum AnyMethod {
    Wald,
    Wilson,
    ClopperPearson,
    WaldFpc,
    Conservative,
    Quadratic,
    QuadraticNfree,
    Mean,
}

impl From<CiMethod> for Method {
    fn from(m: CiMethod) -> Self {
        match m {
            CiMethod::Wald => Method::Wald,
            CiMethod::Wilson => Method::Wilson,
            CiMethod::ClopperPearson => Method::ClopperPearson,
        }
    }
}

impl From<PiMethod> for Method {
    fn from(m: PiMethod) -> Self {
        match m {
            PiMethod::WaldFpc => Method::WaldFpc,
            PiMethod::Conservative => Method::Conservative,
            PiMethod::Quadratic => Method::Quadratic,
            PiMethod::QuadraticNfree => Method::QuadraticNFree,
            PiMethod::Mean => Method::Mean,
        }
    }
}

impl From<AnyMethod> for Method {
    fn from(m: AnyMethod) -> Self {
        match m {
            AnyMethod::Wald => Method::Wald,
            AnyMethod::Wilson => Method::Wilson,
            AnyMethod::ClopperPearson => Method::ClopperPearson,
            AnyMethod::WaldFpc => Method::WaldFpc,
            AnyMethod::Conservative => Method::Conservative,
            AnyMethod::Quadratic => Method::Quadratic,
            AnyMethod::QuadraticNfree => Method::QuadraticNFree,
            AnyMethod::Mean => Method::Mean,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    MonteCarlo,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScaleArg {
    #[value(name = "true-p")]
    TrueP,
    #[value(name = "plug-in-n")]
    PlugInSample,
    #[value(name = "plug-in-N")]
    PlugInRepresentative,
}

impl From<ScaleArg> for ScaleKind {
    fn from(s: ScaleArg) -> Self {
        match s {
            ScaleArg::TrueP => ScaleKind::TrueP,
            ScaleArg::PlugInSample => ScaleKind::PlugInSample,
            ScaleArg::PlugInRepresentative => ScaleKind::PlugInRepresentative,
        }
    }
}

#[derive(Args)]
struct CiArgs {
    /// Sample size.
    #[arg(long)]
    n: u64,
    /// Number of successes in the sample.
    #[arg(long)]
    y: u64,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, value_enum)]
    method: CiMethod,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Args)]
struct PiArgs {
    /// Sample size.
    #[arg(long)]
    n: u64,
    /// Number of successes (proportion methods).
    #[arg(long)]
    y: Option<u64>,
    /// Sample mean (mean method).
    #[arg(long)]
    mean: Option<f64>,
    /// Sample standard deviation, divisor n − 1 (mean method).
    #[arg(long)]
    sd: Option<f64>,
    /// Size of the representative sample; required by wald-fpc, quadratic
    /// and mean, rejected by conservative and quadratic-nfree.
    #[arg(long = "N", value_name = "N")]
    big_n: Option<u64>,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, value_enum)]
    method: PiMethod,
    /// Round endpoints outward to multiples of 1/N.
    #[arg(long)]
    snap: bool,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Args)]
struct CoverageArgs {
    #[arg(long, value_enum, default_value = "monte-carlo")]
    mode: Mode,
    /// Size of the representative sample.
    #[arg(long = "N", value_name = "N")]
    big_n: u64,
    /// Sample size.
    #[arg(long)]
    n: u64,
    /// Bernoulli process rate.
    #[arg(long, conflicts_with_all = ["mu", "sigma"])]
    p: Option<f64>,
    /// Normal process mean.
    #[arg(long, requires = "sigma")]
    mu: Option<f64>,
    /// Normal process standard deviation.
    #[arg(long, requires = "mu")]
    sigma: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Comma-separated method ids.
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    methods: Vec<AnyMethod>,
    #[arg(long, default_value_t = 10_000)]
    replicates: u64,
    #[arg(long)]
    seed: Option<u64>,
    /// Round prediction-interval endpoints outward to multiples of 1/N.
    #[arg(long)]
    snap: bool,
    /// Worker threads for the simulation; results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Args)]
struct DiagnoseArgs {
    #[arg(long)]
    p: f64,
    #[arg(long = "N", value_name = "N")]
    big_n: u64,
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 10_000)]
    replicates: u64,
    #[arg(long, value_enum, default_value = "true-p")]
    scale: ScaleArg,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

/// Failure mapped to a process exit status.
enum Failure {
    Invalid(String),
    Limit(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceLimit(_) => Failure::Limit(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type CmdResult = Result<(), Failure>;

fn invalid(msg: impl Into<String>) -> CmdResult {
    Err(Failure::Invalid(msg.into()))
}

fn seed_or_default(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        eprintln!("note: no --seed given, using seed 0");
        0
    })
}

fn run_pooled<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R, Failure> {
    match threads {
        Some(0) => Err(Failure::Invalid("--threads must be at least 1".into())),
        Some(k) => Ok(with_threads(k, f)?),
        None => Ok(f()),
    }
}

fn interval_record(method: Method, iv: &Interval<f64>, fpc: Option<f64>) -> IntervalRecord {
    IntervalRecord {
        row: Row {
            method: method.id().into(),
            target: iv.target.as_str().into(),
            kind: iv.kind.as_str().into(),
            lower: Some(iv.lower),
            upper: Some(iv.upper),
            level: iv.level,
            width: iv.width(),
            coverage: None,
            coverage_se: None,
            replicates: None,
            degenerate_count: Some(iv.degenerate as u64),
            seed: None,
        }
        .rounded(),
        degenerate: iv.degenerate,
        small_sample: iv.small_sample,
        fpc_factor: sig10_opt(fpc),
    }
}

fn coverage_row(m: &MethodCoverage, replicates: Option<u64>, seed: Option<u64>) -> Row {
    Row {
        method: m.method.id().into(),
        target: m.target.as_str().into(),
        kind: m.kind.as_str().into(),
        lower: None,
        upper: None,
        level: m.nominal_level,
        width: m.mean_width,
        coverage: Some(m.coverage),
        coverage_se: Some(m.coverage_se),
        replicates,
        degenerate_count: replicates.map(|_| m.degenerate_count),
        seed,
    }
    .rounded()
}

fn cmd_ci(a: CiArgs, out: &mut impl Write) -> CmdResult {
    let method = Method::from(a.method);
    let summary = SampleSummary::new(a.n, a.y)?;
    let iv = proportion_interval(method, &summary, None, a.alpha)?;
    render_interval(out, &interval_record(method, &iv, None), a.format)?;
    Ok(())
}

fn cmd_pi(a: PiArgs, out: &mut impl Write) -> CmdResult {
    let method = Method::from(a.method);
    let big_n = match (method.needs_population_size(), a.big_n) {
        (true, None) => return invalid(format!("method {method} requires --N")),
        (false, Some(_)) => return invalid(format!("method {method} does not use --N; drop it")),
        (_, n) => n,
    };
    if a.snap && big_n.is_none() {
        return invalid("--snap needs --N, which this method does not take");
    }
    if let Some(big_n) = big_n {
        if a.n > big_n {
            return invalid(format!("sizes must satisfy n <= N, got n = {}, N = {big_n}", a.n));
        }
    }
    let iv = if method == Method::Mean {
        if a.y.is_some() {
            return invalid("method mean takes --mean and --sd, not --y");
        }
        let (Some(mean), Some(sd)) = (a.mean, a.sd) else {
            return invalid("method mean requires --mean and --sd");
        };
        let iv = mean_pi(&MeanSummary::new(a.n, mean, sd)?, big_n.expect("checked above"), a.alpha)?;
        if a.snap {
            return invalid("--snap applies to proportion methods only");
        }
        iv
    } else {
        if a.mean.is_some() || a.sd.is_some() {
            return invalid(format!("method {method} takes --y, not --mean/--sd"));
        }
        let Some(y) = a.y else {
            return invalid(format!("method {method} requires --y"));
        };
        let iv = proportion_interval(method, &SampleSummary::new(a.n, y)?, big_n, a.alpha)?;
        match big_n {
            Some(big_n) if a.snap => iv.snapped_to_grid(big_n),
            _ => iv,
        }
    };
    let fpc = big_n.map(|big_n| fpc_factor::<f64>(a.n, big_n)).transpose()?;
    render_interval(out, &interval_record(method, &iv, fpc), a.format)?;
    Ok(())
}

fn cmd_coverage(a: CoverageArgs, out: &mut impl Write) -> CmdResult {
    let process = match (a.p, a.mu, a.sigma) {
        (Some(p), None, None) => ProcessSpec::Bernoulli { p },
        (None, Some(mu), Some(sigma)) => ProcessSpec::Normal { mu, sigma },
        _ => return invalid("give either --p, or both --mu and --sigma"),
    };
    let methods: Vec<Method> = a.methods.iter().copied().map(Method::from).collect();
    let rows = match a.mode {
        Mode::Exact => {
            let ProcessSpec::Bernoulli { p } = process else {
                return invalid("exact mode supports the bernoulli process only (use --p)");
            };
            if methods.contains(&Method::Mean) {
                return invalid("exact mode does not support method mean");
            }
            let config = StudyConfig {
                process,
                population_size: a.big_n,
                sample_size: a.n,
                alpha: a.alpha,
                replicates: 1,
                seed: 0,
                methods: methods.clone(),
                snap_to_grid: a.snap,
            };
            config.validate()?;
            if a.big_n > EXACT_PI_MAX_N {
                return Err(Failure::Limit(format!("exact mode needs N <= {EXACT_PI_MAX_N}, got N = {}", a.big_n)));
            }
            if a.n > EXACT_CI_MAX_N {
                return Err(Failure::Limit(format!("exact mode needs n <= {EXACT_CI_MAX_N}, got n = {}", a.n)));
            }
            methods
                .iter()
                .map(|&m| {
                    let rec = exact_coverage_record(m, a.big_n, a.n, p, a.alpha, a.snap)?;
                    Ok(coverage_row(&rec, None, a.seed))
                })
                .collect::<Result<Vec<_>, Error>>()?
        }
        Mode::MonteCarlo => {
            let seed = seed_or_default(a.seed);
            let config = StudyConfig {
                process,
                population_size: a.big_n,
                sample_size: a.n,
                alpha: a.alpha,
                replicates: a.replicates,
                seed,
                methods,
                snap_to_grid: a.snap,
            };
            config.validate()?;
            let report = run_pooled(a.threads, || simulate_study(&config))??;
            report
                .methods
                .iter()
                .map(|m| coverage_row(m, Some(m.replicates_used), Some(seed)))
                .collect()
        }
    };
    render_rows(out, &rows, a.format)?;
    Ok(())
}

fn cmd_diagnose(a: DiagnoseArgs, out: &mut impl Write) -> CmdResult {
    if a.n >= a.big_n {
        return invalid(format!("diagnose requires n < N, got n = {}, N = {}", a.n, a.big_n));
    }
    let seed = seed_or_default(a.seed);
    let config = StudyConfig {
        process: ProcessSpec::Bernoulli { p: a.p },
        population_size: a.big_n,
        sample_size: a.n,
        alpha: 0.05,
        replicates: a.replicates,
        seed,
        methods: vec![Method::Wald],
        snap_to_grid: false,
    };
    config.validate()?;
    let scale = ScaleKind::from(a.scale);
    let d = run_pooled(a.threads, || limit_diagnostic(&config, scale))??;
    let row = DiagnosticRow {
        scale: d.scale.id().into(),
        ks_stat: d.ks_stat,
        mean: Some(d.mean),
        variance: Some(d.variance),
        used: d.used,
        excluded: d.excluded,
        replicates: a.replicates,
        seed,
    }
    .rounded();
    render_diagnostic(out, &row, a.format)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match cli.command {
        Command::Ci(a) => cmd_ci(a, &mut out),
        Command::Pi(a) => cmd_pi(a, &mut out),
        Command::Coverage(a) => cmd_coverage(a, &mut out),
        Command::Diagnose(a) => cmd_diagnose(a, &mut out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Limit(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
