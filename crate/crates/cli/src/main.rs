//! `hfbm`: simulate Hadamard fractional Brownian motion path ensembles,
//! evaluate the covariance by two independent routes, and run the
//! verification suites.
//!
//! Exit codes: 0 success (every check Pass for `verify`), 1 verification
//! failure, 2 flag validation, 3 runtime or numerical failure, 4 when
//! verification is inconclusive but nothing failed.
//!
//! `HFBM_THREADS` caps the worker-thread count; results are identical for
//! any value because all parallel reductions are order-fixed.

mod io;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use hfbm_core::{
    covariance_closed, covariance_quadrature, sample_cholesky, sample_volterra, AlphaParam,
    AnalysisReport, Error as CoreError, QuadratureConfig, Regime, ReportValue, TimeGrid, Verdict,
};

const VERSION: &str = env!("CARGO_PKG_VERSION");

enum Failure {
    Flag(String),
    Numeric(String),
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        Failure::Numeric(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Numeric(format!("io: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Numeric(format!("json: {e}"))
    }
}

fn flag(e: CoreError) -> Failure {
    Failure::Flag(e.to_string())
}

#[derive(Parser)]
#[command(
    name = "hfbm",
    version,
    about = "Hadamard fractional Brownian motion: simulation, covariance, verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample paths on a uniform grid and write CSV plus a run manifest
    Simulate(SimulateArgs),
    /// Print the covariance matrix over a list of times
    Cov(CovArgs),
    /// Run a verification suite and report one verdict per check
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    /// Dense covariance factorization, any grid
    Cholesky,
    /// Triangular kernel weights, uniform grid, exposes the driver
    Volterra,
}

impl MethodArg {
    fn name(self) -> &'static str {
        match self {
            MethodArg::Cholesky => "cholesky",
            MethodArg::Volterra => "volterra",
        }
    }

    fn parse(name: &str) -> Option<Self> {
        match name {
            "cholesky" => Some(MethodArg::Cholesky),
            "volterra" => Some(MethodArg::Volterra),
            _ => None,
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    /// Order parameter of the process
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Time horizon
    #[arg(long = "T", default_value_t = 1.0)]
    t_max: f64,
    /// Number of uniform grid cells
    #[arg(long, default_value_t = 1024)]
    n: usize,
    /// Number of independent paths
    #[arg(long, default_value_t = 1)]
    paths: usize,
    /// Sampling scheme
    #[arg(long, value_enum, default_value_t = MethodArg::Volterra)]
    method: MethodArg,
    /// RNG seed
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output CSV; the driver CSV and manifest derive their names from it
    #[arg(long, default_value = "ensemble.csv")]
    out: PathBuf,
    /// Re-run the configuration recorded in a manifest instead of the flags
    #[arg(long, conflicts_with_all = ["alpha", "t_max", "n", "paths", "method", "seed"])]
    from_manifest: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CovMode {
    /// Direct kernel-product quadrature, any order
    Quad,
    /// Confluent hypergeometric form, order in (0, 1]
    Closed,
    /// Both routes; prints the maximum absolute disagreement
    Both,
}

#[derive(Args)]
struct CovArgs {
    /// Order parameter of the process
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Comma-separated evaluation times, e.g. "0.5,1,2"
    #[arg(long)]
    times: String,
    /// Covariance route
    #[arg(long, value_enum, default_value_t = CovMode::Quad)]
    mode: CovMode,
    /// Optional CSV file for the matrix
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Holder,
    Variation,
    Memory,
    Lnd,
    Boundary,
    Sonine,
    Inversion,
    Operators,
    Inequality,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    /// Which checks to run
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    suite: SuiteArg,
    /// Order parameter for the alpha-specific suites (variation, sonine,
    /// inversion); ignored by the others and by `all`
    #[arg(long)]
    alpha: Option<f64>,
    /// RNG seed for the randomized checks
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Emit the reports as a JSON array on stdout
    #[arg(long)]
    json: bool,
}

/// Everything needed to reproduce a `simulate` run bit for bit.
#[derive(Serialize, Deserialize)]
struct RunManifest {
    version: String,
    command: String,
    alpha: f64,
    t_max: f64,
    n: usize,
    paths: usize,
    seed: u64,
    method: String,
    timestamp: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    if let Err(f) = init_threads() {
        return fail(f);
    }
    let outcome = match cli.command {
        Command::Simulate(args) => run_simulate(&args).map(|_| 0),
        Command::Cov(args) => run_cov(&args).map(|_| 0),
        Command::Verify(args) => run_verify(&args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => fail(f),
    }
}

fn fail(f: Failure) -> ExitCode {
    match f {
        Failure::Flag(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Failure::Numeric(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn init_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("HFBM_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.parse().ok().filter(|&k| k >= 1).ok_or_else(|| {
        Failure::Flag(format!(
            "HFBM_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Numeric(format!("thread pool: {e}")))
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn run_simulate(args: &SimulateArgs) -> Result<(), Failure> {
    let (alpha_raw, t_max, n, paths, seed, method) = match &args.from_manifest {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Failure::Flag(format!("cannot read manifest {}: {e}", path.display()))
            })?;
            let m: RunManifest = serde_json::from_str(&text).map_err(|e| {
                Failure::Flag(format!("malformed manifest {}: {e}", path.display()))
            })?;
            let method = MethodArg::parse(&m.method).ok_or_else(|| {
                Failure::Flag(format!("unknown method {:?} in manifest", m.method))
            })?;
            (m.alpha, m.t_max, m.n, m.paths, m.seed, method)
        }
        None => (
            args.alpha,
            args.t_max,
            args.n,
            args.paths,
            args.seed,
            args.method,
        ),
    };
    let alpha = AlphaParam::new(alpha_raw).map_err(flag)?;
    if t_max <= 0.0 || !t_max.is_finite() {
        return Err(Failure::Flag(format!(
            "--T must be positive and finite, got {t_max}"
        )));
    }
    if n == 0 {
        return Err(Failure::Flag("--n must be at least 1".into()));
    }
    if paths == 0 {
        return Err(Failure::Flag("--paths must be at least 1".into()));
    }
    let grid = TimeGrid::uniform(t_max, n).map_err(flag)?;
    let ensemble = match method {
        MethodArg::Cholesky => sample_cholesky(&alpha, &grid, paths, seed),
        MethodArg::Volterra => sample_volterra(&alpha, &grid, paths, seed),
    }?;

    io::write_paths_csv(&args.out, &grid, ensemble.hfbm_paths())?;
    println!("wrote {}", args.out.display());
    if let Some(bm) = ensemble.bm_paths() {
        let driver = args.out.with_extension("driver.csv");
        io::write_paths_csv(&driver, &grid, bm)?;
        println!("wrote {}", driver.display());
    }
    let manifest = RunManifest {
        version: VERSION.into(),
        command: "simulate".into(),
        alpha: alpha_raw,
        t_max,
        n,
        paths,
        seed,
        method: method.name().into(),
        timestamp: unix_now(),
    };
    let manifest_path = args.out.with_extension("manifest.json");
    let mut text = io::to_sorted_json(&manifest)?;
    text.push('\n');
    io::write_text(&manifest_path, &text)?;
    println!("wrote {}", manifest_path.display());
    Ok(())
}

fn parse_times(raw: &str) -> Result<Vec<f64>, Failure> {
    let mut times = Vec::new();
    for tok in raw.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        let t: f64 = tok
            .parse()
            .map_err(|_| Failure::Flag(format!("--times entry {tok:?} is not a number")))?;
        if !t.is_finite() || t < 0.0 {
            return Err(Failure::Flag(format!(
                "--times entries must be finite and >= 0, got {t}"
            )));
        }
        times.push(t);
    }
    if times.is_empty() {
        return Err(Failure::Flag("--times must list at least one time".into()));
    }
    Ok(times)
}

fn run_cov(args: &CovArgs) -> Result<(), Failure> {
    let alpha = AlphaParam::new(args.alpha).map_err(flag)?;
    let times = parse_times(&args.times)?;
    if args.mode != CovMode::Quad && !matches!(alpha.regime(), Regime::Sub | Regime::Unit) {
        return Err(Failure::Flag(format!(
            "the closed-form route needs alpha in (0, 1], got {}",
            args.alpha
        )));
    }

    let cfg = QuadratureConfig::default();
    let dim = times.len();
    let mut matrix = vec![0.0; dim * dim];
    let mut delta_max = 0.0_f64;
    for i in 0..dim {
        for j in i..dim {
            let (s, t) = (times[i], times[j]);
            let value = match args.mode {
                CovMode::Quad => covariance_quadrature(&alpha, s, t, &cfg)?,
                CovMode::Closed => covariance_closed(&alpha, s, t)?,
                CovMode::Both => {
                    let q = covariance_quadrature(&alpha, s, t, &cfg)?;
                    let c = covariance_closed(&alpha, s, t)?;
                    delta_max = delta_max.max((q - c).abs());
                    q
                }
            };
            matrix[i * dim + j] = value;
            matrix[j * dim + i] = value;
        }
    }

    let text = io::render_matrix(&times, &matrix);
    print!("{text}");
    if args.mode == CovMode::Both {
        println!("max_abs_delta,{}", io::format_f64(delta_max));
    }
    if let Some(out) = &args.out {
        io::write_text(out, &text)?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

/// Validated order parameter for a suite, or the suite's default.
fn suite_alpha(
    requested: Option<f64>,
    default: f64,
    accepts: fn(Regime) -> bool,
    what: &str,
) -> Result<AlphaParam, Failure> {
    let raw = requested.unwrap_or(default);
    let p = AlphaParam::new(raw).map_err(flag)?;
    if !accepts(p.regime()) {
        return Err(Failure::Flag(format!(
            "--suite {what} does not accept alpha = {raw}"
        )));
    }
    Ok(p)
}

fn run_suite(
    suite: SuiteArg,
    alpha: Option<f64>,
    seed: u64,
) -> Result<Vec<AnalysisReport>, Failure> {
    match suite {
        SuiteArg::Inequality => Ok(suites::inequality_suite(seed)?),
        SuiteArg::Boundary => Ok(suites::boundary_suite()?),
        SuiteArg::Lnd => Ok(suites::lnd_suite()?),
        SuiteArg::Holder => Ok(suites::holder_suite()?),
        SuiteArg::Memory => Ok(suites::memory_suite()?),
        SuiteArg::Operators => Ok(suites::operators_suite(seed)?),
        SuiteArg::Variation => {
            let p = suite_alpha(
                alpha,
                1.5,
                |r| matches!(r, Regime::Sub | Regime::Super),
                "variation",
            )?;
            Ok(suites::variation_suite(&p)?)
        }
        SuiteArg::Sonine => {
            let p = suite_alpha(alpha, 1.5, |r| matches!(r, Regime::Super), "sonine")?;
            Ok(suites::sonine_suite(&p)?)
        }
        SuiteArg::Inversion => {
            let alphas = match alpha {
                Some(_) => vec![suite_alpha(
                    alpha,
                    0.5,
                    |r| !matches!(r, Regime::High),
                    "inversion",
                )?],
                None => vec![
                    AlphaParam::new(0.5).map_err(flag)?,
                    AlphaParam::new(1.5).map_err(flag)?,
                ],
            };
            Ok(suites::inversion_suite(&alphas, seed)?)
        }
        SuiteArg::All => unreachable!("expanded by the caller"),
    }
}

fn render_value(v: &ReportValue) -> String {
    match v {
        ReportValue::Scalar(x) => format!("{x:.6e}"),
        ReportValue::Sequence(xs) => {
            let parts: Vec<String> = xs.iter().map(|x| format!("{x:.6e}")).collect();
            format!("[{}]", parts.join(", "))
        }
        ReportValue::Text(t) => t.clone(),
    }
}

fn render_report(r: &AnalysisReport) -> String {
    let tag = match r.verdict {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
        Verdict::Inconclusive => "INCONCLUSIVE",
    };
    let inputs: Vec<String> = r.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!(
        "[{tag}] {} ({}) estimate {} | reference {} | tolerance {:.3e}",
        r.name,
        inputs.join(", "),
        render_value(&r.estimate),
        render_value(&r.reference),
        r.tolerance
    )
}

fn run_verify(args: &VerifyArgs) -> Result<u8, Failure> {
    let order: Vec<SuiteArg> = match args.suite {
        SuiteArg::All => vec![
            SuiteArg::Inequality,
            SuiteArg::Boundary,
            SuiteArg::Lnd,
            SuiteArg::Sonine,
            SuiteArg::Operators,
            SuiteArg::Holder,
            SuiteArg::Variation,
            SuiteArg::Memory,
            SuiteArg::Inversion,
        ],
        one => vec![one],
    };
    // `all` runs every suite at its defaults; --alpha retargets single suites.
    let alpha = if args.suite == SuiteArg::All {
        None
    } else {
        args.alpha
    };

    let mut reports = Vec::new();
    for &suite in &order {
        reports.extend(run_suite(suite, alpha, args.seed)?);
    }

    if args.json {
        println!("{}", io::to_sorted_json(&reports)?);
    } else {
        for r in &reports {
            println!("{}", render_report(r));
        }
        let passed = reports
            .iter()
            .filter(|r| matches!(r.verdict, Verdict::Pass))
            .count();
        let failed = reports
            .iter()
            .filter(|r| matches!(r.verdict, Verdict::Fail))
            .count();
        println!(
            "checks: {passed} pass, {failed} fail, {} inconclusive",
            reports.len() - passed - failed
        );
    }

    let any_fail = reports.iter().any(|r| matches!(r.verdict, Verdict::Fail));
    let any_inconclusive = reports
        .iter()
        .any(|r| matches!(r.verdict, Verdict::Inconclusive));
    Ok(if any_fail {
        1
    } else if any_inconclusive {
        4
    } else {
        0
    })
}
