//! `hyperthick` command-line tool. JSON goes to stdout; CSV goes to stdout or
//! to `--out`. Exit codes: 0 ok, 1 domain error or failed verification,
//! 2 usage error.

mod config;
mod shape;
mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperthick::analysis::{dumbbell_sweep, DUMBBELL_SEED};
use hyperthick::geometry::build_grid;
use hyperthick::nsphere::ball_measures;
use hyperthick::properties::properties_report;
use hyperthick::stationary::profile_curve;
use hyperthick::thickness::{star_properties, thickness_montecarlo};
use hyperthick::{StationaryParams, DEFAULT_RESOLUTION, VERSION};
use serde::Serialize;
use serde_json::{json, Map, Value};

use config::Config;
use shape::ShapeSpec;

const THREADS_ENV: &str = "HYPERTHICK_THREADS";
const DEFAULT_MC_SAMPLES: u64 = 1_000_000;
const DEFAULT_MC_SEED: u64 = 1;
const DEFAULT_DUMBBELL_SAMPLES: u64 = 2_000_000;
const DEFAULT_PROFILE_POINTS: usize = 201;
const DEFAULT_VERIFY_SEED: u64 = 100;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(hyperthick::Error),
    Io(String),
}

impl From<hyperthick::Error> for CliError {
    fn from(e: hyperthick::Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "hyperthick", version, about = "Average cross-sectional thickness of n-dimensional bodies")]
struct Cli {
    /// Defaults file with `key = value` lines; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Unit n-ball volume and unit sphere area.
    Nsphere(NsphereArgs),
    /// Average m-dimensional thickness of a star-shaped body.
    Thickness(ThicknessArgs),
    /// Stationary shapes.
    #[command(subcommand)]
    Stationary(StationaryCommand),
    /// Run an invariant suite and report pass/fail.
    Verify(VerifyArgs),
    /// Two-disc configurations approaching the thickness supremum.
    Dumbbell(DumbbellArgs),
}

#[derive(Debug, Subcommand)]
enum StationaryCommand {
    /// Meridian R(z) as CSV, with a JSON sidecar.
    Profile(ProfileArgs),
    /// Volume, axial moment and thickness.
    Props(PropsArgs),
}

#[derive(Debug, Args, Serialize)]
struct NsphereArgs {
    #[arg(long)]
    dim: usize,
}

#[derive(Debug, Args, Serialize)]
struct ThicknessArgs {
    /// ball:R[;n=N] | harmonic:[n=N;]c0=..;c1=.. | file:PATH
    #[arg(long)]
    shape: String,
    #[arg(long)]
    m: usize,
    /// Monte Carlo instead of quadrature.
    #[arg(long)]
    mc: bool,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Quadrature points per angle.
    #[arg(long)]
    resolution: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
struct ProfileArgs {
    /// n - m
    #[arg(long)]
    nm: usize,
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    ecc: f64,
    #[arg(long)]
    points: Option<usize>,
    /// CSV destination; the sidecar goes next to it with a .json extension.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct PropsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    ecc: f64,
    /// Use a closed form when one is known.
    #[arg(long)]
    closed_form: bool,
    #[arg(long)]
    resolution: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Suite {
    SphereOptimality,
    Identity,
    Nullvector,
    Factorization,
}

#[derive(Debug, Args, Serialize)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Restrict to one value of n - m.
    #[arg(long)]
    nm: Option<usize>,
    /// sphere-optimality: dimension (needs --m).
    #[arg(long, requires = "m")]
    n: Option<usize>,
    /// sphere-optimality: section dimension; identity: m (default 1).
    #[arg(long)]
    m: Option<usize>,
    /// nullvector: lambda of the sampled shape.
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// nullvector: eccentricity of the sampled shape.
    #[arg(long, default_value_t = 0.5)]
    ecc: f64,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0.05)]
    amplitude: f64,
    /// factorization: random points per n - m.
    #[arg(long, default_value_t = 200)]
    points: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    resolution: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
struct DumbbellArgs {
    /// Total area A.
    #[arg(long)]
    area: f64,
    /// Centroid distance G.
    #[arg(long)]
    centroid: f64,
    /// Comma-separated area fractions of the far disc.
    #[arg(long, value_delimiter = ',', required = true)]
    gamma_sweep: Vec<f64>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV destination; a JSON summary is printed instead of the CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(e)) => {
            print_json(&json!({ "error": e.kind(), "detail": e.to_string() }));
            ExitCode::from(1)
        }
        Err(CliError::Io(msg)) => {
            print_json(&json!({ "error": "io", "detail": msg }));
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    configure_threads()?;
    let cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    match cli.command {
        Command::Nsphere(args) => nsphere(args),
        Command::Thickness(args) => thickness(args, &cfg),
        Command::Stationary(StationaryCommand::Profile(args)) => profile(args, &cfg),
        Command::Stationary(StationaryCommand::Props(args)) => props(args, &cfg),
        Command::Verify(args) => verify(args, &cfg),
        Command::Dumbbell(args) => dumbbell(args, &cfg),
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    // Fails only if a pool already exists, which cannot happen this early.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values always serialize"));
}

/// Prepends the reproducibility fields to a result object.
fn emit(echo: &impl Serialize, resolution: Option<usize>, seed: Option<u64>, body: Value) {
    let mut out = Map::new();
    out.insert("tool_version".into(), json!(VERSION));
    out.insert("params_echo".into(), serde_json::to_value(echo).expect("arguments serialize"));
    out.insert("grid_resolution".into(), json!(resolution));
    if let Some(s) = seed {
        out.insert("seed".into(), json!(s));
    }
    if let Value::Object(fields) = body {
        out.extend(fields);
    }
    print_json(&Value::Object(out));
}

/// 17 significant digits, enough to round-trip any f64.
fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_csv<W: Write>(sink: W, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.into_iter().map(fmt17))?;
    }
    w.flush()?;
    Ok(())
}

fn nsphere(args: NsphereArgs) -> Result<ExitCode, CliError> {
    if args.dim < 1 {
        return Err(hyperthick::Error::Domain("dimension must be at least 1".into()).into());
    }
    let b = ball_measures(args.dim);
    emit(&args, None, None, json!({ "n": b.n, "V": b.volume, "S": b.surface }));
    Ok(ExitCode::SUCCESS)
}

// Per-angle points that keep the product grid near a million nodes.
fn default_grid_resolution(n: usize) -> usize {
    match n {
        2 => 512,
        3 => 128,
        4 => 48,
        5 => 24,
        _ => 16,
    }
}

fn thickness(mut args: ThicknessArgs, cfg: &Config) -> Result<ExitCode, CliError> {
    let spec = ShapeSpec::parse(&args.shape)?;
    let n = spec.dim();
    if args.mc {
        let samples = *args.samples.get_or_insert(cfg.samples.unwrap_or(DEFAULT_MC_SAMPLES));
        let seed = *args.seed.get_or_insert(cfg.seed.unwrap_or(DEFAULT_MC_SEED));
        let body = spec.star().to_indicator(spec.bound());
        let est = thickness_montecarlo(&body, args.m, samples, seed)?;
        let out = json!({
            "n": n, "m": args.m, "method": "monte_carlo", "shape": spec,
            "T": est.value, "stderr": est.stderr, "samples": est.samples, "accepted": est.accepted,
        });
        emit(&args, None, Some(seed), out);
    } else {
        let res = *args.resolution.get_or_insert(cfg.resolution.unwrap_or_else(|| default_grid_resolution(n)));
        let grid = build_grid(n, res)?;
        let props = star_properties(&spec.star(), args.m, &grid)?;
        let out = json!({
            "n": n, "m": args.m, "method": "quadrature", "shape": spec,
            "T": props.thickness, "V": props.volume, "centroid": props.centroid()?,
            "grid_nodes": grid.node_count() as u64,
        });
        emit(&args, Some(res), None, out);
    }
    Ok(ExitCode::SUCCESS)
}

fn sidecar_path(csv: &Path) -> PathBuf {
    if csv.extension().is_some_and(|e| e == "json") {
        let mut p = csv.as_os_str().to_owned();
        p.push(".sidecar.json");
        PathBuf::from(p)
    } else {
        csv.with_extension("json")
    }
}

fn profile(mut args: ProfileArgs, cfg: &Config) -> Result<ExitCode, CliError> {
    // The meridian depends on n - m only; m = 1 is as good as any.
    let params = StationaryParams::new(args.nm + 1, 1, args.lambda, args.ecc)?;
    let points = *args.points.get_or_insert(cfg.points.unwrap_or(DEFAULT_PROFILE_POINTS));
    let curve = profile_curve(&params, points)?;
    let rows = curve.samples.iter().map(|p| vec![p.z, p.radius]);
    let Some(out) = &args.out else {
        write_csv(std::io::stdout().lock(), &["z", "R"], rows)?;
        return Ok(ExitCode::SUCCESS);
    };
    let file = std::fs::File::create(out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    write_csv(std::io::BufWriter::new(file), &["z", "R"], rows)?;
    let sidecar = sidecar_path(out);
    let mut body = serde_json::to_value(&curve).expect("profile serializes");
    body["class"] = json!(params.class());
    body["csv"] = json!(out.display().to_string());
    let mut doc = Map::new();
    doc.insert("tool_version".into(), json!(VERSION));
    doc.insert("params_echo".into(), serde_json::to_value(&args).expect("arguments serialize"));
    doc.insert("grid_resolution".into(), json!(points));
    if let Value::Object(fields) = body {
        doc.extend(fields);
    }
    let text = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON values always serialize");
    std::fs::write(&sidecar, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", sidecar.display())))?;
    emit(
        &args,
        Some(points),
        None,
        json!({
            "class": params.class(), "z_minus": curve.z_minus, "z_plus": curve.z_plus,
            "csv": out.display().to_string(), "sidecar": sidecar.display().to_string(),
        }),
    );
    Ok(ExitCode::SUCCESS)
}

fn props(mut args: PropsArgs, cfg: &Config) -> Result<ExitCode, CliError> {
    let params = StationaryParams::new(args.n, args.m, args.lambda, args.ecc)?;
    let res = *args.resolution.get_or_insert(cfg.resolution.unwrap_or(DEFAULT_RESOLUTION));
    let report = properties_report(&params, res, args.closed_form)?;
    let body = serde_json::to_value(&report).expect("report serializes");
    emit(&args, report.resolution, None, body);
    Ok(ExitCode::SUCCESS)
}

fn verify(mut args: VerifyArgs, cfg: &Config) -> Result<ExitCode, CliError> {
    let (key, default_tol) = match args.suite {
        Suite::SphereOptimality => ("optimality", 1e-12),
        Suite::Identity => ("identity", 1e-7),
        Suite::Nullvector => ("nullvector", 1e-5),
        Suite::Factorization => ("factorization", 1e-12),
    };
    let tol = *args.tolerance.get_or_insert(cfg.tolerance(key).unwrap_or(default_tol));
    let seed = *args.seed.get_or_insert(cfg.seed.unwrap_or(DEFAULT_VERIFY_SEED));
    let nms = |all: std::ops::RangeInclusive<usize>| args.nm.map_or_else(|| all.collect(), |k| vec![k]);
    let (report, res, seeded) = match args.suite {
        Suite::SphereOptimality => {
            let pairs = match (args.n, args.m, args.nm) {
                (Some(n), Some(m), _) => vec![(n, m)],
                (None, _, Some(k)) => vec![(k + 1, 1)],
                _ => vec![(2, 1), (3, 1), (3, 2)],
            };
            (verify::sphere_optimality(&pairs, args.trials, args.amplitude, seed, tol)?, None, true)
        }
        Suite::Identity => {
            let res = *args.resolution.get_or_insert(cfg.resolution.unwrap_or(DEFAULT_RESOLUTION));
            let m = args.m.unwrap_or(1);
            (verify::identity(&nms(1..=4), m, res, tol)?, Some(res), false)
        }
        Suite::Nullvector => (verify::nullvector(&nms(1..=3), args.lambda, args.ecc, seed, tol)?, None, true),
        Suite::Factorization => (verify::factorization(&nms(1..=8), args.points, seed, tol)?, None, true),
    };
    let pass = report.pass;
    emit(&args, res, seeded.then_some(seed), serde_json::to_value(&report).expect("report serializes"));
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn dumbbell(mut args: DumbbellArgs, cfg: &Config) -> Result<ExitCode, CliError> {
    let samples = *args.samples.get_or_insert(cfg.samples.unwrap_or(DEFAULT_DUMBBELL_SAMPLES));
    let seed = *args.seed.get_or_insert(cfg.seed.unwrap_or(DUMBBELL_SEED));
    let rows = dumbbell_sweep(args.area, args.centroid, &args.gamma_sweep, samples, seed)?;
    let header = ["gamma", "T_asymptotic", "T_exact", "stderr"];
    let values = rows.iter().map(|r| vec![r.gamma, r.asymptotic, r.exact, r.stderr]);
    match &args.out {
        None => write_csv(std::io::stdout().lock(), &header, values)?,
        Some(out) => {
            let file = std::fs::File::create(out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
            write_csv(std::io::BufWriter::new(file), &header, values)?;
            let bound = 2.0 * (args.area / std::f64::consts::PI).sqrt();
            emit(&args, None, Some(seed), json!({ "bound": bound, "rows": rows, "csv": out.display().to_string() }));
        }
    }
    Ok(ExitCode::SUCCESS)
}
