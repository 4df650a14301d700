//! `bryant`: certify, sweep, bound, integrate and mesh from the command line.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use bryant::bounds::ErrorBudget;
use bryant::certify::{
    certify, max_half_width, parse_grid, path_bounds, subinterval_edges, sweep_csv, sweep_periods, CertifyConfig,
    MatrixBounds, Verdict, DEFAULT_A, DEFAULT_C1, DEFAULT_C2, DEFAULT_N, DEFAULT_SUBINTERVALS,
};
use bryant::integrator::{integrate_path, IntegrationConfig, Mode};
use bryant::mesh::{export_obj, sample_surface, GridSpec, PresetName, WeierstrassPreset};
use bryant::output::write_atomic;
use bryant::surface::{CoefficientBounds, PolygonalPath, SurfaceParams};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

const THREADS_ENV: &str = "BRYANT_THREADS";

#[derive(Parser, Debug)]
#[command(name = "bryant", version, about = "Validated numerics for CMC-1 catenoid cousins of genus one")]
#[command(after_help = "Set BRYANT_THREADS to cap the number of worker threads.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify that f1 = f2 > 2 somewhere in [c1, c2] and write the certificate JSON.
    Certify(CertifyArgs),
    /// Tabulate period midpoints and enclosure widths over a grid of c as CSV.
    Sweep(SweepArgs),
    /// Report coefficient bounds and the resulting error budget as JSON.
    Bounds(BoundsArgs),
    /// Integrate along one path and report the endpoint matrix as JSON.
    Integrate(IntegrateArgs),
    /// Sample a surface preset and export it as Wavefront OBJ.
    Mesh(MeshArgs),
}

#[derive(Args, Debug)]
struct CertifyArgs {
    /// Branch point parameter a > 1.
    #[arg(long, default_value_t = DEFAULT_A)]
    a: f64,
    /// Lower end of the c range.
    #[arg(long, default_value_t = DEFAULT_C1)]
    c1: f64,
    /// Upper end of the c range.
    #[arg(long, default_value_t = DEFAULT_C2)]
    c2: f64,
    /// RK4 steps per path.
    #[arg(long, default_value_t = DEFAULT_N)]
    n: usize,
    /// Number of equal subintervals of [c1, c2].
    #[arg(long, default_value_t = DEFAULT_SUBINTERVALS)]
    subintervals: usize,
    /// Coefficient bounds M,M1,M2,M3 to use instead of the computed ones; they must dominate them.
    #[arg(long, value_parser = parse_bounds)]
    override_bounds: Option<CoefficientBounds>,
    /// Factor applied to the discretization bound, for stress testing.
    #[arg(long, default_value_t = 1.0)]
    epsilon_scale: f64,
    /// Certificate path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, default_value_t = DEFAULT_A)]
    a: f64,
    /// Grid of c as lo:hi:step, or a single value.
    #[arg(long, default_value = "0.0495:0.0505:0.00001")]
    grid: String,
    #[arg(long, default_value_t = DEFAULT_N)]
    n: usize,
    /// CSV path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long, default_value_t = DEFAULT_A)]
    a: f64,
    /// Upper end of the c range, where the budget is evaluated.
    #[arg(long, default_value_t = DEFAULT_C2)]
    c2: f64,
    /// Lower end of the c range, used for the subinterval half-width.
    #[arg(long, default_value_t = DEFAULT_C1)]
    c1: f64,
    #[arg(long, default_value_t = DEFAULT_N)]
    n: usize,
    #[arg(long, default_value_t = DEFAULT_SUBINTERVALS)]
    subintervals: usize,
    /// Coefficient bounds M,M1,M2,M3 to evaluate the budget with.
    #[arg(long, value_parser = parse_bounds)]
    override_bounds: Option<CoefficientBounds>,
    /// JSON path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PathName {
    Alpha1,
    Alpha2,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Interval,
    Floating,
}

#[derive(Args, Debug)]
struct IntegrateArgs {
    #[arg(long, value_enum, default_value = "alpha1")]
    path: PathName,
    #[arg(long, default_value_t = DEFAULT_A)]
    a: f64,
    /// Scale parameter c of the equation.
    #[arg(long, default_value_t = 0.05)]
    c: f64,
    #[arg(long, default_value_t = DEFAULT_N)]
    n: usize,
    #[arg(long, value_enum, default_value = "interval")]
    mode: ModeArg,
    /// JSON path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MeshArgs {
    /// One of horosphere, enneper_cousin, catenoid_cousin, genus1_catenoid,
    /// euclidean_minimal_catenoid, euclidean_enneper.
    #[arg(long, value_parser = parse_preset)]
    preset: PresetName,
    /// Scale of f for the cousin presets; preset default when absent.
    #[arg(long)]
    lambda: Option<f64>,
    /// Branch point parameter of the genus-one preset; preset default when absent.
    #[arg(long)]
    a: Option<f64>,
    /// Curvature scale c; preset default when absent.
    #[arg(long)]
    c: Option<f64>,
    /// Grid nodes as NxM.
    #[arg(long, default_value = "24x24", value_parser = parse_grid_spec)]
    grid: GridSpec,
    /// OBJ output path.
    #[arg(long)]
    out: PathBuf,
}

fn parse_bounds(s: &str) -> std::result::Result<CoefficientBounds, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("'{t}' is not a number")))
        .collect::<std::result::Result<_, _>>()?;
    match v.as_slice() {
        &[m, m1, m2, m3] => CoefficientBounds::new(m, m1, m2, m3).map_err(|e| e.to_string()),
        _ => Err(format!("expected four values M,M1,M2,M3, got {}", v.len())),
    }
}

fn parse_preset(s: &str) -> std::result::Result<PresetName, String> {
    s.parse().map_err(|e: bryant::Error| e.to_string())
}

fn parse_grid_spec(s: &str) -> std::result::Result<GridSpec, String> {
    s.parse().map_err(|e: bryant::Error| e.to_string())
}

fn emit(out: Option<&PathBuf>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => write_atomic(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn json_bytes(v: &serde_json::Value) -> Result<Vec<u8>> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s.into_bytes())
}

/// Outcome of a subcommand that ran to completion.
enum Status {
    Ok,
    CertificationFailed,
}

fn run_certify(args: &CertifyArgs) -> Result<Status> {
    let cfg = CertifyConfig {
        a: args.a,
        c1: args.c1,
        c2: args.c2,
        n: args.n,
        subintervals: args.subintervals,
        bounds_override: args.override_bounds,
        epsilon_scale: args.epsilon_scale,
    };
    let cert = certify(&cfg)?;
    let mut text = cert.to_json()?;
    text.push('\n');
    emit(args.out.as_ref(), text.as_bytes())?;
    match &cert.verdict {
        Verdict::Verified => {
            eprintln!("VERIFIED");
            Ok(Status::Ok)
        }
        Verdict::Failed(reason) => {
            eprintln!("FAILED: {reason}");
            Ok(Status::CertificationFailed)
        }
    }
}

fn run_sweep(args: &SweepArgs) -> Result<Status> {
    let grid = parse_grid(&args.grid)?;
    let rows = sweep_periods(args.a, &grid, args.n)?;
    emit(args.out.as_ref(), sweep_csv(&rows).as_bytes())?;
    Ok(Status::Ok)
}

fn run_bounds(args: &BoundsArgs) -> Result<Status> {
    let (computed, [b1, b2]) = path_bounds(args.a)?;
    let bounds = match args.override_bounds {
        Some(o) if o.dominates(&computed) => o,
        Some(o) => bail!("override bounds {o:?} do not dominate the computed bounds {computed:?}"),
        None => computed,
    };
    let edges = subinterval_edges(args.c1, args.c2, args.subintervals.max(1));
    let pieces: Vec<(f64, f64, f64)> = edges.windows(2).map(|w| (w[0], 0.5 * (w[0] + w[1]), w[1])).collect();
    let budget = ErrorBudget::new(args.c2, args.n, bounds, max_half_width(&pieces))?;
    let value = json!({
        "a": args.a,
        "alpha1": b1,
        "alpha2": b2,
        "worst_case": computed,
        "published": CoefficientBounds::PUBLISHED,
        "published_dominates": CoefficientBounds::PUBLISHED.dominates(&computed),
        "budget": budget,
    });
    emit(args.out.as_ref(), &json_bytes(&value)?)?;
    Ok(Status::Ok)
}

fn run_integrate(args: &IntegrateArgs) -> Result<Status> {
    let path = match args.path {
        PathName::Alpha1 => PolygonalPath::alpha1(args.a),
        PathName::Alpha2 => PolygonalPath::alpha2(args.a),
    };
    let params = SurfaceParams::new(args.a, args.c)?;
    let mode = match args.mode {
        ModeArg::Interval => Mode::Interval,
        ModeArg::Floating => Mode::Floating,
    };
    let f = integrate_path(&path, &params, &IntegrationConfig::new(args.n, mode)?)?;
    let det = f.det();
    let value = json!({
        "path": path.name,
        "a": args.a,
        "c": args.c,
        "n": args.n,
        "mode": format!("{mode:?}").to_lowercase(),
        "matrix": MatrixBounds::from(&f),
        "det": { "re": [det.re.lo(), det.re.hi()], "im": [det.im.lo(), det.im.hi()] },
        "max_width": f.max_width(),
    });
    emit(args.out.as_ref(), &json_bytes(&value)?)?;
    Ok(Status::Ok)
}

fn run_mesh(args: &MeshArgs) -> Result<Status> {
    let mut preset = WeierstrassPreset::new(args.preset);
    if let Some(l) = args.lambda {
        preset.lambda = l;
    }
    if let Some(a) = args.a {
        preset.a = a;
    }
    if let Some(c) = args.c {
        preset.c = c;
    }
    let mesh = sample_surface(&preset, &args.grid)?;
    export_obj(&mesh, &args.out).with_context(|| format!("writing {}", args.out.display()))?;
    eprintln!("{} vertices, {} faces written to {}", mesh.vertices.len(), mesh.quads.len(), args.out.display());
    Ok(Status::Ok)
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = v.trim().parse().with_context(|| format!("{THREADS_ENV}='{v}' is not a thread count"))?;
    if threads == 0 {
        bail!("{THREADS_ENV} must be at least 1");
    }
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<Status> {
    configure_threads()?;
    match &cli.command {
        Command::Certify(a) => run_certify(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Bounds(a) => run_bounds(a),
        Command::Integrate(a) => run_integrate(a),
        Command::Mesh(a) => run_mesh(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(&cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::CertificationFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
