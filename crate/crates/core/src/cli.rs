//! Command-line front end.
//!
//! Exit statuses: 0 PASS (or a completed computation), 1 FAIL, 2
//! INCONCLUSIVE, 3 usage error. Reports go to stdout, or to `--out` when
//! given; output is assembled in memory and written once.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::write_bounds_csv;
use crate::classify::{
    classify_spirallike, classify_strongly_starlike, convolution_direct, convolution_scan,
    convolution_test_series, GridSpec,
};
use crate::geometry::{PolygonCurve, SpiralFrame, SpiralSegment, DEFAULT_VERTICES};
use crate::harmonic::{CatalogParams, HarmonicMap};
use crate::plot::{domain_csv, domain_svg, figure1_csv, figure1_rows, figure1_svg};
use crate::radius::{find_radius_strong_with, find_radius_with, RadiusConfig, DEFAULT_TOL};
use crate::report::fmt9;
use crate::series::DEFAULT_DEGREE;
use crate::verdict::{Status, Verdict};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "SPIRALKIT_THREADS";

pub const DEFAULT_SEED: u64 = 20_240_917;

/// Series/direct agreement threshold reported by `convtest`.
pub const CONVOLUTION_AGREEMENT: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(
    name = "spiralkit",
    version,
    about = "Spirallike and strongly starlike harmonic maps"
)]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a map as λ-spirallike (--lambda) or strongly starlike (--alpha).
    Classify(ClassifyArgs),
    /// Radius of hereditary spirallikeness or strong starlikeness.
    Radius(RadiusArgs),
    /// Table of M, N and the coefficient sequences.
    Bounds(BoundsArgs),
    /// CSV and SVG of log M and log N.
    Figure1(Figure1Args),
    /// Zero-freeness of the convolution with the kernel family.
    Convtest(ConvtestArgs),
    /// Image curves f(|z| = r) with optional spiral overlays.
    PlotDomain(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Svg,
}

#[derive(Debug, Clone, Args)]
pub struct FunctionArgs {
    /// Catalog name: identity, harmonic-koebe, family.
    #[arg(long, required_unless_present = "coeffs", conflicts_with = "coeffs")]
    pub function: Option<String>,
    /// Coefficient CSV with header n,re_a,im_a,re_b,im_b.
    #[arg(long)]
    pub coeffs: Option<PathBuf>,
    /// Coefficient b of the family z + b conj(z)^n, as "re,im" or a real.
    #[arg(long, value_parser = parse_complex)]
    pub b: Option<Complex64>,
    /// Exponent n of the family.
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// Truncation degree of series-backed maps.
    #[arg(long, default_value_t = DEFAULT_DEGREE)]
    pub degree: usize,
}

#[derive(Debug, Clone, Args)]
pub struct FrameArgs {
    /// Spiral angle λ with |λ| < π/2.
    #[arg(long, conflicts_with = "alpha")]
    pub lambda: Option<f64>,
    /// Order α in (0, 1); uses both tilts ±π(1−α)/2.
    #[arg(long)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub grid_radial: Option<usize>,
    #[arg(long)]
    pub grid_angular: Option<usize>,
    /// Outer radius of the sampling grid.
    #[arg(long)]
    pub r_max: Option<f64>,
}

impl GridArgs {
    fn grid(&self) -> GridSpec {
        let mut g = match self.r_max {
            Some(r) => GridSpec::up_to(r),
            None => GridSpec::default(),
        };
        if let Some(n) = self.grid_radial {
            g.radial = n;
        }
        if let Some(n) = self.grid_angular {
            g.angular = n;
        }
        g
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[command(flatten)]
    pub frame: FrameArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RadiusArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[command(flatten)]
    pub frame: FrameArgs,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Angular samples per circle before golden-section refinement.
    #[arg(long)]
    pub grid_angular: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Single α; defaults to the grid 0.01, …, 0.99.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Largest index of the A, B, C columns.
    #[arg(long, default_value_t = 5)]
    pub n: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct Figure1Args {
    /// Output directory for figure1.csv and figure1.svg.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ConvtestArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[command(flatten)]
    pub frame: FrameArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    /// Comma-separated radii in (0, 1).
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.9")]
    pub radii: Vec<f64>,
    /// Spiral segments overlaid per curve, from evenly spaced boundary points.
    #[arg(long, default_value_t = 0)]
    pub spirals: usize,
    /// Spiral angle of the overlays.
    #[arg(long, default_value_t = 0.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = DEFAULT_VERTICES)]
    pub vertices: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| {
        p.parse::<f64>()
            .map_err(|e| format!("invalid number '{p}': {e}"))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected 're,im' or a real number, got '{s}'")),
    }
}

/// A failure that maps to the usage exit status.
#[derive(Debug)]
pub struct UsageError(pub String);

impl<E: std::error::Error> From<E> for UsageError {
    fn from(e: E) -> Self {
        Self(e.to_string())
    }
}

type CmdResult = Result<(i32, Output), UsageError>;

/// Collected output: stdout text plus files to write.
#[derive(Debug, Default)]
pub struct Output {
    pub stdout: String,
    pub files: Vec<(PathBuf, String)>,
}

impl Output {
    fn emit(text: String, out: &Option<PathBuf>) -> Self {
        match out {
            Some(p) => Self {
                stdout: String::new(),
                files: vec![(p.clone(), text)],
            },
            None => Self {
                stdout: text,
                files: Vec::new(),
            },
        }
    }
}

fn load_map(args: &FunctionArgs) -> Result<HarmonicMap, UsageError> {
    if let Some(path) = &args.coeffs {
        let file =
            fs::File::open(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
        return Ok(HarmonicMap::read_coefficients_csv(file)?);
    }
    let name = args.function.as_deref().expect("clap enforces a selector");
    if name == "custom" {
        return Err(UsageError(
            "--function custom needs --coeffs <csv> instead".into(),
        ));
    }
    if name == "family" && args.b.is_none() {
        return Err(UsageError("--function family needs --b".into()));
    }
    if args.n == 0 {
        return Err(UsageError("--n must be at least 1".into()));
    }
    if args.degree == 0 {
        return Err(UsageError("--degree must be at least 1".into()));
    }
    let params = CatalogParams {
        b: args.b.unwrap_or_default(),
        n: args.n,
        degree: args.degree,
        ..CatalogParams::default()
    };
    Ok(HarmonicMap::catalog(name, &params)?)
}

enum Criterion {
    Spiral(SpiralFrame),
    Strong(f64),
}

fn criterion(frame: &FrameArgs) -> Result<Criterion, UsageError> {
    match (frame.lambda, frame.alpha) {
        (Some(l), None) => Ok(Criterion::Spiral(SpiralFrame::new(l)?)),
        (None, Some(a)) => {
            crate::bounds::AlphaParam::new(a)?;
            Ok(Criterion::Strong(a))
        }
        _ => Err(UsageError(
            "exactly one of --lambda or --alpha is required".into(),
        )),
    }
}

fn frames(c: &Criterion) -> Result<Vec<SpiralFrame>, UsageError> {
    Ok(match c {
        Criterion::Spiral(f) => vec![*f],
        Criterion::Strong(a) => SpiralFrame::strong_pair(*a)?.to_vec(),
    })
}

fn exit_for(status: Status) -> i32 {
    match status {
        Status::Pass => EXIT_PASS,
        Status::Fail => EXIT_FAIL,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn cmd_classify(args: &ClassifyArgs) -> CmdResult {
    let f = load_map(&args.function)?;
    let c = criterion(&args.frame)?;
    let grid = args.grid.grid();
    let verdict = match c {
        Criterion::Spiral(frame) => classify_spirallike(&f, &frame, &grid)?,
        Criterion::Strong(alpha) => classify_strongly_starlike(&f, alpha, &grid)?,
    };
    let text = match args.output.format.unwrap_or(Format::Text) {
        Format::Text => format!("function: {}\n{}", f.name(), verdict.report()),
        Format::Csv => format!("{}\n{}\n", Verdict::CSV_HEADER, verdict.csv_record()),
        Format::Svg => return Err(UsageError("classify supports --format text or csv".into())),
    };
    Ok((
        exit_for(verdict.status()),
        Output::emit(text, &args.output.out),
    ))
}

fn cmd_radius(args: &RadiusArgs) -> CmdResult {
    let f = load_map(&args.function)?;
    if !(args.tol > 0.0 && args.tol < 0.1) {
        return Err(UsageError(format!(
            "--tol must lie in (0, 0.1), got {}",
            args.tol
        )));
    }
    let mut config = RadiusConfig {
        tol: args.tol,
        ..RadiusConfig::default()
    };
    if let Some(n) = args.grid_angular {
        if n < 16 {
            return Err(UsageError("--grid-angular must be at least 16".into()));
        }
        config.angles = n;
    }
    let outcome = match criterion(&args.frame)? {
        Criterion::Spiral(frame) => find_radius_with(&f, &frame, &config)?,
        Criterion::Strong(alpha) => find_radius_strong_with(&f, alpha, &config)?,
    };
    let text = match args.output.format.unwrap_or(Format::Text) {
        Format::Text => format!("function: {}\n{}", f.name(), outcome.report()),
        Format::Csv => {
            let mut buf = Vec::new();
            outcome.write_csv(&mut buf)?;
            String::from_utf8(buf).expect("ascii")
        }
        Format::Svg => return Err(UsageError("radius supports --format text or csv".into())),
    };
    Ok((EXIT_PASS, Output::emit(text, &args.output.out)))
}

fn cmd_bounds(args: &BoundsArgs) -> CmdResult {
    let alphas = match args.alpha {
        Some(a) => vec![a],
        None => crate::bounds::alpha_grid(),
    };
    for &a in &alphas {
        crate::bounds::AlphaParam::new(a)?;
    }
    let text = match args.output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            write_bounds_csv(&mut buf, &alphas, args.n).map_err(|e| UsageError(e.to_string()))?;
            String::from_utf8(buf).expect("ascii")
        }
        Format::Text => {
            let mut t = String::new();
            for &a in &alphas {
                let row = crate::bounds::bounds_row(a, args.n)?;
                let _ = writeln!(
                    t,
                    "alpha={} M={} N={} N/M={} N<=2piM={}",
                    fmt9(a),
                    fmt9(row.m),
                    fmt9(row.n),
                    fmt9(row.ratio),
                    row.ratio <= 2.0 * std::f64::consts::PI
                );
            }
            t
        }
        Format::Svg => return Err(UsageError("bounds supports --format csv or text".into())),
    };
    Ok((EXIT_PASS, Output::emit(text, &args.output.out)))
}

fn cmd_figure1(args: &Figure1Args) -> CmdResult {
    let rows = figure1_rows()?;
    let out = Output {
        stdout: format!(
            "wrote {} and {} ({} points)\n",
            args.out.join("figure1.csv").display(),
            args.out.join("figure1.svg").display(),
            rows.len()
        ),
        files: vec![
            (args.out.join("figure1.csv"), figure1_csv(&rows)),
            (args.out.join("figure1.svg"), figure1_svg(&rows)),
        ],
    };
    Ok((EXIT_PASS, out))
}

fn cmd_convtest(args: &ConvtestArgs) -> CmdResult {
    let f = load_map(&args.function)?;
    let c = criterion(&args.frame)?;
    let grid = args.grid.grid();
    let mut text = format!("function: {}\ngrid: {}\n", f.name(), grid.describe());
    let mut violated = false;
    for frame in frames(&c)? {
        match convolution_scan(&f, &frame, &grid)? {
            Some(z) => {
                violated = true;
                let _ = writeln!(
                    text,
                    "lambda {}: VIOLATED at z = {} {}",
                    fmt9(frame.lambda()),
                    fmt9(z.re),
                    fmt9(z.im)
                );
            }
            None => {
                let _ = writeln!(text, "lambda {}: zero-free on grid", fmt9(frame.lambda()));
            }
        }
    }

    // series against direct evaluation at random points, |z| ≤ 0.9
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let frame_list = frames(&c)?;
    let mut worst: f64 = 0.0;
    for k in 0..16 {
        let z = Complex64::from_polar(
            0.9 * rng.gen::<f64>().sqrt(),
            rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
        );
        let zeta = Complex64::from_polar(
            1.0,
            rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
        );
        let frame = frame_list[k % frame_list.len()];
        let diff = (convolution_test_series(&f, &frame, zeta, z)
            - convolution_direct(&f, &frame, zeta, z))
        .norm();
        worst = worst.max(diff);
    }
    let _ = writeln!(
        text,
        "series_vs_direct_max: {} ({} at {:e}, seed {})",
        fmt9(worst),
        if worst <= CONVOLUTION_AGREEMENT {
            "agree"
        } else {
            "exceeds"
        },
        CONVOLUTION_AGREEMENT,
        args.seed
    );
    let _ = writeln!(text, "status: {}", if violated { "FAIL" } else { "PASS" });
    let code = if violated { EXIT_FAIL } else { EXIT_PASS };
    Ok((code, Output::emit(text, &args.output.out)))
}

fn cmd_plot_domain(args: &PlotArgs) -> CmdResult {
    let f = load_map(&args.function)?;
    if args.radii.is_empty() || args.radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
        return Err(UsageError("--radii must lie in (0, 1)".into()));
    }
    if args.vertices < 3 {
        return Err(UsageError("--vertices must be at least 3".into()));
    }
    let frame = SpiralFrame::new(args.lambda)?;
    let mut curves = Vec::new();
    let mut spirals = Vec::new();
    for &r in &args.radii {
        let curve = PolygonCurve::from_map(&f, r, args.vertices)?;
        let n = curve.vertices().len();
        for k in 0..args.spirals {
            let start = curve.vertices()[k * n / args.spirals];
            let seg = SpiralSegment::new(start, frame, 256);
            spirals.push(seg.points().map(|(_, w)| w).collect());
        }
        curves.push((r, curve));
    }
    let text = match args.output.format.unwrap_or(Format::Svg) {
        Format::Svg => domain_svg(&curves, &spirals),
        Format::Csv => domain_csv(&curves),
        Format::Text => {
            let mut t = format!("function: {}\n", f.name());
            for (r, c) in &curves {
                let min_re = c
                    .vertices()
                    .iter()
                    .map(|w| w.re)
                    .fold(f64::INFINITY, f64::min);
                let max_abs = c.vertices().iter().map(|w| w.norm()).fold(0.0, f64::max);
                // samples within 0.05 of θ = π
                let n = c.vertices().len();
                let tip_re = c
                    .vertices()
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| {
                        (std::f64::consts::TAU * *k as f64 / n as f64 - std::f64::consts::PI).abs()
                            <= 0.05
                    })
                    .map(|(_, w)| w.re)
                    .fold(f64::INFINITY, f64::min);
                let _ = writeln!(
                    t,
                    "r={} min_re={} min_re_near_pi={} max_abs={}",
                    fmt9(*r),
                    fmt9(min_re),
                    fmt9(tip_re),
                    fmt9(max_abs)
                );
            }
            t
        }
    };
    Ok((EXIT_PASS, Output::emit(text, &args.output.out)))
}

fn configure_threads() -> Result<(), UsageError> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.parse().map_err(|_| {
            UsageError(format!(
                "{THREADS_ENV} must be a positive integer, got '{v}'"
            ))
        })?;
        if n == 0 {
            return Err(UsageError(format!("{THREADS_ENV} must be positive")));
        }
        // a pool that is already running (repeated in-process calls) is kept
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    Ok(())
}

/// Parse and run; returns the exit status and the collected output.
pub fn run<I, T>(args: I) -> (i32, Output)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_USAGE,
            };
            return (
                code,
                Output {
                    stdout: e.render().to_string(),
                    files: Vec::new(),
                },
            );
        }
    };
    if let Err(e) = configure_threads() {
        return usage(e);
    }
    let result = match &cli.command {
        Command::Classify(a) => cmd_classify(a),
        Command::Radius(a) => cmd_radius(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Figure1(a) => cmd_figure1(a),
        Command::Convtest(a) => cmd_convtest(a),
        Command::PlotDomain(a) => cmd_plot_domain(a),
    };
    match result {
        Ok(r) => r,
        Err(e) => usage(e),
    }
}

fn usage(e: UsageError) -> (i32, Output) {
    (
        EXIT_USAGE,
        Output {
            stdout: format!("error: {}\n", e.0),
            files: Vec::new(),
        },
    )
}

fn write_file(path: &Path, text: &str) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    fs::write(path, text)
}

/// Entry point of the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (code, out) = run(args);
    for (path, text) in &out.files {
        if let Err(e) = write_file(path, text) {
            eprintln!("error: {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }
    if code == EXIT_USAGE {
        let _ = std::io::stderr().write_all(out.stdout.as_bytes());
    } else {
        let mut stdout = std::io::stdout().lock();
        let _ = stdout.write_all(out.stdout.as_bytes());
        let _ = stdout.flush();
    }
    code
}
