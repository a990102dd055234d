//! Command-line front end.
//!
//! Every subcommand validates its arguments, checks the work budget, computes
//! one object, writes it atomically and prints a one-line JSON summary on
//! standard output. Exit codes: 0 success, 1 I/O failure, 2 argument error,
//! 3 budget exceeded.

use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::fields::{self, BoolField, ScalarField, SliceAxis};
use crate::grid::GridSpec;
use crate::io;
use crate::julia::{self, Connectivity};
use crate::msets::{self, Budget, CriticalMode};
use crate::orbit::{ComplexValue, ParamPair};
use crate::templates::{self, RandomTemplateSpec, TemplateRoot, MAX_DEPTH};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// A complex number written `re,im`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexArg(pub ComplexValue);

impl FromStr for ComplexArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (re, im) = s
            .split_once(',')
            .ok_or_else(|| format!("expected re,im, got {s:?}"))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("bad number {t:?} in {s:?}"))
        };
        Ok(ComplexArg(ComplexValue::new(parse(re)?, parse(im)?)))
    }
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(',')
        .ok_or_else(|| format!("expected lo,hi, got {s:?}"))?;
    let lo: f64 = lo.trim().parse().map_err(|_| format!("bad bound {lo:?}"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("bad bound {hi:?}"))?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(format!("range {s:?} must be finite and increasing"));
    }
    Ok((lo, hi))
}

fn parse_depth(s: &str) -> Result<u32, String> {
    let n: u32 = s.parse().map_err(|_| format!("bad depth {s:?}"))?;
    if n > MAX_DEPTH {
        return Err(format!("depth {n} exceeds the cap of {MAX_DEPTH}"));
    }
    Ok(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Regular,
    Multicritical,
}

impl From<ModeArg> for CriticalMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Regular => CriticalMode::Regular,
            ModeArg::Multicritical => CriticalMode::Multicritical,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConnectivityArg {
    Four,
    Eight,
}

impl From<ConnectivityArg> for Connectivity {
    fn from(c: ConnectivityArg) -> Self {
        match c {
            ConnectivityArg::Four => Connectivity::Four,
            ConnectivityArg::Eight => Connectivity::Eight,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Pgm,
    Png,
    Txt,
}

impl Format {
    fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            "pgm" => Some(Format::Pgm),
            "png" => Some(Format::Png),
            "txt" => Some(Format::Txt),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Worker threads; 0 picks one per core.
    #[arg(long, env = "TEMPLATE_MSET_THREADS", default_value_t = 0, global = true)]
    pub threads: usize,

    /// Maximum estimated orbit steps (cells * 2^N * N before pruning).
    #[arg(long, default_value_t = 10_000_000_000, global = true)]
    pub budget: u64,

    /// Maximum root depth for enumeration.
    #[arg(long, default_value_t = 24, value_parser = parse_depth, global = true)]
    pub max_depth: u32,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Output {
    /// Output file.
    #[arg(long)]
    pub out: PathBuf,

    /// Output format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl Output {
    fn format(&self, default: Format) -> Format {
        self.format
            .or_else(|| Format::from_path(&self.out))
            .unwrap_or(default)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PairDepth {
    #[arg(long, allow_hyphen_values = true)]
    #[serde(serialize_with = "ser_complex")]
    pub c0: ComplexArg,

    #[arg(long, allow_hyphen_values = true)]
    #[serde(serialize_with = "ser_complex")]
    pub c1: ComplexArg,

    #[arg(long, value_parser = parse_depth)]
    pub depth: u32,

    #[arg(long, value_enum, default_value_t = ModeArg::Regular)]
    pub mode: ModeArg,
}

impl PairDepth {
    fn pair(&self) -> ParamPair {
        ParamPair::new(self.c0.0, self.c1.0)
    }
}

/// A root given literally or drawn at random.
#[derive(Debug, Clone, Args, Serialize)]
pub struct RootArg {
    /// Root literal, e.g. `0110`; first bit applied first.
    #[arg(long, conflicts_with_all = ["p", "len", "seed"])]
    pub root: Option<String>,

    /// Probability of a 1 bit for a random root.
    #[arg(long)]
    pub p: Option<f64>,

    /// Length of a random root.
    #[arg(long)]
    pub len: Option<usize>,

    /// Seed of a random root.
    #[arg(long)]
    pub seed: Option<u64>,
}

impl RootArg {
    fn resolve(&self) -> Result<TemplateRoot, Error> {
        match &self.root {
            Some(bits) => bits.parse(),
            None => {
                let spec = RandomTemplateSpec::new(
                    self.p.unwrap_or(0.5),
                    self.len.unwrap_or(50),
                    self.seed.unwrap_or(0),
                )?;
                Ok(templates::random_root(&spec))
            }
        }
    }
}

fn ser_complex<S: serde::Serializer>(c: &ComplexArg, s: S) -> Result<S::Ok, S::Error> {
    [c.0.re, c.0.im].serialize(s)
}

fn ser_opt_complex<S: serde::Serializer>(c: &Option<ComplexArg>, s: S) -> Result<S::Ok, S::Error> {
    c.map(|c| [c.0.re, c.0.im]).serialize(s)
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LoglogArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub set: PairDepth,

    /// Also emit lengths with no plateau, at log(0 + 1) = 0.
    #[arg(long)]
    pub include_unrepresented: bool,

    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SetArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub set: PairDepth,

    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HybridArgs {
    #[arg(long, allow_hyphen_values = true)]
    #[serde(serialize_with = "ser_complex")]
    pub c0: ComplexArg,

    /// c1 grid: re_min,re_max,im_min,im_max,cols,rows
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: GridSpec,

    #[arg(long, default_value_t = 20, value_parser = parse_depth)]
    pub depth: u32,

    #[arg(long, value_enum, default_value_t = ModeArg::Regular)]
    pub mode: ModeArg,

    /// Emit the central plateau (value exactly 1) instead of the field.
    #[arg(long)]
    pub plateau: bool,

    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ContourArgs {
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid_c0: GridSpec,

    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid_c1: GridSpec,

    #[arg(long, default_value_t = 8, value_parser = parse_depth)]
    pub depth: u32,

    #[arg(long, value_enum, default_value_t = ModeArg::Regular)]
    pub mode: ModeArg,

    #[arg(long)]
    pub plateau: bool,

    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MultiArgs {
    /// Fix c0 and sweep c1 over the grid.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["fix_c1", "line"])]
    #[serde(serialize_with = "ser_opt_complex")]
    pub fix_c0: Option<ComplexArg>,

    /// Fix c1 and sweep c0 over the grid.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "line")]
    #[serde(serialize_with = "ser_opt_complex")]
    pub fix_c1: Option<ComplexArg>,

    /// 3D mode: Re(c0) range `lo,hi`; emits voxels over the c1 grid.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub line: Option<(f64, f64)>,

    /// Im(c0) along the 3D line.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub im_offset: f64,

    /// Samples of Re(c0) along the 3D line.
    #[arg(long, default_value_t = 16)]
    pub samples: usize,

    /// Grid of the free parameter (c1 in 3D mode).
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: GridSpec,

    #[arg(long, default_value_t = 8, value_parser = parse_depth)]
    pub depth: u32,

    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ClassicalArgs {
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: GridSpec,

    #[arg(long, default_value_t = 20)]
    pub iters: usize,

    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct JuliaMaskArgs {
    #[arg(long, allow_hyphen_values = true)]
    #[serde(serialize_with = "ser_complex")]
    pub c0: ComplexArg,

    #[arg(long, allow_hyphen_values = true)]
    #[serde(serialize_with = "ser_complex")]
    pub c1: ComplexArg,

    #[command(flatten)]
    #[serde(flatten)]
    pub root: RootArg,

    /// z grid; defaults to 501x501 over [-R_e - 0.1, R_e + 0.1]^2.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: Option<GridSpec>,

    #[arg(long, value_enum, default_value_t = ConnectivityArg::Four)]
    pub connectivity: ConnectivityArg,

    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct JuliaConnectArgs {
    #[arg(long, allow_hyphen_values = true)]
    #[serde(serialize_with = "ser_complex")]
    pub c0: ComplexArg,

    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub c1_grid: GridSpec,

    #[command(flatten)]
    #[serde(flatten)]
    pub root: RootArg,

    /// z grid; defaults to 501x501 over [-R - 0.1, R + 0.1]^2 with R the
    /// largest escape radius over the c1 grid.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub z_grid: Option<GridSpec>,

    #[arg(long, value_enum, default_value_t = ConnectivityArg::Four)]
    pub connectivity: ConnectivityArg,

    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RandomRootArgs {
    #[arg(long)]
    pub p: f64,

    #[arg(long)]
    pub len: usize,

    #[arg(long)]
    pub seed: u64,

    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Member indices of the N-rooted fixed-map set.
    FixedMap(SetArgs),
    /// Accumulation map sampled at its breakpoints.
    Accum(SetArgs),
    /// Plateau-length histogram of the accumulation map.
    Plateaus(SetArgs),
    /// Log-log plateau statistics.
    Loglog(LoglogArgs),
    /// Root hybrid set over a c1 grid.
    Hybrid(HybridArgs),
    /// Contour set over a c0 grid.
    Contour(ContourArgs),
    /// Multi-Mandelbrot slices.
    Multi(MultiArgs),
    /// Truncated classical Mandelbrot mask.
    Classical(ClassicalArgs),
    /// Filled Julia set mask for one pair and root.
    JuliaMask(JuliaMaskArgs),
    /// Julia component counts over a c1 grid.
    JuliaConnect(JuliaConnectArgs),
    /// Seeded random template root.
    RandomRoot(RandomRootArgs),
}

#[derive(Debug, Parser)]
#[command(name = "template-mset", version, about = "Mandelbrot-type sets for template iterations of two quadratic maps")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,

    #[command(subcommand)]
    pub command: Command,
}

/// One-line machine-readable run summary.
#[derive(Debug, Serialize)]
pub struct Summary {
    pub subcommand: &'static str,
    pub params: Value,
    pub elapsed_ms: u128,
    pub output_files: Vec<PathBuf>,
    pub headline_value: Value,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Budget(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Budget(_) => EXIT_BUDGET,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Budget(m) => write!(f, "error: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            Error::Io(_) | Error::Image(_) => CliError::Io(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

/// Encoded output ready to be written.
enum Payload {
    Text(String),
    Bytes(Vec<u8>),
}

fn unsupported(kind: &str, format: Format) -> CliError {
    CliError::Usage(format!("{kind} output cannot be written as {format:?}"))
}

fn encode_scalar(field: &ScalarField, format: Format) -> Result<Payload, CliError> {
    Ok(match format {
        Format::Csv => Payload::Text(io::scalar_field_csv(field)),
        Format::Json => Payload::Text(json!({"grid": field.grid, "data": field.data}).to_string()),
        Format::Pgm => Payload::Bytes(io::pgm(&field.grid, &io::scalar_gray(field))),
        Format::Png => Payload::Bytes(io::png(&field.grid, &io::scalar_gray(field))?),
        Format::Txt => return Err(unsupported("field", format)),
    })
}

fn encode_bool(field: &BoolField, format: Format) -> Result<Payload, CliError> {
    Ok(match format {
        Format::Csv => Payload::Text(io::bool_field_csv(field)),
        Format::Json => Payload::Text(json!({"grid": field.grid, "data": field.data}).to_string()),
        Format::Pgm => Payload::Bytes(io::pgm(&field.grid, &io::bool_gray(field))),
        Format::Png => Payload::Bytes(io::png(&field.grid, &io::bool_gray(field))?),
        Format::Txt => return Err(unsupported("mask", format)),
    })
}

fn write_payload(path: &Path, payload: Payload) -> Result<(), CliError> {
    let bytes = match payload {
        Payload::Text(s) => s.into_bytes(),
        Payload::Bytes(b) => b,
    };
    io::write_atomic(path, &bytes).map_err(CliError::from)
}

fn budget_of(common: &Common) -> Budget {
    Budget {
        max_depth: common.max_depth,
        max_steps: common.budget,
    }
}

fn default_z_grid(radius: f64) -> GridSpec {
    GridSpec::centered_square(radius + 0.1, 501).expect("positive radius")
}

fn headline_stats(field: &ScalarField) -> f64 {
    field.max()
}

fn execute(top: Cli) -> Result<Summary, CliError> {
    let start = Instant::now();
    let budget = budget_of(&top.common);
    let threads = top.common.threads;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {threads} workers: {e}")))?;

    let (subcommand, params, out, headline, payload) = pool.install(|| dispatch(&top.command, &budget))?;
    write_payload(&out, payload)?;

    Ok(Summary {
        subcommand,
        params,
        elapsed_ms: start.elapsed().as_millis(),
        output_files: vec![out],
        headline_value: headline,
    })
}

type Dispatched = (&'static str, Value, PathBuf, Value, Payload);

fn params<T: Serialize>(args: &T, budget: &Budget) -> Value {
    let mut v = serde_json::to_value(args).unwrap_or(Value::Null);
    if let Value::Object(map) = &mut v {
        map.insert("budget".into(), json!(budget.max_steps));
        map.insert("max_depth".into(), json!(budget.max_depth));
    }
    v
}

fn dispatch(command: &Command, budget: &Budget) -> Result<Dispatched, CliError> {
    match command {
        Command::FixedMap(a) => {
            let set = msets::fixed_map_set(&a.set.pair(), a.set.depth, a.set.mode.into(), budget)?;
            let payload = match a.output.format(Format::Csv) {
                Format::Csv => Payload::Text(io::interval_set_csv(&set)),
                Format::Json => Payload::Text(json!({"depth": set.depth(), "members": set.members()}).to_string()),
                f => return Err(unsupported("interval set", f)),
            };
            Ok(("fixed-map", params(a, budget), a.output.out.clone(), json!(set.measure()), payload))
        }
        Command::Accum(a) => {
            let set = msets::fixed_map_set(&a.set.pair(), a.set.depth, a.set.mode.into(), budget)?;
            let f = msets::accumulation_map(&set);
            let payload = match a.output.format(Format::Csv) {
                Format::Csv => Payload::Text(io::step_function_csv(&f)),
                Format::Json => Payload::Text(
                    json!({
                        "depth": f.depth(),
                        "t": f.breakpoints().collect::<Vec<_>>(),
                        "phi": f.values().collect::<Vec<_>>(),
                    })
                    .to_string(),
                ),
                fmt => return Err(unsupported("accumulation map", fmt)),
            };
            let end = f.value(f.len() - 1);
            Ok(("accum", params(a, budget), a.output.out.clone(), json!(end), payload))
        }
        Command::Plateaus(a) => {
            let set = msets::fixed_map_set(&a.set.pair(), a.set.depth, a.set.mode.into(), budget)?;
            let h = msets::plateau_histogram(&msets::accumulation_map(&set));
            let payload = match a.output.format(Format::Csv) {
                Format::Csv => Payload::Text(io::histogram_csv(&h)),
                Format::Json => Payload::Text(
                    json!({"depth": h.depth, "counts": h.counts.iter().collect::<Vec<_>>()}).to_string(),
                ),
                f => return Err(unsupported("histogram", f)),
            };
            let plateaus: u64 = h.counts.values().sum();
            Ok(("plateaus", params(a, budget), a.output.out.clone(), json!(plateaus), payload))
        }
        Command::Loglog(a) => {
            let set = msets::fixed_map_set(&a.set.pair(), a.set.depth, a.set.mode.into(), budget)?;
            let h = msets::plateau_histogram(&msets::accumulation_map(&set));
            let points = msets::loglog_points(&h, a.include_unrepresented);
            let payload = match a.output.format(Format::Csv) {
                Format::Csv => Payload::Text(io::loglog_csv(&points)),
                Format::Json => Payload::Text(json!({"depth": h.depth, "points": points}).to_string()),
                f => return Err(unsupported("log-log points", f)),
            };
            Ok(("loglog", params(a, budget), a.output.out.clone(), json!(points.len()), payload))
        }
        Command::Hybrid(a) => {
            let field = fields::hybrid_field(a.c0.0, &a.grid, a.depth, a.mode.into(), budget)?;
            let headline = json!(headline_stats(&field));
            let format = a.output.format(Format::Csv);
            let payload = if a.plateau {
                encode_bool(&fields::central_plateau(&field), format)?
            } else {
                encode_scalar(&field, format)?
            };
            Ok(("hybrid", params(a, budget), a.output.out.clone(), headline, payload))
        }
        Command::Contour(a) => {
            let field = fields::contour_field(&a.grid_c0, &a.grid_c1, a.depth, a.mode.into(), budget)?;
            let headline = json!(headline_stats(&field));
            let format = a.output.format(Format::Csv);
            let payload = if a.plateau {
                encode_bool(&fields::central_plateau(&field), format)?
            } else {
                encode_scalar(&field, format)?
            };
            Ok(("contour", params(a, budget), a.output.out.clone(), headline, payload))
        }
        Command::Multi(a) => {
            let format = a.output.format(Format::Csv);
            if let Some((lo, hi)) = a.line {
                if a.samples == 0 {
                    return Err(CliError::Usage("--samples must be at least 1".into()));
                }
                let voxels = fields::multi_mandelbrot_voxels((lo, hi), a.samples, a.im_offset, &a.grid, a.depth, budget)?;
                let payload = match format {
                    Format::Csv => Payload::Text(io::voxels_csv(&voxels)),
                    Format::Json => Payload::Text(json!({"voxels": voxels}).to_string()),
                    f => return Err(unsupported("voxel list", f)),
                };
                return Ok(("multi", params(a, budget), a.output.out.clone(), json!(voxels.len()), payload));
            }
            let axis = match (a.fix_c0, a.fix_c1) {
                (Some(c), None) => SliceAxis::C0 { re: c.0.re, im: c.0.im },
                (None, Some(c)) => SliceAxis::C1 { re: c.0.re, im: c.0.im },
                _ => {
                    return Err(CliError::Usage(
                        "multi needs exactly one of --fix-c0, --fix-c1 or --line".into(),
                    ))
                }
            };
            let slice = fields::multi_mandelbrot_slice(axis, &a.grid, a.depth, budget)?;
            let payload = encode_bool(&slice, format)?;
            Ok(("multi", params(a, budget), a.output.out.clone(), json!(slice.count_true()), payload))
        }
        Command::Classical(a) => {
            budget.check_steps(a.grid.len() as u128 * a.iters as u128, 0)?;
            let mask = fields::classical_mandelbrot_mask(&a.grid, a.iters);
            let payload = encode_bool(&mask, a.output.format(Format::Csv))?;
            let fraction = mask.count_true() as f64 / mask.grid.len() as f64;
            Ok(("classical", params(a, budget), a.output.out.clone(), json!(fraction), payload))
        }
        Command::JuliaMask(a) => {
            let pair = ParamPair::new(a.c0.0, a.c1.0);
            let root = a.root.resolve()?;
            let grid = a.grid.unwrap_or_else(|| default_z_grid(pair.escape_radius()));
            budget.check_steps(grid.len() as u128 * root.len() as u128, 0)?;
            let mask = julia::julia_mask(&pair, &root, &grid)?;
            let count = julia::component_count(mask.field(), a.connectivity.into());
            let payload = encode_bool(mask.field(), a.output.format(Format::Pgm))?;
            let mut p = params(a, budget);
            p["root"] = json!(root.to_string());
            p["grid"] = json!(grid);
            Ok(("julia-mask", p, a.output.out.clone(), json!(count), payload))
        }
        Command::JuliaConnect(a) => {
            let root = a.root.resolve()?;
            let radius = a
                .c1_grid
                .points()
                .map(|c1| ParamPair::new(a.c0.0, c1).escape_radius())
                .fold(2.0, f64::max);
            let z_grid = a.z_grid.unwrap_or_else(|| default_z_grid(radius));
            let estimate = a.c1_grid.len() as u128 * z_grid.len() as u128 * root.len() as u128;
            budget.check_steps(estimate, 0)?;
            let field = julia::connectedness_field(a.c0.0, &a.c1_grid, &root, &z_grid, a.connectivity.into())?;
            let connected = field.data.iter().filter(|&&v| v == 1.0).count();
            let payload = match a.output.format(Format::Csv) {
                Format::Csv => Payload::Text(io::scalar_field_csv(&field)),
                Format::Json => Payload::Text(json!({"grid": field.grid, "data": field.data}).to_string()),
                f => return Err(unsupported("component-count field", f)),
            };
            let mut p = params(a, budget);
            p["root"] = json!(root.to_string());
            p["z_grid"] = json!(z_grid);
            Ok(("julia-connect", p, a.output.out.clone(), json!(connected), payload))
        }
        Command::RandomRoot(a) => {
            let spec = RandomTemplateSpec::new(a.p, a.len, a.seed)?;
            budget.check_steps(a.len as u128, 0)?;
            let root = templates::random_root(&spec);
            let payload = match a.output.format(Format::Txt) {
                Format::Txt => Payload::Text(format!("{root}\n")),
                Format::Json => Payload::Text(
                    json!({"p": a.p, "len": a.len, "seed": a.seed, "root": root.to_string()}).to_string(),
                ),
                f => return Err(unsupported("root", f)),
            };
            let ones = if root.is_empty() {
                0.0
            } else {
                root.count_ones() as f64 / root.len() as f64
            };
            Ok(("random-root", params(a, budget), a.output.out.clone(), json!(ones), payload))
        }
    }
}

/// Parses `argv` (including the program name), runs one subcommand and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let top = match Cli::try_parse_from(argv) {
        Ok(top) => top,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(top) {
        Ok(summary) => {
            println!("{}", serde_json::to_string(&summary).expect("summary serializes"));
            EXIT_OK
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
