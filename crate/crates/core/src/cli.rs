//! Command-line front end. Data goes to `--out` (written atomically) or
//! stdout; diagnostics go to stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dm::{trace_dm_region, Bound, Cardinalities, OuterFactorization, TraceOptions};
use crate::gaussian::{
    bhaskaran_region, type1_region, type2_region, type3_region, GaussianParams, Type1Aux, Type2Aux,
    DEFAULT_GRID_1D, DEFAULT_GRID_4D,
};
use crate::geometry::{
    fm_eliminate_all, remove_redundant, subset_check, type1_split_system, type2_system, LinearSystem, RatePair,
    RateRegion,
};
use crate::info::{classify_dm_degradation, DegradationType, DiscreteChannel, Pmf};
use crate::sim::{simulate, sweep_csv, sweep_rates, SimAux, SimConfig};

pub const BUDGET_ENV: &str = "PDRBC_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "pdrbc", version, about = "Rate regions and coding simulations for degraded relay broadcast channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Trace a Gaussian region and print its frontier CSV.
    RegionGaussian(RegionGaussianArgs),
    /// Trace a discrete-memoryless region from a channel JSON file.
    RegionDm(RegionDmArgs),
    /// Report which degradation order a channel satisfies.
    Classify(ClassifyArgs),
    /// Fourier-Motzkin elimination on a linear system JSON file.
    Fm(FmArgs),
    /// Monte Carlo simulation of a coding scheme.
    Simulate(SimulateArgs),
    /// Support-function subset test a ⊆ b.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GaussianKind {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    Bhaskaran,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundArg {
    Inner,
    Outer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FactorizationArg {
    Theorem,
    Derived,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BuiltinSystem {
    Type1Split,
    Type2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FmFormat {
    Json,
    Text,
}

#[derive(Args, Debug, Clone)]
struct Power {
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[arg(long, default_value_t = 1.0)]
    pr: f64,
    #[arg(long)]
    s1: Option<f64>,
    #[arg(long)]
    s2: Option<f64>,
    /// Relay noise; defaults to s2 when only Type III is asked for.
    #[arg(long)]
    s3: Option<f64>,
}

#[derive(Args, Debug)]
struct RegionGaussianArgs {
    #[arg(long = "type", value_enum)]
    kind: GaussianKind,
    #[command(flatten)]
    power: Power,
    /// Points per parameter axis (41 for one- or two-parameter sweeps, 21 for Type I).
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RegionDmArgs {
    #[arg(long)]
    channel: PathBuf,
    #[arg(long = "type", value_enum)]
    kind: SchemeArg,
    #[arg(long, value_enum, default_value = "inner")]
    bound: BoundArg,
    #[arg(long, default_value_t = 4)]
    resolution: usize,
    #[arg(long)]
    card_u: Option<usize>,
    #[arg(long)]
    card_v: Option<usize>,
    #[arg(long, value_enum, default_value = "derived")]
    outer_factorization: FactorizationArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long)]
    channel: PathBuf,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FmArgs {
    #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
    system: Option<PathBuf>,
    #[arg(long, value_enum)]
    builtin: Option<BuiltinSystem>,
    /// Comma-separated variables, eliminated left to right.
    #[arg(long, value_delimiter = ',')]
    eliminate: Vec<String>,
    /// Keep rows implied by other rows.
    #[arg(long)]
    raw: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: FmFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    #[command(flatten)]
    power: Power,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long = "theta-r")]
    theta_r: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    r1: f64,
    #[arg(long, default_value_t = 0.0)]
    r2: f64,
    /// Cloud share R1' of R1 (Type I); the rest is R1''.
    #[arg(long)]
    r1p: Option<f64>,
    #[arg(long, default_value_t = 32)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    blocks: usize,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Rate pairs "r1:r2,r1:r2,..." to sweep instead of --r1/--r2.
    #[arg(long)]
    sweep: Option<String>,
    /// Sweep summary CSV path.
    #[arg(long, requires = "sweep")]
    csv: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// Region CSV path, or builtin:{type1,bhaskaran,type2,type3}.
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    #[command(flatten)]
    power: Power,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long, default_value_t = 64)]
    directions: usize,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Domain(String),
}

type Outcome = Result<(), Failure>;

fn domain<E: std::fmt::Display>(op: &'static str) -> impl FnOnce(E) -> Failure {
    move |e| Failure::Domain(format!("{op}: {e}"))
}

fn read(path: &Path, op: &'static str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{op}: cannot read {}: {e}", path.display())))
}

/// Writes `text` to `out` through a temp file in the same directory, or to stdout.
fn emit(out: Option<&Path>, text: &str) -> Outcome {
    let io = |e: std::io::Error| Failure::Domain(format!("write output: {e}"));
    match out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(io)?;
            stdout.flush().map_err(io)
        }
        Some(path) => {
            let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
            tmp.write_all(text.as_bytes()).map_err(io)?;
            tmp.persist(path).map_err(|e| io(e.error))?;
            Ok(())
        }
    }
}

fn gaussian_params(power: &Power, s3_fallback: bool) -> Result<GaussianParams, Failure> {
    let need = |v: Option<f64>, flag: &str| v.ok_or_else(|| Failure::Usage(format!("--{flag} is required")));
    let s1 = need(power.s1, "s1")?;
    let s2 = need(power.s2, "s2")?;
    let s3 = match power.s3 {
        Some(s) => s,
        None if s3_fallback => s2,
        None => return Err(Failure::Usage("--s3 is required".into())),
    };
    GaussianParams::new(power.p, power.pr, s1, s2, s3).map_err(domain("gaussian parameters"))
}

fn gaussian_region(kind: GaussianKind, p: &GaussianParams, grid: Option<usize>) -> Result<RateRegion, Failure> {
    let op = "trace region";
    match kind {
        GaussianKind::One => type1_region(p, grid.unwrap_or(DEFAULT_GRID_4D)).map_err(domain(op)),
        GaussianKind::Bhaskaran => bhaskaran_region(p, grid.unwrap_or(DEFAULT_GRID_1D)).map_err(domain(op)),
        GaussianKind::Two => type2_region(p, grid.unwrap_or(DEFAULT_GRID_1D)).map_err(domain(op)),
        GaussianKind::Three => type3_region(p, grid.unwrap_or(DEFAULT_GRID_1D)).map_err(domain(op)),
    }
}

fn region_gaussian(a: RegionGaussianArgs) -> Outcome {
    let p = gaussian_params(&a.power, a.kind == GaussianKind::Three)?;
    let region = gaussian_region(a.kind, &p, a.grid)?;
    emit(a.out.as_deref(), &region.to_csv())
}

fn budget() -> Result<u64, Failure> {
    parse_budget(std::env::var(BUDGET_ENV).ok().as_deref())
}

fn parse_budget(raw: Option<&str>) -> Result<u64, Failure> {
    let Some(raw) = raw else {
        return Ok(crate::dm::DEFAULT_BUDGET);
    };
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("{BUDGET_ENV}={raw:?} is not a number")))?;
    if !(v >= 1.0 && v.is_finite()) {
        return Err(Failure::Usage(format!("{BUDGET_ENV}={raw:?} must be a positive count")));
    }
    Ok(v as u64)
}

fn channel(path: &Path, op: &'static str) -> Result<DiscreteChannel, Failure> {
    DiscreteChannel::from_json(&read(path, op)?).map_err(domain(op))
}

fn region_dm(a: RegionDmArgs) -> Outcome {
    let ch = channel(&a.channel, "read channel")?;
    let defaults = Cardinalities::default_for(ch.sizes());
    let opts = TraceOptions {
        cards: Cardinalities {
            u: a.card_u.unwrap_or(defaults.u),
            v: a.card_v.unwrap_or(defaults.v),
        },
        resolution: a.resolution,
        outer: match a.outer_factorization {
            FactorizationArg::Theorem => OuterFactorization::Theorem,
            FactorizationArg::Derived => OuterFactorization::Derived,
        },
        budget: budget()?,
    };
    let ty = match a.kind {
        SchemeArg::One => DegradationType::TypeI,
        SchemeArg::Two => DegradationType::TypeII,
        SchemeArg::Three => DegradationType::TypeIII,
    };
    let bound = match a.bound {
        BoundArg::Inner => Bound::Inner,
        BoundArg::Outer => Bound::Outer,
    };
    let region = trace_dm_region(&ch, ty, bound, &opts).map_err(domain("trace_dm_region"))?;
    emit(a.out.as_deref(), &region.to_csv())
}

fn classify(a: ClassifyArgs) -> Outcome {
    let op = "classify_dm_degradation";
    let ch = channel(&a.channel, "read channel")?;
    let s = ch.sizes();
    let c = classify_dm_degradation(&ch, &Pmf::uniform(&[s.x, s.x3]), a.tol).map_err(domain(op))?;
    let mut text = format!("{}\n", c.tag);
    for (name, d) in ["TypeI", "TypeII", "TypeIII"].iter().zip(&c.deviations) {
        text.push_str(&format!("{name} deviations {:.3e} {:.3e}\n", d[0], d[1]));
    }
    emit(a.out.as_deref(), &text)
}

fn fm(a: FmArgs) -> Outcome {
    let op = "fm_eliminate";
    let sys = match (&a.system, a.builtin) {
        (Some(path), _) => LinearSystem::from_json(&read(path, op)?).map_err(domain(op))?,
        (None, Some(BuiltinSystem::Type1Split)) => type1_split_system(),
        (None, Some(BuiltinSystem::Type2)) => type2_system(),
        (None, None) => return Err(Failure::Usage("--system or --builtin is required".into())),
    };
    let vars: Vec<&str> = a.eliminate.iter().map(String::as_str).filter(|v| !v.is_empty()).collect();
    let mut out = fm_eliminate_all(&sys, &vars).map_err(domain(op))?;
    if !a.raw {
        out = remove_redundant(&out);
    }
    let text = match a.format {
        FmFormat::Json => {
            let mut s = serde_json::to_string_pretty(&out.to_json()).map_err(domain(op))?;
            s.push('\n');
            s
        }
        FmFormat::Text => format!("{out}\n"),
    };
    emit(a.out.as_deref(), &text)
}

fn parse_sweep(raw: &str) -> Result<Vec<RatePair>, Failure> {
    raw.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|pair| {
            let bad = || Failure::Usage(format!("--sweep: expected r1:r2, found {pair:?}"));
            let (a, b) = pair.split_once(':').ok_or_else(bad)?;
            let r1: f64 = a.trim().parse().map_err(|_| bad())?;
            let r2: f64 = b.trim().parse().map_err(|_| bad())?;
            Ok(RatePair { r1, r2 })
        })
        .collect()
}

fn simulate_cmd(a: SimulateArgs) -> Outcome {
    let op = "simulation";
    let params = gaussian_params(&a.power, a.scheme == SchemeArg::Three)?;
    let need = |v: Option<f64>, flag: &str| {
        v.ok_or_else(|| Failure::Usage(format!("--{flag} is required for this scheme")))
    };
    let aux = match a.scheme {
        SchemeArg::One => SimAux::Type1(
            Type1Aux::new(
                need(a.alpha, "alpha")?,
                need(a.beta, "beta")?,
                need(a.theta, "theta")?,
                need(a.theta_r, "theta-r")?,
            )
            .map_err(domain(op))?,
        ),
        SchemeArg::Two => {
            SimAux::Type2(Type2Aux::new(need(a.alpha, "alpha")?, need(a.beta, "beta")?).map_err(domain(op))?)
        }
        SchemeArg::Three => SimAux::Type3 { alpha: need(a.alpha, "alpha")? },
    };
    if let SimAux::Type3 { alpha } = aux {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Failure::Domain(format!("{op}: alpha = {alpha} outside [0, 1]")));
        }
    }
    let cfg = SimConfig {
        params,
        aux,
        n: a.n,
        blocks: a.blocks,
        r1: a.r1,
        r2: a.r2,
        split: a.r1p.map(|r1p| (r1p, a.r1 - r1p)),
        trials: a.trials,
        seed: a.seed,
    };
    match &a.sweep {
        None => {
            let report = simulate(&cfg).map_err(domain(op))?;
            let mut s = serde_json::to_string_pretty(&report).map_err(domain(op))?;
            s.push('\n');
            emit(a.out.as_deref(), &s)
        }
        Some(raw) => {
            let points = parse_sweep(raw)?;
            let reports = sweep_rates(&cfg, &points).map_err(domain(op))?;
            if let Some(csv) = &a.csv {
                emit(Some(csv), &sweep_csv(&reports))?;
            }
            let mut s = serde_json::to_string_pretty(&reports).map_err(domain(op))?;
            s.push('\n');
            emit(a.out.as_deref(), &s)
        }
    }
}

fn compare_source(src: &str, a: &CompareArgs) -> Result<RateRegion, Failure> {
    match src.strip_prefix("builtin:") {
        Some(name) => {
            let kind = GaussianKind::from_str(name, true)
                .or_else(|_| match name {
                    "type1" => Ok(GaussianKind::One),
                    "type2" => Ok(GaussianKind::Two),
                    "type3" => Ok(GaussianKind::Three),
                    _ => Err(()),
                })
                .map_err(|_| Failure::Usage(format!("unknown builtin region {name:?}")))?;
            let p = gaussian_params(&a.power, kind == GaussianKind::Three)?;
            gaussian_region(kind, &p, a.grid)
        }
        None => RateRegion::from_csv(&read(Path::new(src), "read region")?, src).map_err(domain("parse region csv")),
    }
}

/// Prints whether region a sits inside region b.
fn compare(a: CompareArgs) -> Outcome {
    let ra = compare_source(&a.a, &a)?;
    let rb = compare_source(&a.b, &a)?;
    let r = subset_check(&ra, &rb, a.directions, a.tol).map_err(domain("subset_check"))?;
    emit(a.out.as_deref(), &format!("subset: {}, violation {}\n", r.holds, r.max_violation))
}

fn dispatch(cmd: Command) -> (&'static str, Outcome) {
    match cmd {
        Command::RegionGaussian(a) => ("region-gaussian", region_gaussian(a)),
        Command::RegionDm(a) => ("region-dm", region_dm(a)),
        Command::Classify(a) => ("classify", classify(a)),
        Command::Fm(a) => ("fm", fm(a)),
        Command::Simulate(a) => ("simulate", simulate_cmd(a)),
        Command::Compare(a) => ("compare", compare(a)),
    }
}

/// Runs one invocation, returning the exit code and the diagnostic line.
fn execute<I, T>(argv: I) -> Result<(), (i32, String)>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| (e.exit_code(), e.render().to_string()))?;
    match dispatch(cli.command) {
        (_, Ok(())) => Ok(()),
        (name, Err(Failure::Usage(msg))) => Err((2, format!("pdrbc {name}: {msg}"))),
        (name, Err(Failure::Domain(msg))) => Err((1, format!("pdrbc {name}: {msg}"))),
    }
}

/// Parses `argv` (program name first) and runs one subcommand.
/// Returns 0 on success, 1 on domain errors and 2 on usage errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match execute(argv) {
        Ok(()) => 0,
        Err((code, msg)) => {
            if code == 0 {
                print!("{msg}");
            } else {
                eprintln!("{}", msg.trim_end());
            }
            code
        }
    }
}

#[cfg(test)]
mod tests;
