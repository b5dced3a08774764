//! Command-line front end: `sample`, `cost`, `validate` and `baseline`.
//!
//! Every output starts with a `#` metadata header (or a `meta` record) that
//! records the library version, the resolved parameters, the seed and the
//! full argument list, so a run can be repeated exactly.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::anglemap::{AngleMap, Cost};
use crate::baselines::{self, ShiftedNormalSpec, ShiftedSphereSpec, WeightedBatch};
use crate::direction::{ConeSpec, Direction, HollowConeSpec};
use crate::error::Error;
use crate::output::{self, Format, Metadata, Table};
use crate::rng::RandomStream;
use crate::sampler::{CapSampler, HollowConeSampler, Method};
use crate::stats::{self, ThetaDistribution};

pub const SEED_ENV: &str = "SPHERECAP_SEED";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) => CliError::Usage(e.to_string()),
            Error::Underflow(_) | Error::Numeric(_) => CliError::Numeric(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Underflow on the inverse path is recoverable by switching generators.
fn with_method_hint(e: Error) -> CliError {
    match e {
        Error::Underflow(_) => CliError::Numeric(format!("{e} (pass `--method rejection`)")),
        other => other.into(),
    }
}

/// Parses an angle in radians. Also accepts `pi`, `pi/k` and `a*pi/k`.
pub fn parse_angle(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim().to_ascii_lowercase();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let bad = || format!("cannot parse angle {s:?}; use radians or forms like pi/4");
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim().parse::<f64>().map_err(|_| bad())?),
        None => (t.as_str(), 1.0),
    };
    let coef = match num.strip_suffix("pi") {
        Some("") => 1.0,
        Some(c) => c
            .trim_end_matches('*')
            .trim()
            .parse::<f64>()
            .map_err(|_| bad())?,
        None => return Err(bad()),
    };
    Ok(coef * std::f64::consts::PI / den)
}

#[derive(Debug, Parser)]
#[command(
    name = "spherecap",
    version,
    about = "Uniform sampling on n-dimensional spherical caps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw directions from a cap or a hollow cone.
    Sample(SampleArgs),
    /// Tabulate expected proposal counts against dimension.
    Cost(CostArgs),
    /// Compare sampled planar angles with the exact law.
    Validate(ValidateArgs),
    /// Compare a re-weighting baseline with the direct sampler.
    Baseline(BaselineArgs),
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    /// Ambient dimension n.
    #[arg(long = "dim")]
    pub dim: usize,
    /// Cap half-angle in radians.
    #[arg(long, value_parser = parse_angle)]
    pub theta0: Option<f64>,
    /// Inner angle of a hollow cone.
    #[arg(long, value_parser = parse_angle, requires = "theta2")]
    pub theta1: Option<f64>,
    /// Outer angle of a hollow cone.
    #[arg(long, value_parser = parse_angle, requires = "theta1")]
    pub theta2: Option<f64>,
    /// Inner solid angle fraction of a hollow cone.
    #[arg(long, requires = "omega2")]
    pub omega1: Option<f64>,
    /// Outer solid angle fraction of a hollow cone.
    #[arg(long, requires = "omega1")]
    pub omega2: Option<f64>,
}

#[derive(Debug, Args)]
#[group(multiple = false)]
pub struct AxisArgs {
    /// Zero-based index of a canonical axis. Default: the last one.
    #[arg(long)]
    pub axis_index: Option<usize>,
    /// Axis coordinates, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub axis: Option<Vec<f64>>,
    /// File with whitespace or comma separated axis coordinates.
    #[arg(long)]
    pub axis_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Inverse,
    Rejection,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Inverse => Method::Inverse,
            MethodArg::Rejection => Method::Rejection,
        }
    }
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub region: RegionArgs,
    #[command(flatten)]
    pub axis: AxisArgs,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Planar-angle generator for caps.
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads. With more than one, worker `i` draws its contiguous
    /// share from substream `i`, so the output differs from a
    /// single-threaded run with the same seed.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CostKind {
    /// `1 / Theta(theta)` for whole-sphere rejection.
    Rejection,
    /// The small-angle closed form of the rejection cost.
    SmallAngle,
    /// Proposals per accepted angle of the one-dimensional rejection step.
    Planar,
}

#[derive(Debug, Args)]
pub struct CostArgs {
    #[arg(long, value_enum, default_value_t = CostKind::Rejection)]
    pub kind: CostKind,
    /// Half-angles, comma separated.
    #[arg(long, required = true, value_delimiter = ',', value_parser = parse_angle)]
    pub theta: Vec<f64>,
    #[arg(long, default_value_t = 2)]
    pub dim_min: usize,
    #[arg(long, default_value_t = 100)]
    pub dim_max: usize,
    #[arg(long, default_value_t = 1)]
    pub dim_step: usize,
    /// Always write log10 of the cost.
    #[arg(long)]
    pub log10: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ValidateMode {
    Ks,
    Histogram,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, value_enum, default_value_t = ValidateMode::Ks)]
    pub mode: ValidateMode,
    #[arg(long = "dim")]
    pub dim: usize,
    #[arg(long, value_parser = parse_angle)]
    pub theta0: f64,
    #[command(flatten)]
    pub axis: AxisArgs,
    #[arg(long, default_value_t = 10_000)]
    pub count: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// Histogram bins on `[0, theta0]`.
    #[arg(long, default_value_t = 100)]
    pub bins: usize,
    /// Points per decade of the KS sample-size schedule.
    #[arg(long, default_value_t = 4)]
    pub per_decade: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaselineKind {
    ShiftedSphere,
    Normal,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    #[arg(long, value_enum)]
    pub kind: BaselineKind,
    #[arg(long = "dim")]
    pub dim: usize,
    #[arg(long, value_parser = parse_angle)]
    pub theta0: f64,
    #[command(flatten)]
    pub axis: AxisArgs,
    /// Distance of the proposal centre from the origin.
    #[arg(long, default_value_t = 1.0)]
    pub mu_norm: f64,
    /// Standard deviation of the normal proposal.
    #[arg(long, default_value_t = 0.08)]
    pub sigma: f64,
    /// Largest N of the schedule; also the number of baseline samples kept.
    #[arg(long, default_value_t = 10_000)]
    pub count: usize,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub per_decade: usize,
    /// Give up on the normal baseline after this many proposals per kept
    /// sample.
    #[arg(long, default_value_t = 10_000)]
    pub max_proposal_ratio: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// The region a sample command draws from.
#[derive(Debug, Clone)]
pub enum Region {
    Cap(ConeSpec),
    HollowCone(HollowConeSpec),
}

impl RegionArgs {
    pub fn resolve(&self, axis: Direction) -> CliResult<Region> {
        let specs = [
            self.theta0.is_some(),
            self.theta1.is_some(),
            self.omega1.is_some(),
        ];
        match specs.iter().filter(|&&b| b).count() {
            0 => Err(usage(
                "give a region: --theta0, --theta1/--theta2 or --omega1/--omega2",
            )),
            1 => Ok(if let Some(t) = self.theta0 {
                Region::Cap(ConeSpec::new(axis, t)?)
            } else if let (Some(t1), Some(t2)) = (self.theta1, self.theta2) {
                Region::HollowCone(HollowConeSpec::new(axis, t1, t2)?)
            } else {
                let (w1, w2) = (self.omega1.unwrap_or(0.0), self.omega2.unwrap_or(0.0));
                Region::HollowCone(HollowConeSpec::from_fractions(axis, w1, w2)?)
            }),
            _ => Err(usage("give exactly one region specification")),
        }
    }
}

impl AxisArgs {
    pub fn resolve(&self, n: usize) -> CliResult<Direction> {
        if n == 0 {
            return Err(usage("--dim must be at least 1"));
        }
        let coords = if let Some(i) = self.axis_index {
            return Ok(Direction::canonical(n, i)?);
        } else if let Some(v) = &self.axis {
            v.clone()
        } else if let Some(path) = &self.axis_file {
            read_axis_file(path)?
        } else {
            return Ok(Direction::canonical(n, n - 1)?);
        };
        if coords.len() != n {
            return Err(usage(format!(
                "axis has {} coordinates but --dim is {n}",
                coords.len()
            )));
        }
        Ok(Direction::new(coords)?)
    }

    fn describe(&self) -> String {
        if let Some(i) = self.axis_index {
            format!("index:{i}")
        } else if self.axis.is_some() {
            "literal".to_string()
        } else if let Some(p) = &self.axis_file {
            format!("file:{}", p.display())
        } else {
            "last".to_string()
        }
    }
}

fn read_axis_file(path: &Path) -> CliResult<Vec<f64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read axis file {}: {e}", path.display())))?;
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| usage(format!("axis file {}: bad number {t:?}", path.display())))
        })
        .collect()
}

fn open_output(path: &Option<PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn base_meta(command: &str, argv: &[String]) -> Metadata {
    let mut meta = Metadata::default();
    meta.push("program", "spherecap");
    meta.push("version", env!("CARGO_PKG_VERSION"));
    meta.push("command", command);
    meta.push("args", argv.join(" "));
    meta
}

fn push_axis(meta: &mut Metadata, axis: &Direction) {
    let coords: Vec<String> = axis.as_slice().iter().map(|v| format!("{v:?}")).collect();
    meta.push("axis", coords.join(","));
}

/// Sample sizes `10^(k / per_decade)` up to `max`, always ending at `max`.
pub fn log_schedule(min: usize, max: usize, per_decade: usize) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    let per_decade = per_decade.max(1) as f64;
    let mut k = 0.0;
    loop {
        let n = 10f64.powf(k / per_decade).round() as usize;
        if n >= max {
            break;
        }
        if n >= min && out.last() != Some(&n) {
            out.push(n);
        }
        k += 1.0;
    }
    if max >= min.max(1) {
        out.push(max);
    }
    out
}

/// Runs one parsed command. `argv` is recorded in the output header.
pub fn run(cli: Cli, argv: &[String]) -> CliResult<()> {
    match cli.command {
        Command::Sample(a) => cmd_sample(&a, argv),
        Command::Cost(a) => cmd_cost(&a, argv),
        Command::Validate(a) => cmd_validate(&a, argv),
        Command::Baseline(a) => cmd_baseline(&a, argv),
    }
}

enum Sampler {
    Cap(CapSampler),
    Hollow(HollowConeSampler),
}

impl Sampler {
    fn draw(&self, count: usize, rng: &mut RandomStream) -> crate::Result<Vec<Direction>> {
        match self {
            Sampler::Cap(s) => s.sample_many(count, rng),
            Sampler::Hollow(s) => s.sample_many(count, rng),
        }
    }
}

pub fn cmd_sample(a: &SampleArgs, argv: &[String]) -> CliResult<()> {
    if a.threads == 0 {
        return Err(usage("--threads must be at least 1"));
    }
    let n = a.region.dim;
    let axis = a.axis.resolve(n)?;
    let mut meta = base_meta("sample", argv);
    meta.push("dimension", n);
    let sampler = match a.region.resolve(axis.clone())? {
        Region::Cap(spec) => {
            meta.push("region", "cap");
            meta.push("theta0", format!("{:?}", spec.theta0()));
            let s = CapSampler::new(spec, a.method.into()).map_err(with_method_hint)?;
            meta.push("method", Method::from(a.method));
            meta.push("resolved_method", s.angle_sampler().resolved_method());
            Sampler::Cap(s)
        }
        Region::HollowCone(spec) => {
            meta.push("region", "hollow-cone");
            meta.push("theta1", format!("{:?}", spec.theta1()));
            meta.push("theta2", format!("{:?}", spec.theta2()));
            meta.push("method", "inverse");
            Sampler::Hollow(HollowConeSampler::new(spec)?)
        }
    };
    meta.push("axis_source", a.axis.describe());
    push_axis(&mut meta, &axis);
    meta.push("count", a.count);
    meta.push("seed", a.seed);
    meta.push("threads", a.threads);

    let chunks: Vec<usize> = (0..a.threads)
        .map(|i| a.count / a.threads + usize::from(i < a.count % a.threads))
        .collect();
    let results: Vec<crate::Result<Vec<Direction>>> = if a.threads == 1 {
        vec![sampler.draw(a.count, &mut RandomStream::new(a.seed))]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = chunks
                .iter()
                .enumerate()
                .map(|(i, &c)| {
                    let sampler = &sampler;
                    let seed = a.seed;
                    scope.spawn(move || {
                        sampler.draw(c, &mut RandomStream::substream(seed, i as u64))
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("sampling worker panicked"))
                .collect()
        })
    };

    let mut out = open_output(&a.output.out)?;
    match a.output.format {
        Format::Table => {
            let columns: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
            output::write_header(&mut out, &meta, &columns)?;
        }
        Format::Records => output::write_meta_record(&mut out, &meta)?,
    }
    for chunk in results {
        for d in chunk.map_err(with_method_hint)? {
            match a.output.format {
                Format::Table => output::write_row(&mut out, d.as_slice())?,
                Format::Records => {
                    writeln!(out, "{}", serde_json::json!({ "x": d }))?;
                }
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn cost_at(kind: CostKind, n: usize, theta: f64) -> crate::Result<Cost> {
    let map = AngleMap::new(n)?;
    match kind {
        CostKind::Rejection => map.rejection_cost(theta),
        CostKind::SmallAngle => map.rejection_cost_small_angle(theta),
        CostKind::Planar => map.planar_rejection_cost(theta),
    }
}

/// One `(dimension, cost)` table per half-angle. A table whose linear
/// costs overflow is written in log10 and flagged in its header.
pub fn cost_tables(a: &CostArgs, argv: &[String]) -> CliResult<Vec<Table>> {
    if a.dim_min < 2 || a.dim_max < a.dim_min || a.dim_step == 0 {
        return Err(usage(
            "need 2 <= --dim-min <= --dim-max and --dim-step >= 1",
        ));
    }
    let dims: Vec<usize> = (a.dim_min..=a.dim_max).step_by(a.dim_step).collect();
    a.theta
        .iter()
        .map(|&theta| {
            let costs = dims
                .iter()
                .map(|&n| cost_at(a.kind, n, theta))
                .collect::<crate::Result<Vec<Cost>>>()?;
            let overflow = costs.iter().any(|c| c.value.is_none());
            let log10 = a.log10 || overflow;
            let mut meta = base_meta("cost", argv);
            meta.push(
                "kind",
                a.kind.to_possible_value().expect("named").get_name(),
            );
            meta.push("theta", format!("{theta:?}"));
            meta.push("scale", if log10 { "log10" } else { "linear" });
            meta.push("overflow", overflow);
            let col = if log10 { "log10_cost" } else { "cost" };
            let mut table = Table::new(meta, &["dimension", col]);
            for (&n, c) in dims.iter().zip(&costs) {
                let v = match c.value {
                    Some(v) if !log10 => v,
                    _ => c.log10,
                };
                table.push(vec![n as f64, v]);
            }
            Ok(table)
        })
        .collect()
}

fn write_tables(tables: &[Table], output: &OutputArgs) -> CliResult<()> {
    let mut out = open_output(&output.out)?;
    for (i, t) in tables.iter().enumerate() {
        if i > 0 && output.format == Format::Table {
            writeln!(out)?;
        }
        t.write(&mut out, output.format)?;
    }
    out.flush()?;
    Ok(())
}

pub fn cmd_cost(a: &CostArgs, argv: &[String]) -> CliResult<()> {
    write_tables(&cost_tables(a, argv)?, &a.output)
}

pub fn validate_table(a: &ValidateArgs, argv: &[String]) -> CliResult<Table> {
    if a.count == 0 {
        return Err(usage("--count must be at least 1"));
    }
    let axis = a.axis.resolve(a.dim)?;
    let spec = ConeSpec::new(axis.clone(), a.theta0)?;
    let exact = ThetaDistribution::new(a.dim, a.theta0)?;
    let sampler = CapSampler::new(spec, a.method.into()).map_err(with_method_hint)?;
    let mut rng = RandomStream::new(a.seed);
    let angles: Vec<f64> = sampler
        .sample_many(a.count, &mut rng)
        .map_err(with_method_hint)?
        .iter()
        .map(|d| d.angle_to(&axis))
        .collect();

    let mut meta = base_meta("validate", argv);
    meta.push("dimension", a.dim);
    meta.push("theta0", format!("{:?}", a.theta0));
    meta.push("method", Method::from(a.method));
    meta.push("resolved_method", sampler.angle_sampler().resolved_method());
    meta.push("axis_source", a.axis.describe());
    meta.push("count", a.count);
    meta.push("seed", a.seed);
    Ok(match a.mode {
        ValidateMode::Ks => {
            meta.push("mode", "ks");
            let mut t = Table::new(meta, &["n", "ks_statistic", "critical_1pct"]);
            for n in log_schedule(10.min(a.count), a.count, a.per_decade) {
                let r = stats::ks_statistic(&angles[..n], &exact)?;
                t.push(vec![n as f64, r.statistic, r.critical_value_1pct]);
            }
            t
        }
        ValidateMode::Histogram => {
            meta.push("mode", "histogram");
            meta.push("bins", a.bins);
            let mut t = Table::new(
                meta,
                &[
                    "bin_left",
                    "bin_center",
                    "density",
                    "exact_density",
                    "poisson_sd",
                ],
            );
            for b in stats::histogram(&angles, a.bins, 0.0, a.theta0)? {
                let c = b.center();
                let expect = exact.exact_pdf(c);
                let sd = (expect * b.width * a.count as f64).sqrt() / (a.count as f64 * b.width);
                t.push(vec![b.left, c, b.density, expect, sd]);
            }
            t
        }
    })
}

pub fn cmd_validate(a: &ValidateArgs, argv: &[String]) -> CliResult<()> {
    write_tables(&[validate_table(a, argv)?], &a.output)
}

pub fn baseline_table(a: &BaselineArgs, argv: &[String]) -> CliResult<Table> {
    if a.count == 0 {
        return Err(usage("--count must be at least 1"));
    }
    let axis = a.axis.resolve(a.dim)?;
    let mu: Vec<f64> = axis.as_slice().iter().map(|v| v * a.mu_norm).collect();
    let exact = ThetaDistribution::new(a.dim, a.theta0)?;
    let mut meta = base_meta("baseline", argv);
    meta.push("dimension", a.dim);
    meta.push("theta0", format!("{:?}", a.theta0));
    meta.push("axis_source", a.axis.describe());
    meta.push("mu_norm", format!("{:?}", a.mu_norm));
    meta.push("count", a.count);
    meta.push("seed", a.seed);

    let mut base_rng = RandomStream::substream(a.seed, 0);
    let batch: WeightedBatch = match a.kind {
        BaselineKind::ShiftedSphere => {
            meta.push("baseline", "shifted-sphere");
            let spec = ShiftedSphereSpec::new(mu, a.theta0)?;
            let (batch, clamped) = baselines::shifted_sphere_batch(&spec, a.count, &mut base_rng)?;
            meta.push("clamped", clamped);
            batch
        }
        BaselineKind::Normal => {
            meta.push("baseline", "normal");
            meta.push("sigma", format!("{:?}", a.sigma));
            let spec = ShiftedNormalSpec::new(mu, a.sigma, a.theta0)?;
            let max = a.count.saturating_mul(a.max_proposal_ratio);
            let nb = baselines::shifted_normal_batch(&spec, a.count, max, &mut base_rng)?;
            meta.push("proposals", nb.proposals);
            meta.push(
                "acceptance_fraction",
                format!("{:?}", nb.acceptance_fraction()),
            );
            nb.batch
        }
    };
    meta.push(
        "effective_sample_size",
        format!("{:?}", batch.effective_sample_size()),
    );
    meta.push(
        "ln_weight_range",
        format!(
            "{:?},{:?}",
            batch.ln_weight_range.0, batch.ln_weight_range.1
        ),
    );
    let weighted = batch.angles(&axis);

    let spec = ConeSpec::new(axis.clone(), a.theta0)?;
    let sampler = CapSampler::new(spec, Method::Auto).map_err(with_method_hint)?;
    let mut rng = RandomStream::substream(a.seed, 1);
    let proposed: Vec<f64> = sampler
        .sample_many(a.count, &mut rng)?
        .iter()
        .map(|d| d.angle_to(&axis))
        .collect();

    let mut t = Table::new(meta, &["n", "ks_baseline", "ks_proposed"]);
    for n in log_schedule(10.min(a.count), a.count, a.per_decade) {
        let b = stats::weighted_ks_statistic(&weighted[..n], &exact)?;
        let p = stats::ks_statistic(&proposed[..n], &exact)?;
        t.push(vec![n as f64, b.statistic, p.statistic]);
    }
    Ok(t)
}

pub fn cmd_baseline(a: &BaselineArgs, argv: &[String]) -> CliResult<()> {
    write_tables(&[baseline_table(a, argv)?], &a.output)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("pi/4").unwrap(), PI / 4.0);
        assert_eq!(parse_angle("2*pi/3").unwrap(), 2.0 * PI / 3.0);
        assert!(parse_angle("tau").is_err());
        assert!(parse_angle("pi/x").is_err());
    }

    #[test]
    fn schedule() {
        assert_eq!(log_schedule(10, 100, 2), vec![10, 32, 100]);
        assert_eq!(log_schedule(10, 10_000, 1), vec![10, 100, 1000, 10_000]);
        assert_eq!(log_schedule(1, 5, 1), vec![1, 5]);
        assert_eq!(log_schedule(10, 10, 4), vec![10]);
    }

    #[test]
    fn region_must_be_unique() {
        let cli = Cli::try_parse_from([
            "spherecap",
            "sample",
            "--dim",
            "3",
            "--theta0",
            "1",
            "--theta1",
            "0.1",
            "--theta2",
            "0.2",
        ])
        .unwrap();
        let Command::Sample(a) = cli.command else {
            panic!()
        };
        let err = a
            .region
            .resolve(Direction::canonical(3, 2).unwrap())
            .unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn error_codes() {
        assert_eq!(CliError::from(Error::Domain("x".into())).exit_code(), 2);
        assert_eq!(CliError::from(Error::Underflow("x".into())).exit_code(), 3);
        let hinted = with_method_hint(Error::Underflow("tiny".into()));
        assert!(hinted.to_string().contains("--method rejection"));
    }

    #[test]
    fn cost_switches_to_log10_on_overflow() {
        let cli = Cli::try_parse_from([
            "spherecap",
            "cost",
            "--theta",
            "pi/5",
            "--dim-min",
            "2",
            "--dim-max",
            "3000",
            "--dim-step",
            "100",
        ])
        .unwrap();
        let Command::Cost(a) = cli.command else {
            panic!()
        };
        let t = cost_tables(&a, &[]).unwrap();
        assert_eq!(t[0].meta.get("scale"), Some("log10"));
        assert_eq!(t[0].columns[1], "log10_cost");
    }
}
