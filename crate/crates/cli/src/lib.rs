//! Command surface for `cubefill`: curve orders, verification suites,
//! point codecs and the Whitney construction.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cubefill::analysis::{
    lemma21_crossover, lemma21_series, sample_e_points, vanish_probe, ProbeConfig, ProbeReport,
};
use cubefill::curve::{cube_count, verify_curve};
use cubefill::whitney::ArcSet;
use cubefill::{Check, Curve, Error, Rational, VerifyReport, WhitneyMap};

pub const DEFAULT_BUDGET: u128 = 1 << 22;

#[derive(Parser, Debug)]
#[command(name = "cubefill", version, about = "Cube-preserving space-filling curves and their Whitney-type maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Curves f_n: [0,1] -> [0,1]^n
    #[command(subcommand)]
    Curve(CurveCmd),
    /// The map p: [0,1]^m -> [0,1]^n and its arc set
    #[command(subcommand)]
    Whitney(WhitneyCmd),
}

#[derive(Subcommand, Debug)]
pub enum CurveCmd {
    /// List the depth-s cubes in curve order
    Order(CurveArgs),
    /// Check adjacency, refinement, preimages and measure
    Verify(CurveVerifyArgs),
    /// Rank of the depth-s cube containing a point
    Encode {
        #[command(flatten)]
        args: CurveArgs,
        /// Comma-separated coordinates, e.g. "1/2,3/4" or "0.5,0.75"
        point: String,
    },
    /// Cube of a given rank
    Decode {
        #[command(flatten)]
        args: CurveArgs,
        rank: u128,
    },
}

#[derive(Subcommand, Debug)]
pub enum WhitneyCmd {
    /// Emit the joining segments and shrunken skeleton of E
    Build(WhitneyArgs),
    /// Check surjectivity, connectivity, constancy and the decay probes
    Verify(WhitneyArgs),
    /// Finite-difference probe of vanishing derivatives on E
    Probe(WhitneyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// Maximum number of cubes any single enumeration may visit
    #[arg(long, env = "CUBEFILL_BUDGET", default_value_t = DEFAULT_BUDGET, global = true)]
    pub budget: u128,
    /// Bits of floating-point precision for probes
    #[arg(long, default_value_t = 128, global = true)]
    pub precision: usize,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CurveArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, visible_alias = "s")]
    pub depth: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CurveVerifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub curve: CurveArgs,
    /// Swap two cells of the top transition table before verifying
    #[arg(long, hide = true)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub inject_fault: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct WhitneyArgs {
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub n: u32,
    /// Pairing depth
    #[arg(long, visible_alias = "s")]
    pub depth: usize,
    /// Target smoothness order for probes; defaults to m/n - 1/2
    #[arg(long)]
    pub k: Option<f64>,
    /// Number of sampled points of E for probes
    #[arg(long)]
    pub samples: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

/// What a command produced: text for stdout and an exit status.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    /// 0 when every check passed, 1 on a property violation.
    pub code: u8,
}

/// Configuration errors map to exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(e: Error) -> anyhow::Error {
    match e {
        Error::Budget { .. } | Error::Dimension(_) | Error::Domain(_) | Error::Parse(_) | Error::InvalidAddress(_)
        | Error::InvalidOperand(_) | Error::Shape(_) => UsageError(e.to_string()).into(),
    }
}

#[derive(Serialize)]
struct Report<'a, C: Serialize> {
    command: &'a str,
    config: &'a C,
    checks: &'a [Check],
    artifacts: Vec<String>,
}

fn emit(common: &Common, body: String) -> anyhow::Result<(String, Vec<String>)> {
    match &common.out {
        Some(path) => {
            fs::write(path, &body).with_context(|| format!("writing {}", path.display()))?;
            Ok((String::new(), vec![path.display().to_string()]))
        }
        None => Ok((body, Vec::new())),
    }
}

pub fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Curve(CurveCmd::Order(a)) => curve_order(&a),
        Command::Curve(CurveCmd::Verify(a)) => curve_verify(&a),
        Command::Curve(CurveCmd::Encode { args, point }) => curve_encode(&args, &point),
        Command::Curve(CurveCmd::Decode { args, rank }) => curve_decode(&args, rank),
        Command::Whitney(WhitneyCmd::Build(a)) => whitney_build(&a),
        Command::Whitney(WhitneyCmd::Verify(a)) => whitney_verify(&a),
        Command::Whitney(WhitneyCmd::Probe(a)) => whitney_probe(&a),
    }
}

fn curve(n: u32) -> anyhow::Result<Curve> {
    Curve::new(n).map_err(usage)
}

#[derive(Serialize)]
struct OrderRow {
    rank: u128,
    digits: String,
    corner: Vec<String>,
    side: String,
}

fn order_rows(c: &Curve, s: usize, budget: u128) -> anyhow::Result<Vec<OrderRow>> {
    let order = c.order(s, budget).map_err(usage)?;
    Ok(order
        .into_iter()
        .map(|r| {
            let (corner, side) = r.addr.geometry();
            OrderRow {
                rank: r.rank,
                digits: r.addr.digit_string(),
                corner: corner.iter().map(|d| d.to_string()).collect(),
                side: side.to_string(),
            }
        })
        .collect())
}

fn curve_order(a: &CurveArgs) -> anyhow::Result<Outcome> {
    let c = curve(a.n)?;
    let rows = order_rows(&c, a.depth, a.common.budget)?;
    let body = match a.common.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec!["rank".to_string(), "digits".to_string()];
            header.extend((0..a.n).map(|i| format!("c{i}")));
            header.push("side".into());
            w.write_record(&header)?;
            for r in &rows {
                let mut rec = vec![r.rank.to_string(), r.digits.clone()];
                rec.extend(r.corner.iter().cloned());
                rec.push(r.side.clone());
                w.write_record(&rec)?;
            }
            String::from_utf8(w.into_inner()?)?
        }
        Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
        Format::Svg => {
            if a.n != 2 {
                return Err(UsageError("SVG output needs --n 2".into()).into());
            }
            curve_svg(&c, a.depth, a.common.budget)?
        }
    };
    let (stdout, _) = emit(&a.common, body)?;
    Ok(Outcome { stdout, code: 0 })
}

const SVG_SIZE: f64 = 512.0;

fn curve_svg(c: &Curve, s: usize, budget: u128) -> anyhow::Result<String> {
    let order = c.order(s, budget).map_err(usage)?;
    let mut pts = String::new();
    for r in &order {
        let ctr = r.addr.center();
        let (x, y) = (ctr[0].to_f64() * SVG_SIZE, (1.0 - ctr[1].to_f64()) * SVG_SIZE);
        write!(pts, "{x:.4},{y:.4} ")?;
    }
    Ok(format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_SIZE}\" height=\"{SVG_SIZE}\" viewBox=\"0 0 {SVG_SIZE} {SVG_SIZE}\">\n\
         <rect width=\"{SVG_SIZE}\" height=\"{SVG_SIZE}\" fill=\"white\" stroke=\"black\"/>\n\
         <polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"{}\"/>\n</svg>\n",
        pts.trim_end()
    ))
}

fn faulty(n: u32) -> anyhow::Result<Curve> {
    let base = curve(n)?;
    let mut tables = base.all_tables().to_vec();
    let Some(top) = tables.last_mut() else {
        return Err(UsageError("fault injection needs n >= 2".into()).into());
    };
    top.swap_cells(cubefill::CurveState::ROOT, 1, 2);
    Curve::with_tables(n, tables).map_err(usage)
}

fn curve_verify(a: &CurveVerifyArgs) -> anyhow::Result<Outcome> {
    let ca = &a.curve;
    let c = if a.inject_fault { faulty(ca.n)? } else { curve(ca.n)? };
    if cube_count(ca.n, ca.depth) > ca.common.budget {
        return Err(usage(Error::Budget { requested: cube_count(ca.n, ca.depth), budget: ca.common.budget }));
    }
    let report = verify_curve(&c, ca.depth, ca.common.budget, ca.common.seed).map_err(usage)?;
    finish("curve verify", a, &report, &ca.common)
}

fn finish<C: Serialize>(command: &str, config: &C, report: &VerifyReport, common: &Common) -> anyhow::Result<Outcome> {
    let mut artifacts = Vec::new();
    if let Some(p) = &common.out {
        artifacts.push(p.display().to_string());
    }
    let r = Report { command, config, checks: &report.checks, artifacts };
    let body = serde_json::to_string_pretty(&r)? + "\n";
    let (stdout, _) = emit(common, body)?;
    Ok(Outcome { stdout, code: if report.passed() { 0 } else { 1 } })
}

fn parse_point(text: &str) -> anyhow::Result<Vec<Rational>> {
    text.split(',')
        .map(|t| t.trim().parse::<Rational>().map_err(usage))
        .collect()
}

fn curve_encode(a: &CurveArgs, point: &str) -> anyhow::Result<Outcome> {
    let c = curve(a.n)?;
    let p = parse_point(point)?;
    let rank = c.encode(&p, a.depth).map_err(usage)?;
    let (stdout, _) = emit(&a.common, format!("{rank}\n"))?;
    Ok(Outcome { stdout, code: 0 })
}

fn curve_decode(a: &CurveArgs, rank: u128) -> anyhow::Result<Outcome> {
    let c = curve(a.n)?;
    let q = c.decode(rank, a.depth).map_err(usage)?;
    let (corner, side) = q.geometry();
    let corner: Vec<String> = corner.iter().map(|d| d.to_string()).collect();
    let body = match a.common.format {
        Some(Format::Json) => {
            serde_json::to_string_pretty(&OrderRow { rank, digits: q.digit_string(), corner, side: side.to_string() })? + "\n"
        }
        _ => format!("digits {}\ncorner {}\nside {}\n", q.digit_string(), corner.join(","), side),
    };
    let (stdout, _) = emit(&a.common, body)?;
    Ok(Outcome { stdout, code: 0 })
}

fn whitney_map(a: &WhitneyArgs, depth: usize) -> anyhow::Result<WhitneyMap> {
    if a.n == 0 || a.m <= a.n {
        bail!(UsageError(format!("need m > n >= 1, got m={}, n={}", a.m, a.n)));
    }
    WhitneyMap::with_precision(a.m, a.n, depth, a.common.precision).map_err(usage)
}

#[derive(Serialize)]
struct SegmentRecord<'a> {
    level: usize,
    rank: u64,
    axis: usize,
    x_prime: &'a [Rational],
    x_double_prime: &'a [Rational],
    value: &'a [Rational],
}

#[derive(Serialize)]
struct CubeRecord<'a> {
    digits: String,
    corner: &'a [Rational],
    side: &'a Rational,
}

#[derive(Serialize)]
struct BuildOutput<'a> {
    config: &'a WhitneyArgs,
    segments: Vec<SegmentRecord<'a>>,
    skeleton: Vec<CubeRecord<'a>>,
    connected_levels: &'a [usize],
    disconnected_levels: &'a [usize],
}

fn build_json(a: &WhitneyArgs, e: &ArcSet) -> anyhow::Result<String> {
    let out = BuildOutput {
        config: a,
        segments: e
            .segments
            .iter()
            .map(|s| SegmentRecord {
                level: s.level,
                rank: s.rank,
                axis: s.axis,
                x_prime: &s.x_prime,
                x_double_prime: &s.x_double_prime,
                value: &s.v_prime,
            })
            .collect(),
        skeleton: e
            .skeleton
            .iter()
            .map(|c| CubeRecord { digits: c.addr.digit_string(), corner: &c.corner, side: &c.side })
            .collect(),
        connected_levels: &e.connected_levels,
        disconnected_levels: &e.disconnected_levels,
    };
    Ok(serde_json::to_string_pretty(&out)? + "\n")
}

fn build_svg(e: &ArcSet) -> anyhow::Result<String> {
    let px = |r: &Rational| r.to_f64() * SVG_SIZE;
    let py = |r: &Rational| (1.0 - r.to_f64()) * SVG_SIZE;
    let mut body = String::new();
    for c in &e.skeleton {
        let w = px(&c.side);
        let top = &c.corner[1] + &c.side;
        writeln!(
            body,
            "<rect x=\"{:.4}\" y=\"{:.4}\" width=\"{w:.4}\" height=\"{w:.4}\" fill=\"none\" stroke=\"#999\" stroke-width=\"0.5\"/>",
            px(&c.corner[0]),
            py(&top)
        )?;
    }
    for s in &e.segments {
        writeln!(
            body,
            "<line x1=\"{:.4}\" y1=\"{:.4}\" x2=\"{:.4}\" y2=\"{:.4}\" stroke=\"black\" stroke-width=\"1\"/>",
            px(&s.x_prime[0]),
            py(&s.x_prime[1]),
            px(&s.x_double_prime[0]),
            py(&s.x_double_prime[1])
        )?;
    }
    Ok(format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_SIZE}\" height=\"{SVG_SIZE}\" viewBox=\"0 0 {SVG_SIZE} {SVG_SIZE}\">\n{body}</svg>\n"
    ))
}

fn whitney_build(a: &WhitneyArgs) -> anyhow::Result<Outcome> {
    let w = whitney_map(a, a.depth)?;
    let e = w.build_e(a.common.budget).map_err(usage)?;
    let body = match a.common.format.unwrap_or(Format::Json) {
        Format::Json => build_json(a, &e)?,
        Format::Svg if a.m == 2 => build_svg(&e)?,
        Format::Svg => bail!(UsageError("SVG output needs --m 2".into())),
        Format::Csv => bail!(UsageError("whitney build writes json or svg".into())),
    };
    let (stdout, _) = emit(&a.common, body)?;
    Ok(Outcome { stdout, code: if e.passed() { 0 } else { 1 } })
}

fn default_k(a: &WhitneyArgs) -> f64 {
    a.k.unwrap_or((a.m as f64 / a.n as f64 - 0.5).max(0.0))
}

/// Deep enough that steps down to `2^-24` resolve the hierarchy.
fn probe_depth(n: u32) -> usize {
    32usize.div_ceil(n as usize)
}

fn run_probe(a: &WhitneyArgs, samples: usize, cfg: &ProbeConfig) -> anyhow::Result<ProbeReport> {
    let shallow = whitney_map(a, a.depth)?;
    let e = shallow.build_e(a.common.budget).map_err(usage)?;
    let pts = sample_e_points(&e, samples, a.common.seed).map_err(usage)?;
    let deep = whitney_map(a, probe_depth(a.n))?;
    vanish_probe(&deep, &pts, default_k(a), cfg).map_err(usage)
}

fn whitney_verify(a: &WhitneyArgs) -> anyhow::Result<Outcome> {
    let w = whitney_map(a, a.depth)?;
    let k = default_k(a);
    let mut report = VerifyReport::default();
    let e = w.build_e(a.common.budget).map_err(usage)?;
    let mut missing_total = 0;
    for s in 0..=a.depth {
        let (_, missing) = w.surjectivity_check(s, a.common.budget).map_err(usage)?;
        missing_total += missing.len();
    }
    report.push(Check::new(
        "surjectivity",
        "p(E) = [0,1]^n: cube images at every pairing depth cover each target cube once",
        missing_total == 0,
        format!("depths 0..={}, {missing_total} target cubes missed", a.depth),
    ));
    report.push(Check::new(
        "connectivity",
        "E is connected",
        e.disconnected_levels.is_empty(),
        format!("connected levels {:?}, disconnected {:?}", e.connected_levels, e.disconnected_levels),
    ));
    report.push(Check::new(
        "segment_constancy",
        "p is a constant on every joining segment, which varies one coordinate",
        e.violation_count == 0,
        if e.violation_count == 0 {
            format!("{} segments", e.segments.len())
        } else {
            e.violations.join("; ")
        },
    ));
    let series = match lemma21_crossover(a.m, a.n, k, a.common.precision) {
        Ok(j0) => {
            let terms = lemma21_series(a.m, a.n, k, j0..j0 + 64, a.common.precision).map_err(usage)?;
            let dec = terms.windows(2).all(|t| t[1] < t[0]);
            Check::new(
                "majorant_series",
                "diameter over gap^k bound is eventually strictly decreasing to 0",
                dec,
                format!("k={k}, crossover j0={j0}, strictly decreasing over the next 64 terms: {dec}"),
            )
        }
        Err(e) => Check::skip("majorant_series", "requires k < m/n", e.to_string()),
    };
    report.push(series);
    let cfg = ProbeConfig::default();
    let samples = a.samples.unwrap_or(24);
    let probe = run_probe(a, samples, &cfg)?;
    let t = &probe.trend;
    let ok = probe.nonzero_on_segments == 0 && t.drop <= 0.1;
    report.push(Check::new(
        "vanish_probe",
        "partial derivatives of order < m/n vanish on E",
        ok,
        format!(
            "k={k}, {samples} points, envelope {:?}, drop {:.3e}, monotone {}, {} of {} segment stencils non-zero",
            t.envelope.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>(),
            t.drop,
            t.monotone,
            probe.nonzero_on_segments,
            probe.segment_stencils
        ),
    ));
    finish("whitney verify", a, &report, &a.common)
}

#[derive(Serialize)]
struct ProbeOutput<'a> {
    command: &'static str,
    config: &'a WhitneyArgs,
    k: f64,
    precision: usize,
    step_exponents: &'a [u32],
    report: &'a ProbeReport,
}

fn whitney_probe(a: &WhitneyArgs) -> anyhow::Result<Outcome> {
    let cfg = ProbeConfig { log2_inv_h: (8..=24).collect(), tolerance: 0.25 };
    let report = run_probe(a, a.samples.unwrap_or(100), &cfg)?;
    let out = ProbeOutput {
        command: "whitney probe",
        config: a,
        k: default_k(a),
        precision: report.precision,
        step_exponents: &cfg.log2_inv_h,
        report: &report,
    };
    let (stdout, _) = emit(&a.common, serde_json::to_string_pretty(&out)? + "\n")?;
    Ok(Outcome { stdout, code: 0 })
}
