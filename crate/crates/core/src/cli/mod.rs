//! Command-line front end.
//!
//! Exit codes: 0 success, 1 other failure (including a failed
//! certification), 2 unreadable or unparsable input, 3 dimension mismatch,
//! 4 no torus solution of an initial system, 5 every end game path
//! inconclusive.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::geometry::{GeometryError, PrimitiveVector};
use crate::homotopy::{run_curve, Config, CurveReport, HomotopyError, PathStatus};
use crate::mixedvol::{bounding_subset, degree_decomposition, edge_segment, mixed_volume, MixedVolumeError};
use crate::polycore::{parse_system, rat, Exact, ExactSystem, PolyError};
use crate::puiseux::{
    certify, extend_series, leading_terms, sample_curve, Certification, Coefficient, Pin, PuiseuxError,
    PuiseuxExpansion,
};
use crate::tropical::{interior_membership, pretropism_rays, prevariety, system_polytopes, Membership, TropicalError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Dimension(String),
    #[error("{0}")]
    NoTorusSolution(String),
    #[error("{0}")]
    Inconclusive(String),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Other(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Dimension(_) => 3,
            CliError::NoTorusSolution(_) => 4,
            CliError::Inconclusive(_) => 5,
        }
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        if e.is_parse_error() {
            CliError::Parse(e.to_string())
        } else if matches!(e, PolyError::DimensionMismatch { .. }) {
            CliError::Dimension(e.to_string())
        } else {
            CliError::Other(e.to_string())
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::DimensionMismatch { .. } => CliError::Dimension(e.to_string()),
            _ => CliError::Other(e.to_string()),
        }
    }
}

impl From<TropicalError> for CliError {
    fn from(e: TropicalError) -> Self {
        match e {
            TropicalError::DimensionMismatch { .. } => CliError::Dimension(e.to_string()),
            TropicalError::Geometry(g) => g.into(),
            _ => CliError::Other(e.to_string()),
        }
    }
}

impl From<MixedVolumeError> for CliError {
    fn from(e: MixedVolumeError) -> Self {
        match e {
            MixedVolumeError::DimensionMismatch { .. } | MixedVolumeError::WrongShape { .. } => {
                CliError::Dimension(e.to_string())
            }
            MixedVolumeError::Geometry(g) => g.into(),
            MixedVolumeError::Tropical(t) => t.into(),
            _ => CliError::Other(e.to_string()),
        }
    }
}

impl From<HomotopyError> for CliError {
    fn from(e: HomotopyError) -> Self {
        match e {
            HomotopyError::WrongShape { .. } => CliError::Dimension(e.to_string()),
            HomotopyError::Poly(p) => p.into(),
            HomotopyError::MixedVolume(m) => m.into(),
            _ => CliError::Other(e.to_string()),
        }
    }
}

impl From<PuiseuxError> for CliError {
    fn from(e: PuiseuxError) -> Self {
        match e {
            PuiseuxError::DimensionMismatch { .. } | PuiseuxError::BadPin(_) => CliError::Dimension(e.to_string()),
            PuiseuxError::NoTorusSolution => CliError::NoTorusSolution(e.to_string()),
            PuiseuxError::Malformed(_) => CliError::Parse(e.to_string()),
            PuiseuxError::Tropical(t) => t.into(),
            PuiseuxError::Homotopy(h) => h.into(),
            _ => CliError::Other(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "tropcurve", version, about = "Puiseux series of algebraic space curves from tropical prevarieties")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Emit JSON (with an embedded run manifest) instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Master seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct SeriesArgs {
    /// Polynomial system file.
    pub file: PathBuf,
    /// Tropism candidate, comma separated, e.g. 2,1,0.
    #[arg(long, value_parser = parse_ray, allow_hyphen_values = true)]
    pub ray: Ray,
    /// Largest exponent of t to keep.
    #[arg(long, default_value_t = 6)]
    pub order: i64,
    /// Leading coefficient to fix, e.g. x1=2 or x2=-1/3.
    #[arg(long, value_parser = parse_pin, default_value = "x1=1")]
    pub pin: (usize, (i64, i64)),
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tropical prevariety fan and pretropisms.
    Prevariety {
        file: PathBuf,
        /// Also classify this direction against the fan.
        #[arg(long, value_parser = parse_ray, allow_hyphen_values = true)]
        classify: Option<Ray>,
        #[command(flatten)]
        common: Common,
    },
    /// Leading terms, series extension and certification along a ray.
    Series {
        #[command(flatten)]
        series: SeriesArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Polyhedral end game from a generic hyperplane section.
    Endgame {
        file: PathBuf,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        s0: Option<f64>,
        #[arg(long)]
        max_winding: Option<u32>,
        /// Keep the per-path sample lists in the JSON output.
        #[arg(long)]
        samples: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Degree bound and its decomposition over the pretropisms.
    Degree {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Mixed volume of the Newton polytopes, or of the initial system along a ray.
    Mixedvol {
        file: PathBuf,
        #[arg(long, value_parser = parse_ray, allow_hyphen_values = true)]
        ray: Option<Ray>,
        #[command(flatten)]
        common: Common,
    },
    /// Re-check expansions written by `series --json`.
    Certify {
        file: PathBuf,
        expansion: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Sample a branch as CSV (t, then real and imaginary part per coordinate).
    Sample {
        #[command(flatten)]
        series: SeriesArgs,
        /// Branch number, 1-based, in `series` order.
        #[arg(long, default_value_t = 1)]
        branch: usize,
        /// Keep only the first k terms of every coordinate.
        #[arg(long)]
        terms: Option<usize>,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t_min: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        t_max: f64,
        #[command(flatten)]
        common: Common,
    },
}

/// An integer direction given as `a,b,c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ray(pub Vec<i64>);

fn parse_ray(s: &str) -> Result<Ray, String> {
    s.split(',').map(|x| x.trim().parse::<i64>().map_err(|e| format!("bad ray entry {x:?}: {e}"))).collect::<Result<_, _>>().map(Ray)
}

fn parse_pin(s: &str) -> Result<(usize, (i64, i64)), String> {
    let (var, val) = s.split_once('=').ok_or("expected xk=value")?;
    let k: usize = var.trim().strip_prefix('x').and_then(|k| k.parse().ok()).ok_or("expected xk=value")?;
    if k == 0 {
        return Err("variables start at x1".into());
    }
    let (n, d) = match val.split_once('/') {
        Some((n, d)) => (n.trim().parse::<i64>(), d.trim().parse::<i64>()),
        None => (val.trim().parse::<i64>(), Ok(1)),
    };
    match (n, d) {
        (Ok(n), Ok(d)) if d != 0 => Ok((k - 1, (n, d))),
        _ => Err(format!("bad pin value {val:?}")),
    }
}

/// What a command produced, before it is written anywhere.
pub struct Report {
    pub text: String,
    pub data: Value,
    /// Nonzero when the command ran but its check failed.
    pub code: i32,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    command: &'a str,
    input: String,
    input_sha256: String,
    config: Value,
    version: &'static str,
    wall_time_seconds: f64,
}

fn read_input(path: &Path) -> Result<(String, String), CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let digest = Sha256::digest(&bytes);
    let hex = digest.iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    });
    let text = String::from_utf8(bytes).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    Ok((text, hex))
}

fn load(path: &Path) -> Result<(ExactSystem, String), CliError> {
    let (text, hex) = read_input(path)?;
    Ok((parse_system(&text)?, hex))
}

fn ray_of(v: &[i64], n: usize) -> Result<PrimitiveVector, CliError> {
    if v.len() != n {
        return Err(CliError::Dimension(format!("ray has {} entries, the system has {n} variables", v.len())));
    }
    Ok(PrimitiveVector::new(v.to_vec())?)
}

fn fmt_vec(v: &[i64]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn fmt_monomial(k: i64) -> String {
    match k {
        0 => String::new(),
        1 => "t".into(),
        _ => format!("t^{k}"),
    }
}

/// One signed term, e.g. ("-", "5/64*t^9").
fn fmt_term(k: i64, c: &Coefficient) -> (&'static str, String) {
    let m = fmt_monomial(k);
    let join = |c: String| match (c.as_str(), m.is_empty()) {
        (_, true) => c,
        ("1", false) => m.clone(),
        _ => format!("{c}*{m}"),
    };
    match c {
        Coefficient::Exact(e) if e.im == rat(0, 1) => {
            let sign = if e.re < rat(0, 1) { "-" } else { "+" };
            (sign, join(num_traits::Signed::abs(&e.re).to_string()))
        }
        Coefficient::Exact(e) => ("+", join(format!("({} + {}i)", e.re, e.im))),
        Coefficient::Float(z) if z.im.abs() <= 1e-12 * z.re.abs().max(1.0) => {
            (if z.re < 0.0 { "-" } else { "+" }, join(format!("{:.12}", z.re.abs())))
        }
        Coefficient::Float(z) => ("+", join(format!("({:.12} + {:.12}i)", z.re, z.im))),
    }
}

fn fmt_expansion(e: &PuiseuxExpansion) -> String {
    let mut s = String::new();
    for (i, terms) in e.coords.iter().enumerate() {
        let mut line = String::new();
        for (j, (k, c)) in terms.iter().enumerate() {
            let (sign, body) = fmt_term(*k, c);
            match (j, sign) {
                (0, "-") => line.push('-'),
                (0, _) => {}
                (_, sign) => line.push_str(&format!(" {sign} ")),
            }
            line.push_str(&body);
        }
        let _ = writeln!(s, "  x{} = {line}", i + 1);
    }
    s
}

/// Parse arguments, run, write output; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let line = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect::<Vec<_>>().join(" ");
    match execute(&cli, &line) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn common_of(c: &Command) -> &Common {
    match c {
        Command::Prevariety { common, .. }
        | Command::Series { common, .. }
        | Command::Endgame { common, .. }
        | Command::Degree { common, .. }
        | Command::Mixedvol { common, .. }
        | Command::Certify { common, .. }
        | Command::Sample { common, .. } => common,
    }
}

/// Run a parsed command and write its output; `line` is the argument list
/// recorded in the manifest.
pub fn execute(cli: &Cli, line: &str) -> Result<i32, CliError> {
    let start = Instant::now();
    let common = common_of(&cli.command).clone();
    let (report, input, digest, config) = dispatch(&cli.command)?;
    let manifest = Manifest {
        command: line,
        input: input.display().to_string(),
        input_sha256: digest,
        config,
        version: env!("CARGO_PKG_VERSION"),
        wall_time_seconds: start.elapsed().as_secs_f64(),
    };
    let manifest = serde_json::to_value(&manifest).expect("manifest serializes");
    let body = if common.json {
        let mut s = serde_json::to_string_pretty(&json!({ "manifest": manifest, "result": report.data }))
            .expect("json serializes");
        s.push('\n');
        s
    } else {
        report.text.clone()
    };
    match &common.out {
        Some(path) => {
            std::fs::write(path, &body).map_err(|e| CliError::Other(format!("{}: {e}", path.display())))?;
            if !common.json {
                let side = PathBuf::from(format!("{}.manifest.json", path.display()));
                let m = serde_json::to_string_pretty(&manifest).expect("json serializes");
                std::fs::write(&side, m + "\n").map_err(|e| CliError::Other(format!("{}: {e}", side.display())))?;
            }
        }
        None => print!("{body}"),
    }
    Ok(report.code)
}

type Dispatched = (Report, PathBuf, String, Value);

fn dispatch(cmd: &Command) -> Result<Dispatched, CliError> {
    match cmd {
        Command::Prevariety { file, classify, common } => {
            let (s, digest) = load(file)?;
            let r = cmd_prevariety(&s, classify.as_ref().map(|r| r.0.as_slice()))?;
            Ok((r, file.clone(), digest, json!({ "seed": common.seed, "classify": classify })))
        }
        Command::Series { series, common } => {
            let (s, digest) = load(&series.file)?;
            let r = cmd_series(&s, series, common.seed)?;
            Ok((r, series.file.clone(), digest, series_config(series, common.seed)))
        }
        Command::Endgame { file, r, s0, max_winding, samples, common } => {
            let (s, digest) = load(file)?;
            let mut cfg = Config::with_seed(common.seed);
            if let Some(r) = r {
                cfg.r = *r;
            }
            if let Some(s0) = s0 {
                cfg.s0 = *s0;
            }
            if let Some(w) = max_winding {
                cfg.max_winding = *w;
            }
            let report = cmd_endgame(&s, &cfg, *samples)?;
            let config = serde_json::to_value(&cfg).expect("config serializes");
            Ok((report, file.clone(), digest, config))
        }
        Command::Degree { file, common } => {
            let (s, digest) = load(file)?;
            Ok((cmd_degree(&s)?, file.clone(), digest, json!({ "seed": common.seed })))
        }
        Command::Mixedvol { file, ray, common } => {
            let (s, digest) = load(file)?;
            Ok((cmd_mixedvol(&s, ray.as_ref().map(|r| r.0.as_slice()))?, file.clone(), digest, json!({ "seed": common.seed, "ray": ray })))
        }
        Command::Certify { file, expansion, common } => {
            let (s, digest) = load(file)?;
            let (text, _) = read_input(expansion)?;
            let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", expansion.display())))?;
            let config = json!({ "seed": common.seed, "expansion": expansion.display().to_string() });
            Ok((cmd_certify(&s, &v)?, file.clone(), digest, config))
        }
        Command::Sample { series, branch, terms, count, t_min, t_max, common } => {
            let (s, digest) = load(&series.file)?;
            let r = cmd_sample(&s, series, common.seed, *branch, *terms, *count, (*t_min, *t_max))?;
            let mut config = series_config(series, common.seed);
            config["branch"] = json!(branch);
            config["terms"] = json!(terms);
            config["count"] = json!(count);
            config["t_range"] = json!([t_min, t_max]);
            Ok((r, series.file.clone(), digest, config))
        }
    }
}

fn series_config(a: &SeriesArgs, seed: u64) -> Value {
    let (var, (n, d)) = a.pin;
    json!({ "seed": seed, "ray": a.ray, "order": a.order, "pin": { "var": var + 1, "value": [n, d] } })
}

pub fn cmd_prevariety(s: &ExactSystem, classify: Option<&[i64]>) -> Result<Report, CliError> {
    let fan = prevariety(&system_polytopes(s)?)?;
    let pre = pretropism_rays(&fan);
    let mut data = serde_json::to_value(fan.to_json()).expect("fan serializes");
    data["pretropisms"] = json!(pre.iter().map(|r| r.entries().to_vec()).collect::<Vec<_>>());
    let mut text = format!("{} rays, {} cones\npretropisms:\n", fan.rays.len(), fan.cones.len());
    for r in &pre {
        let _ = writeln!(text, "  {}", fmt_vec(r.entries()));
    }
    if let Some(v) = classify {
        let v = ray_of(v, s.nvars())?;
        let (kind, span) = match interior_membership(&fan, &v) {
            Membership::RayGenerator => ("ray_generator", vec![]),
            Membership::InteriorOfCone(rays) => ("interior_of_cone", rays),
            Membership::Outside => ("outside", vec![]),
        };
        let span: Vec<Vec<i64>> = span.iter().map(|r| r.entries().to_vec()).collect();
        data["classification"] = json!({ "direction": v.entries(), "membership": kind, "cone": span });
        let cone: Vec<String> = span.iter().map(|r| fmt_vec(r)).collect();
        let _ = writeln!(text, "{} is {kind} {}", fmt_vec(v.entries()), cone.join(" "));
    }
    Ok(Report { text, data, code: 0 })
}

fn pin_of(a: &SeriesArgs) -> Result<Pin, CliError> {
    let (var, (n, d)) = a.pin;
    Ok(Pin::new(var, Exact::new(rat(n, d), rat(0, 1)))?)
}

/// Every branch along the ray; extension failures are kept per branch.
fn branches(s: &ExactSystem, a: &SeriesArgs, seed: u64) -> Result<Vec<Result<PuiseuxExpansion, PuiseuxError>>, CliError> {
    let v = ray_of(&a.ray.0, s.nvars())?;
    let pin = pin_of(a)?;
    if pin.var >= s.nvars() {
        return Err(PuiseuxError::BadPin(pin.var + 1).into());
    }
    let leading = leading_terms(s, &v, &pin, &Config::with_seed(seed))?;
    Ok(leading.iter().map(|l| extend_series(s, &v, l, a.order)).collect())
}

pub fn cmd_series(s: &ExactSystem, a: &SeriesArgs, seed: u64) -> Result<Report, CliError> {
    let all = branches(s, a, seed)?;
    let mut items = Vec::new();
    let mut text = String::new();
    let mut failed = 0;
    for (k, b) in all.iter().enumerate() {
        match b {
            Ok(e) => {
                let c = certify(e, s);
                let _ = writeln!(
                    text,
                    "branch {}: tropism {} winding {} certified {}",
                    k + 1,
                    fmt_vec(e.tropism.direction.entries()),
                    e.tropism.winding,
                    if c.passed { "yes" } else { "NO" }
                );
                text.push_str(&fmt_expansion(e));
                items.push(json!({ "expansion": e.to_json(), "certification": c }));
            }
            Err(err) => {
                failed += 1;
                let _ = writeln!(text, "branch {}: {err}", k + 1);
                items.push(json!({ "error": err.to_string() }));
            }
        }
    }
    if failed == all.len() {
        return Err(all.into_iter().find_map(Result::err).expect("some branch").into());
    }
    Ok(Report { text, data: json!({ "branches": items }), code: 0 })
}

pub fn cmd_endgame(s: &ExactSystem, cfg: &Config, keep_samples: bool) -> Result<Report, CliError> {
    let mut r: CurveReport = run_curve(s, cfg)?;
    if r.all_inconclusive() {
        return Err(CliError::Inconclusive(format!(
            "all {} paths inconclusive; try a larger --max-winding or a smaller --r",
            r.path_count
        )));
    }
    if !keep_samples {
        for p in r.paths.iter_mut() {
            p.samples.clear();
        }
    }
    let mut text = format!("{} paths", r.path_count);
    if let Some(d) = r.degree_bound {
        let _ = write!(text, " (degree bound {d})");
    }
    text.push('\n');
    for g in &r.groups {
        let status = match g.status {
            PathStatus::Converged => "converged",
            PathStatus::Diverged => "diverged",
            PathStatus::Inconclusive => "inconclusive",
        };
        let _ = writeln!(
            text,
            "  {} winding {} x{} {status}",
            fmt_vec(g.tropism.direction.entries()),
            g.tropism.winding,
            g.multiplicity
        );
    }
    if !r.inconclusive.is_empty() {
        let _ = writeln!(text, "  inconclusive paths: {:?}", r.inconclusive);
    }
    for w in &r.warnings {
        eprintln!("warning: {w}");
    }
    let data = serde_json::to_value(&r).expect("report serializes");
    Ok(Report { text, data, code: 0 })
}

pub fn cmd_degree(s: &ExactSystem) -> Result<Report, CliError> {
    let (subset, bound) = bounding_subset(s)?;
    let fan = prevariety(&system_polytopes(s)?)?;
    let d = degree_decomposition(s, &pretropism_rays(&fan))?;
    let mut text = format!("degree bound {bound}\n");
    for t in &d.terms {
        let _ = writeln!(text, "  {} contributes {}", fmt_vec(t.ray.entries()), t.weight);
    }
    if d.total != bound {
        let _ = writeln!(text, "  decomposition total {} differs from the bound", d.total);
    }
    let subset: Vec<usize> = subset.iter().map(|i| i + 1).collect();
    let data = json!({ "degree_bound": bound, "subset": subset, "decomposition": d });
    Ok(Report { text, data, code: 0 })
}

pub fn cmd_mixedvol(s: &ExactSystem, ray: Option<&[i64]>) -> Result<Report, CliError> {
    let n = s.nvars();
    if let Some(v) = ray {
        let v = ray_of(v, n)?;
        let d = degree_decomposition(s, std::slice::from_ref(&v))?;
        let weight = d.weight_of(v.entries()).unwrap_or(0);
        let mv = weight / v.first();
        let text = format!("initial mixed volume along {}: {mv} (weight {weight})\n", fmt_vec(v.entries()));
        let data = json!({ "ray": v.entries(), "initial_mixed_volume": mv, "weight": weight });
        return Ok(Report { text, data, code: 0 });
    }
    let mut tuple = system_polytopes(s)?;
    let with_segment = tuple.len() + 1 == n;
    if with_segment {
        tuple.push(edge_segment(n));
    } else if tuple.len() != n {
        return Err(CliError::Dimension(format!(
            "{} polynomials in {n} variables; need n (square) or n-1 (curve)",
            tuple.len()
        )));
    }
    let mv = mixed_volume(&tuple)?;
    let text = format!("mixed volume {mv}{}\n", if with_segment { " (with the segment [0, e1])" } else { "" });
    Ok(Report { text, data: json!({ "mixed_volume": mv, "with_segment": with_segment }), code: 0 })
}

/// Expansions in a bare expansion object, an array, or `series --json` output.
fn expansions_in(v: &Value) -> Result<Vec<PuiseuxExpansion>, CliError> {
    if v.get("tropism").is_some() {
        return Ok(vec![PuiseuxExpansion::from_json(v)?]);
    }
    if let Some(a) = v.as_array() {
        return a.iter().map(|e| Ok(PuiseuxExpansion::from_json(e)?)).collect();
    }
    let branches = v
        .pointer("/result/branches")
        .or_else(|| v.get("branches"))
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::Parse("no expansions found".into()))?;
    branches.iter().filter_map(|b| b.get("expansion")).map(|e| Ok(PuiseuxExpansion::from_json(e)?)).collect()
}

pub fn cmd_certify(s: &ExactSystem, v: &Value) -> Result<Report, CliError> {
    let all = expansions_in(v)?;
    let mut out: Vec<Certification> = Vec::new();
    let mut text = String::new();
    for (k, e) in all.iter().enumerate() {
        if e.nvars() != s.nvars() {
            return Err(CliError::Dimension(format!(
                "expansion has {} coordinates, the system has {} variables",
                e.nvars(),
                s.nvars()
            )));
        }
        let c = certify(e, s);
        let orders: Vec<String> = c.orders.iter().map(|o| o.map_or("inf".into(), |o| o.to_string())).collect();
        let _ = writeln!(
            text,
            "expansion {}: orders [{}] required {:?} {}",
            k + 1,
            orders.join(", "),
            c.required,
            if c.passed { "passed" } else { "FAILED" }
        );
        out.push(c);
    }
    let code = if out.iter().all(|c| c.passed) { 0 } else { 1 };
    Ok(Report { text, data: json!({ "certifications": out }), code })
}

pub fn cmd_sample(
    s: &ExactSystem,
    a: &SeriesArgs,
    seed: u64,
    branch: usize,
    terms: Option<usize>,
    count: usize,
    range: (f64, f64),
) -> Result<Report, CliError> {
    let all = branches(s, a, seed)?;
    let e = match branch.checked_sub(1).and_then(|k| all.get(k)) {
        Some(Ok(e)) => e,
        Some(Err(err)) => return Err(err.clone().into()),
        None => return Err(CliError::Other(format!("branch {branch} does not exist ({} found)", all.len()))),
    };
    let e = match terms {
        Some(k) => e.truncated(k),
        None => e.clone(),
    };
    let pts = sample_curve(&e, range.0, range.1, count)?;
    let mut text = String::from("t");
    for i in 1..=e.nvars() {
        let _ = write!(text, ",x{i}_re,x{i}_im");
    }
    text.push('\n');
    for p in &pts {
        let _ = write!(text, "{}", p.t);
        for z in &p.point {
            let _ = write!(text, ",{},{}", z.re, z.im);
        }
        text.push('\n');
    }
    let data = json!({ "expansion": e.to_json(), "samples": pts });
    Ok(Report { text, data, code: 0 })
}
