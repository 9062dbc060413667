//! Command-line front end: argument parsing, dispatch and report emission.
//!
//! Reports are JSON (default) or CSV. Every report starts with the resolved
//! configuration and tolerance set; CSV output carries them on leading `#`
//! comment lines. Numbers are rounded to 12 significant digits so that
//! output is byte-identical across runs of the same build.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::ball::{alpha_grid, check_alpha_grid, check_with_sigma, steklov_pair, PropositionReport};
use crate::compare::{geometric_range, verify_theorem, TheoremReport};
use crate::error::{Error, Result};
use crate::geometry::{ball_volume, make_space, radius_for_volume, FieldKind, SpaceParams};
use crate::radial::{eigen_radial, steklov_first, EigenResult, RadialDomain, RobinProblem};
use crate::tolerances::{Tolerances, PROFILE_ENV};

#[derive(Debug, Parser)]
#[command(name = "ross-robin", version)]
#[command(about = "Robin, Neumann and Steklov eigenvalues of geodesic balls and annuli in KH^n")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One eigenvalue of a radial mode on a ball or annulus
    Eig(EigArgs),
    /// First nonzero Steklov eigenvalue of a ball, by two routes
    Steklov(SteklovArgs),
    /// Sign and ordering properties of the second eigenpair of a ball
    Check(CheckArgs),
    /// Compare annuli with the ball of the same volume
    Verify(VerifyArgs),
    /// Eigenvalues over a grid of spaces, radii and Robin parameters
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report to FILE instead of standard output
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

/// Individual overrides of the tolerance profile named by the environment.
#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct TolOverrides {
    #[arg(long)]
    pub ode_rtol: Option<f64>,
    #[arg(long)]
    pub ode_atol: Option<f64>,
    /// Start radius of ball integrations
    #[arg(long)]
    pub shoot_start: Option<f64>,
    /// Absolute and relative eigenvalue tolerance
    #[arg(long)]
    pub eig_tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Gauss points per profile step
    #[arg(long)]
    pub quad_points: Option<usize>,
}

impl TolOverrides {
    pub fn resolve(&self) -> Result<Tolerances> {
        let mut t = Tolerances::from_env()?;
        let positive = |what: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Domain { what, value: v })
            }
        };
        if let Some(v) = self.ode_rtol {
            t.ode_rtol = positive("ode rtol", v)?;
        }
        if let Some(v) = self.ode_atol {
            t.ode_atol = positive("ode atol", v)?;
        }
        if let Some(v) = self.shoot_start {
            t.shoot_start = positive("shoot start", v)?;
        }
        if let Some(v) = self.eig_tol {
            t.eig_abs = positive("eigenvalue tolerance", v)?;
            t.eig_rel = t.eig_abs;
        }
        if let Some(v) = self.max_iter {
            if v == 0 {
                return Err(Error::InvalidInput("max-iter must be positive".into()));
            }
            t.max_iter = v;
        }
        if let Some(v) = self.quad_points {
            if !(1..=64).contains(&v) {
                return Err(Error::InvalidInput(format!("quad-points must be in 1..=64, got {v}")));
            }
            t.quad_points = v;
        }
        Ok(t)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpaceArgs {
    /// Field: R, C, H or O
    #[arg(long)]
    pub space: FieldKind,
    /// Dimension over the field
    #[arg(long, default_value_t = 2)]
    pub n: u32,
}

impl SpaceArgs {
    fn build(&self) -> Result<SpaceParams> {
        make_space(self.space, self.n)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
#[group(required = true, multiple = false)]
pub struct DomainArgs {
    /// Geodesic ball of radius R
    #[arg(long, value_name = "R")]
    pub ball: Option<f64>,
    /// Annulus R1 <= r <= R2
    #[arg(long, num_args = 2, value_names = ["R1", "R2"])]
    pub annulus: Option<Vec<f64>>,
}

impl DomainArgs {
    fn build(&self) -> Result<RadialDomain> {
        match (&self.ball, &self.annulus) {
            (Some(r), _) => RadialDomain::ball(*r),
            (None, Some(a)) => RadialDomain::annulus(a[0], a[1]),
            (None, None) => Err(Error::InvalidInput("a domain is required".into())),
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EigArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[command(flatten)]
    pub domain: DomainArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Angular mode, 0 or 1
    #[arg(long, default_value_t = 1)]
    pub ell: u8,
    /// 1-based index within the mode
    #[arg(long, default_value_t = 1)]
    pub index: usize,
    #[command(flatten)]
    pub tol: TolOverrides,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SteklovArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[arg(long, value_name = "R")]
    pub ball: f64,
    #[command(flatten)]
    pub tol: TolOverrides,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CheckArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[arg(long, value_name = "R")]
    pub ball: f64,
    /// Single Robin parameter in [-sigma_1, 0]
    #[arg(long, allow_negative_numbers = true, conflicts_with = "alpha_grid")]
    pub alpha: Option<f64>,
    /// Number of equally spaced Robin parameters from -sigma_1 to 0
    #[arg(long, value_name = "N")]
    pub alpha_grid: Option<usize>,
    #[command(flatten)]
    pub tol: TolOverrides,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    /// Match the volume of the ball of radius R
    #[arg(long, value_name = "R", conflicts_with = "volume", required_unless_present = "volume")]
    pub volume_of_ball: Option<f64>,
    /// Volume (without the angular factor)
    #[arg(long)]
    pub volume: Option<f64>,
    #[arg(long, allow_negative_numbers = true, conflicts_with = "steklov_fraction")]
    #[arg(required_unless_present = "steklov_fraction")]
    pub alpha: Option<f64>,
    /// Use alpha = -f sigma_1 of the matched ball
    #[arg(long, value_name = "F")]
    pub steklov_fraction: Option<f64>,
    /// Inner radii: a:b:N (geometric) or a comma-separated list
    #[arg(long)]
    pub inners: String,
    #[command(flatten)]
    pub tol: TolOverrides,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    /// Spaces such as R2,C3,H2,O2 (a bare field letter uses --n)
    #[arg(long, value_delimiter = ',', required = true)]
    pub spaces: Vec<String>,
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    /// Ball radii
    #[arg(long, value_delimiter = ',', required = true)]
    pub radii: Vec<f64>,
    /// Robin parameters
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    #[arg(required_unless_present = "alpha_grid", conflicts_with = "alpha_grid")]
    pub alphas: Vec<f64>,
    /// Equally spaced Robin parameters from -sigma_1(B_R) to 0
    #[arg(long, value_name = "N")]
    pub alpha_grid: Option<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [0u8, 1])]
    pub ells: Vec<u8>,
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2])]
    pub indices: Vec<usize>,
    #[command(flatten)]
    pub tol: TolOverrides,
    #[command(flatten)]
    pub output: Output,
}

/// One solved eigenvalue in the shared CSV/JSON row schema.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenRow {
    pub kind: &'static str,
    pub n: u32,
    pub k: u32,
    pub m: u32,
    #[serde(rename = "R1")]
    pub r1: f64,
    #[serde(rename = "R2")]
    pub r2: f64,
    pub alpha: f64,
    pub ell: u8,
    pub index: usize,
    pub lambda: f64,
    pub nodes: usize,
    pub bc_residual: f64,
}

pub const EIGEN_COLUMNS: [&str; 12] =
    ["kind", "n", "k", "m", "R1", "R2", "alpha", "ell", "index", "lambda", "nodes", "bc_residual"];

impl EigenRow {
    fn new(space: &SpaceParams, domain: &RadialDomain, alpha: f64, e: &EigenResult) -> Self {
        Self {
            kind: space.kind.symbol(),
            n: space.n,
            k: space.k,
            m: space.m,
            r1: domain.inner,
            r2: domain.outer,
            alpha,
            ell: e.ell,
            index: e.index,
            lambda: e.lambda,
            nodes: e.nodes,
            bc_residual: e.bc_residual,
        }
    }
}

/// Error or assertion failure, rendered as a one-line JSON diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub kind: &'static str,
    pub exit_code: i32,
    pub message: String,
    pub payload: Value,
}

impl Diagnostic {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { kind: "validation", exit_code: 2, message: message.into(), payload: Value::Null }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self { kind: "io", exit_code: 2, message: message.into(), payload: Value::Null }
    }

    pub fn to_line(&self) -> String {
        let v = json!({
            "error": self.kind,
            "exit_code": self.exit_code,
            "message": self.message,
            "payload": round_json(self.payload.clone()),
        });
        serde_json::to_string(&v).expect("diagnostic serializes")
    }
}

impl From<Error> for Diagnostic {
    fn from(e: Error) -> Self {
        let payload = match &e {
            Error::NotConverged { iterations, lo, hi } => {
                json!({ "iterations": iterations, "lo": lo, "hi": hi })
            }
            Error::AlphaOutOfRange { alpha, lo, hi } => json!({ "alpha": alpha, "lo": lo, "hi": hi }),
            Error::IntegrationFailure { radius, .. } => json!({ "radius": radius }),
            _ => Value::Null,
        };
        Self { kind: e.kind(), exit_code: e.exit_code(), message: e.to_string(), payload }
    }
}

/// Rendered report plus an assertion failure to signal after emitting it.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub violation: Option<Diagnostic>,
}

pub fn execute(cli: &Cli) -> std::result::Result<Outcome, Diagnostic> {
    match &cli.command {
        Command::Eig(a) => run_eig(a),
        Command::Steklov(a) => run_steklov(a),
        Command::Check(a) => run_check(a),
        Command::Verify(a) => run_verify(a),
        Command::Sweep(a) => run_sweep(a),
    }
    .map_err(Diagnostic::from)
}

fn header(command: &str, args: &impl Serialize, tol: &Tolerances) -> Map<String, Value> {
    let mut h = Map::new();
    h.insert(
        "config".into(),
        json!({
            "command": command,
            "version": env!("CARGO_PKG_VERSION"),
            "args": serde_json::to_value(args).expect("arguments serialize"),
            "tolerance_env": std::env::var(PROFILE_ENV).ok(),
        }),
    );
    h.insert("tolerances".into(), serde_json::to_value(tol).expect("tolerances serialize"));
    h
}

fn run_eig(a: &EigArgs) -> Result<Outcome> {
    let tol = a.tol.resolve()?;
    let space = a.space.build()?;
    let domain = a.domain.build()?;
    let problem = RobinProblem::new(space, domain, a.alpha, a.ell)?;
    let e = eigen_radial(&problem, a.index, &tol)?;
    let rows = vec![EigenRow::new(&space, &domain, a.alpha, &e)];
    let head = header("eig", a, &tol);
    Ok(Outcome { text: render_rows(head, "results", &rows, &a.output), violation: None })
}

#[derive(Debug, Serialize)]
struct SteklovRow {
    kind: &'static str,
    n: u32,
    k: u32,
    m: u32,
    #[serde(rename = "R")]
    radius: f64,
    sigma1_direct: f64,
    sigma1_alpha_root: f64,
    route_difference: f64,
    sigma1_times_r: f64,
}

fn run_steklov(a: &SteklovArgs) -> Result<Outcome> {
    let tol = a.tol.resolve()?;
    let space = a.space.build()?;
    RadialDomain::ball(a.ball)?;
    let pair = steklov_pair(&space, a.ball, &tol)?;
    let rows = vec![SteklovRow {
        kind: space.kind.symbol(),
        n: space.n,
        k: space.k,
        m: space.m,
        radius: a.ball,
        sigma1_direct: pair.direct,
        sigma1_alpha_root: pair.alpha_root,
        route_difference: pair.direct - pair.alpha_root,
        sigma1_times_r: pair.direct * a.ball,
    }];
    let head = header("steklov", a, &tol);
    Ok(Outcome { text: render_rows(head, "results", &rows, &a.output), violation: None })
}

#[derive(Debug, Serialize)]
struct CheckRow {
    kind: &'static str,
    n: u32,
    k: u32,
    m: u32,
    #[serde(rename = "R")]
    radius: f64,
    alpha: f64,
    sigma1: f64,
    lambda2: f64,
    tau2: f64,
    slope_positive: bool,
    slope_margin: f64,
    log_slope: bool,
    log_slope_margin: f64,
    lambda2_nonnegative: bool,
    lambda2_margin: f64,
    mu1_below_tau2: bool,
    mu1_tau2_margin: f64,
    steklov_bound: bool,
    steklov_margin: f64,
    all_hold: bool,
}

impl From<&PropositionReport> for CheckRow {
    fn from(r: &PropositionReport) -> Self {
        Self {
            kind: r.space.kind.symbol(),
            n: r.space.n,
            k: r.space.k,
            m: r.space.m,
            radius: r.radius,
            alpha: r.alpha,
            sigma1: r.sigma1,
            lambda2: r.lambda2,
            tau2: r.tau2,
            slope_positive: r.slope_positive.holds,
            slope_margin: r.slope_positive.margin,
            log_slope: r.log_slope.holds,
            log_slope_margin: r.log_slope.margin,
            lambda2_nonnegative: r.lambda2_nonnegative.holds,
            lambda2_margin: r.lambda2_nonnegative.margin,
            mu1_below_tau2: r.mu1_below_tau2.holds,
            mu1_tau2_margin: r.mu1_below_tau2.margin,
            steklov_bound: r.steklov_bound.holds,
            steklov_margin: r.steklov_bound.margin,
            all_hold: r.all_hold(),
        }
    }
}

fn run_check(a: &CheckArgs) -> Result<Outcome> {
    let tol = a.tol.resolve()?;
    let space = a.space.build()?;
    RadialDomain::ball(a.ball)?;
    let reports = match (a.alpha, a.alpha_grid) {
        (Some(alpha), _) => {
            let sigma1 = steklov_first(&space, a.ball, &tol)?;
            vec![check_with_sigma(&space, a.ball, alpha, sigma1, &tol)?]
        }
        (None, grid) => {
            let count = grid.unwrap_or(9);
            if count == 0 {
                return Err(Error::InvalidInput("alpha-grid needs at least one point".into()));
            }
            check_alpha_grid(&space, a.ball, count, &tol)?
        }
    };
    let rows: Vec<CheckRow> = reports.iter().map(CheckRow::from).collect();
    let violation = reports.iter().find(|r| !r.all_hold()).map(|r| Diagnostic {
        kind: "assertion",
        exit_code: 4,
        message: format!("ball properties fail at alpha = {}", r.alpha),
        payload: serde_json::to_value(CheckRow::from(r)).expect("row serializes"),
    });
    let head = header("check", a, &tol);
    Ok(Outcome { text: render_rows(head, "results", &rows, &a.output), violation })
}

/// Parses `a:b:N` (geometric) or a comma-separated list of radii.
pub fn parse_inners(arg: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidInput(format!("cannot parse inner radii '{arg}'"));
    if arg.contains(':') {
        let parts: Vec<&str> = arg.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
        geometric_range(a, b, n)
    } else {
        arg.split(',').map(|s| s.trim().parse::<f64>().map_err(|_| bad())).collect()
    }
}

#[derive(Debug, Serialize)]
struct VerifyRow {
    kind: &'static str,
    n: u32,
    k: u32,
    m: u32,
    alpha: f64,
    #[serde(rename = "R1")]
    r1: f64,
    #[serde(rename = "R2")]
    r2: f64,
    lambda2_domain: f64,
    mode: &'static str,
    lambda2_ball: f64,
    gap: f64,
    asymmetry: f64,
    rayleigh_bound: f64,
}

fn run_verify(a: &VerifyArgs) -> Result<Outcome> {
    let tol = a.tol.resolve()?;
    let space = a.space.build()?;
    let volume = match (a.volume_of_ball, a.volume) {
        (Some(r), _) => ball_volume(&space, r)?,
        (None, Some(v)) => v,
        (None, None) => return Err(Error::InvalidInput("a volume is required".into())),
    };
    let alpha = match (a.alpha, a.steklov_fraction) {
        (Some(alpha), _) => alpha,
        (None, Some(f)) => {
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::Domain { what: "steklov fraction", value: f });
            }
            -f * steklov_first(&space, radius_for_volume(&space, volume)?, &tol)?
        }
        (None, None) => return Err(Error::InvalidInput("alpha or steklov-fraction is required".into())),
    };
    let inners = parse_inners(&a.inners)?;
    let report = verify_theorem(&space, volume, alpha, &inners, &tol)?;
    let violation = report.rows.iter().find(|r| !(r.gap > 0.0)).map(|r| Diagnostic {
        kind: "assertion",
        exit_code: 4,
        message: format!("non-positive gap {} at inner radius {}", r.gap, r.domain.inner),
        payload: serde_json::to_value(r).expect("row serializes"),
    });
    let head = header("verify", a, &tol);
    let text = match a.output.format {
        Format::Json => render_json(head, "report", &report),
        Format::Csv => {
            let rows: Vec<VerifyRow> = verify_rows(&report);
            render_csv(&head, &rows)
        }
    };
    Ok(Outcome { text, violation })
}

fn verify_rows(report: &TheoremReport) -> Vec<VerifyRow> {
    let s = &report.space;
    report
        .rows
        .iter()
        .map(|r| VerifyRow {
            kind: s.kind.symbol(),
            n: s.n,
            k: s.k,
            m: s.m,
            alpha: report.alpha,
            r1: r.domain.inner,
            r2: r.domain.outer,
            lambda2_domain: r.lambda2_domain,
            mode: match r.mode {
                crate::compare::AnnulusMode::Tau2 => "tau2",
                crate::compare::AnnulusMode::Mu1 => "mu1",
            },
            lambda2_ball: r.lambda2_ball,
            gap: r.gap,
            asymmetry: r.asymmetry,
            rayleigh_bound: r.rayleigh_bound,
        })
        .collect()
}

/// Parses `R2`, `C3`, `O2` or a bare field letter (dimension `default_n`).
pub fn parse_space(token: &str, default_n: u32) -> Result<SpaceParams> {
    let t = token.trim();
    let split = t.find(|c: char| c.is_ascii_digit()).unwrap_or(t.len());
    let kind: FieldKind = t[..split].parse()?;
    let n = if split == t.len() {
        default_n
    } else {
        t[split..]
            .parse()
            .map_err(|_| Error::InvalidInput(format!("cannot parse space '{token}'")))?
    };
    make_space(kind, n)
}

fn run_sweep(a: &SweepArgs) -> Result<Outcome> {
    let tol = a.tol.resolve()?;
    let spaces: Vec<SpaceParams> = a.spaces.iter().map(|s| parse_space(s, a.n)).collect::<Result<_>>()?;
    if a.ells.iter().any(|&l| l > 1) {
        return Err(Error::InvalidInput("ells must be 0 or 1".into()));
    }
    if a.indices.contains(&0) {
        return Err(Error::InvalidInput("indices are 1-based".into()));
    }
    let mut cases = Vec::new();
    for space in &spaces {
        for &radius in &a.radii {
            let domain = RadialDomain::ball(radius)?;
            let alphas = match a.alpha_grid {
                Some(count) => alpha_grid(steklov_first(space, radius, &tol)?, count),
                None => a.alphas.clone(),
            };
            for alpha in alphas {
                for &ell in &a.ells {
                    for &index in &a.indices {
                        cases.push((*space, domain, alpha, ell, index));
                    }
                }
            }
        }
    }
    let rows: Vec<EigenRow> = cases
        .par_iter()
        .map(|&(space, domain, alpha, ell, index)| {
            let p = RobinProblem::new(space, domain, alpha, ell)?;
            let e = eigen_radial(&p, index, &tol)?;
            Ok(EigenRow::new(&space, &domain, alpha, &e))
        })
        .collect::<Result<_>>()?;
    let head = header("sweep", a, &tol);
    Ok(Outcome { text: render_rows(head, "results", &rows, &a.output), violation: None })
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x.is_finite() && x != 0.0 {
        format!("{x:.11e}").parse().expect("formatted float parses")
    } else {
        x
    }
}

fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round12(n.as_f64().expect("f64 number"));
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

fn format_number(x: f64) -> String {
    let x = round12(x);
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn render_json(mut head: Map<String, Value>, key: &str, body: &impl Serialize) -> String {
    head.insert(key.into(), serde_json::to_value(body).expect("report serializes"));
    let mut s = serde_json::to_string_pretty(&round_json(Value::Object(head))).expect("json renders");
    s.push('\n');
    s
}

fn render_rows<T: Serialize>(head: Map<String, Value>, key: &str, rows: &[T], out: &Output) -> String {
    match out.format {
        Format::Json => render_json(head, key, &rows),
        Format::Csv => render_csv(&head, rows),
    }
}

fn render_csv<T: Serialize>(head: &Map<String, Value>, rows: &[T]) -> String {
    let mut text = String::new();
    for (k, v) in head {
        text.push_str(&format!("# {k}: {}\n", serde_json::to_string(&round_json(v.clone())).expect("json renders")));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut wrote_header = false;
    for row in rows {
        let Value::Object(fields) = serde_json::to_value(row).expect("row serializes") else {
            unreachable!("rows are structs")
        };
        if !wrote_header {
            w.write_record(fields.keys()).expect("in-memory write");
            wrote_header = true;
        }
        w.write_record(fields.values().map(|v| match v {
            Value::Number(n) if n.is_f64() => format_number(n.as_f64().expect("f64 number")),
            Value::String(s) => s.clone(),
            Value::Null => String::new(),
            other => other.to_string(),
        }))
        .expect("in-memory write");
    }
    text.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf-8 csv"));
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_is_twelve_digits() {
        assert_eq!(round12(1.234_567_890_123_456), 1.234_567_890_12);
        assert_eq!(round12(0.0), 0.0);
        assert!(round12(f64::NAN).is_nan());
        assert_eq!(format_number(2.5e-9), "2.5e-9");
        assert_eq!(format_number(0.125), "0.125");
    }

    #[test]
    fn inner_radius_specs() {
        let g = parse_inners("0.05:0.5:10").unwrap();
        assert_eq!(g.len(), 10);
        assert_eq!(parse_inners("0.1, 0.2").unwrap(), vec![0.1, 0.2]);
        assert!(parse_inners("0.1:0.2").is_err());
        assert!(parse_inners("x").is_err());
    }

    #[test]
    fn space_tokens() {
        assert_eq!(parse_space("C3", 2).unwrap().m, 6);
        assert_eq!(parse_space("H", 3).unwrap().m, 12);
        assert!(parse_space("O3", 2).is_err());
        assert!(parse_space("X2", 2).is_err());
    }

    #[test]
    fn eigen_row_columns() {
        let row = EigenRow {
            kind: "R",
            n: 2,
            k: 1,
            m: 2,
            r1: 0.0,
            r2: 1.0,
            alpha: 0.0,
            ell: 1,
            index: 1,
            lambda: 1.0,
            nodes: 0,
            bc_residual: 0.0,
        };
        let Value::Object(o) = serde_json::to_value(&row).unwrap() else { panic!() };
        assert_eq!(o.keys().map(String::as_str).collect::<Vec<_>>(), EIGEN_COLUMNS);
    }
}
