//! Command-line front end: argument parsing, the three subcommands and the
//! CSV / JSON record writers. The `sharpgrad` binary only forwards to [`run`].

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::constants::{directional_constant, radial_constant_closed3, representation_prefactor, Method, ProblemPoint};
use crate::identities::s_integrals;
use crate::majorant3::majorant;
use crate::oracle::{constant_oracle_direct, constant_oracle_moebius, DEFAULT_REFINEMENT};
use crate::verify::{run_suite, Relation, Suite, VerifyOptions};
use crate::{ConstantEstimate, Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const DEFAULT_TOL: f64 = 1e-9;

/// A single value or an inclusive `start:stop:count` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn single(v: f64) -> Self {
        Self { start: v, stop: v, count: 1 }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|i| if i + 1 == self.count { self.stop } else { self.start + step * i as f64 }).collect()
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| -> Result<f64> {
            let v: f64 = t.trim().parse().map_err(|_| Error::domain(format!("not a number: `{t}`")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::domain(format!("not a finite number: `{t}`")))
            }
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [v] => Ok(GridSpec::single(num(v)?)),
            [a, b, c] => {
                let count: usize = c.trim().parse().map_err(|_| Error::domain(format!("bad grid count `{c}`")))?;
                if count == 0 {
                    return Err(Error::domain("grid count must be at least 1"));
                }
                Ok(GridSpec { start: num(a)?, stop: num(b)?, count })
            }
            _ => Err(Error::domain(format!("expected a value or start:stop:count, got `{s}`"))),
        }
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.count == 1 {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}:{}:{}", self.start, self.stop, self.count)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Constant,
    Scan,
    Verify,
}

impl Command {
    fn as_str(&self) -> &'static str {
        match self {
            Command::Constant => "constant",
            Command::Scan => "scan",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub n: Option<usize>,
    pub rho: GridSpec,
    pub alpha: GridSpec,
    pub method: Method,
    pub suite: Suite,
    pub tol: f64,
    pub format: Format,
    pub kmax: usize,
    pub refinement: Option<usize>,
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            n: None,
            rho: GridSpec::single(0.0),
            alpha: GridSpec::single(0.0),
            method: Method::Representation,
            suite: Suite::All,
            tol: DEFAULT_TOL,
            format: if command == Command::Verify { Format::Json } else { Format::Csv },
            kmax: 200,
            refinement: None,
            jobs: None,
            seed: None,
        }
    }

    fn dimension(&self) -> usize {
        self.n.unwrap_or(3)
    }

    fn metadata(&self) -> String {
        let mut s = format!("sharpgrad {} {}", env!("CARGO_PKG_VERSION"), self.command.as_str());
        match self.command {
            Command::Constant | Command::Scan => {
                s += &format!(" n={} rho={} alpha={}", self.dimension(), self.rho, self.alpha);
                if self.command == Command::Constant {
                    s += &format!(" method={}", self.method);
                    if let Some(r) = self.refinement {
                        s += &format!(" refinement={r}");
                    }
                }
            }
            Command::Verify => {
                s += &format!(" suite={}", self.suite);
                if let Some(n) = self.n {
                    s += &format!(" n={n}");
                }
                s += &format!(" kmax={}", self.kmax);
            }
        }
        s += &format!(" tol={:e}", self.tol);
        s
    }

    fn points(&self) -> Result<Vec<ProblemPoint>> {
        let n = self.dimension();
        let mut out = Vec::with_capacity(self.rho.count * self.alpha.count);
        for rho in self.rho.values() {
            for alpha in self.alpha.values() {
                out.push(ProblemPoint::new(n, rho, alpha)?);
            }
        }
        Ok(out)
    }
}

/// One cell of an output record.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Float(f64),
    Int(u64),
    Str(String),
    Bool(bool),
}

impl Field {
    fn csv(&self) -> String {
        match self {
            Field::Float(v) if v.is_finite() => format!("{v:.16e}"),
            Field::Float(v) => format!("{v}"),
            Field::Int(v) => v.to_string(),
            Field::Bool(v) => v.to_string(),
            Field::Str(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Field::Str(s) => s.clone(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Field::Float(v) => {
                serde_json::Number::from_f64(*v).map(serde_json::Value::Number).unwrap_or(serde_json::Value::Null)
            }
            Field::Int(v) => (*v).into(),
            Field::Str(s) => s.clone().into(),
            Field::Bool(v) => (*v).into(),
        }
    }
}

pub type Record = Vec<(&'static str, Field)>;

/// Records plus the diagnostics that decide the exit code.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Outcome {
    pub records: Vec<Record>,
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.failures.is_empty() {
            EXIT_OK
        } else {
            EXIT_FAILURE
        }
    }

    pub fn column(&self, name: &str) -> Vec<&Field> {
        self.records.iter().filter_map(|r| r.iter().find(|(k, _)| *k == name).map(|(_, v)| v)).collect()
    }
}

pub fn write_records(out: &mut dyn Write, format: Format, meta: &str, records: &[Record]) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            writeln!(out, "# {meta}")?;
            if let Some(first) = records.first() {
                let head: Vec<&str> = first.iter().map(|(k, _)| *k).collect();
                writeln!(out, "{}", head.join(","))?;
            }
            for r in records {
                let row: Vec<String> = r.iter().map(|(_, v)| v.csv()).collect();
                writeln!(out, "{}", row.join(","))?;
            }
        }
        Format::Json => {
            let arr: Vec<serde_json::Value> = records
                .iter()
                .map(|r| serde_json::Value::Object(r.iter().map(|(k, v)| (k.to_string(), v.json())).collect()))
                .collect();
            serde_json::to_writer_pretty(&mut *out, &arr)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn estimate(cfg: &RunConfig, pt: &ProblemPoint) -> Result<ConstantEstimate> {
    let refinement = cfg.refinement.unwrap_or(DEFAULT_REFINEMENT);
    match cfg.method {
        Method::Representation => directional_constant(pt, cfg.tol),
        Method::OracleDirect => constant_oracle_direct(pt, refinement),
        Method::OracleMoebius => constant_oracle_moebius(pt, refinement),
        Method::Closed3 => {
            let value = radial_constant_closed3(pt.rho)?;
            Ok(ConstantEstimate {
                value,
                method: Method::Closed3,
                error_bound: 4.0 * f64::EPSILON * value,
                converged: true,
            })
        }
    }
}

/// One record `{n, rho, alpha, method, value, error_bound, converged}` per grid point, `rho` outermost.
pub fn cmd_constant(cfg: &RunConfig) -> Result<Outcome> {
    let points = cfg.points()?;
    if cfg.method == Method::Closed3 {
        if cfg.dimension() != 3 {
            return Err(Error::domain("method closed3 needs --n 3"));
        }
        if points.iter().any(|p| p.alpha != 0.0) {
            return Err(Error::domain("method closed3 is the radial constant; use --alpha 0"));
        }
    }
    let estimates: Vec<ConstantEstimate> = points.par_iter().map(|p| estimate(cfg, p)).collect::<Result<_>>()?;
    let mut outcome = Outcome::default();
    for (p, e) in points.iter().zip(&estimates) {
        if !e.converged {
            outcome.failures.push(format!(
                "not converged at n={} rho={} alpha={} (error bound {:e})",
                p.n, p.rho, p.alpha, e.error_bound
            ));
        }
        outcome.records.push(vec![
            ("n", Field::Int(p.n as u64)),
            ("rho", Field::Float(p.rho)),
            ("alpha", Field::Float(p.alpha)),
            ("method", Field::Str(e.method.to_string())),
            ("value", Field::Float(e.value)),
            ("error_bound", Field::Float(e.error_bound)),
            ("converged", Field::Bool(e.converged)),
        ]);
    }
    Ok(outcome)
}

/// The scaled majorant bounding `C(rho e1, l_alpha)` from above: `3 M / (2 (1 - rho^2))`
/// in dimension three, and the Cauchy-Schwarz bound over `S`, `S1`, `S2` otherwise.
pub fn majorant_scaled(pt: &ProblemPoint, tol: f64) -> Result<f64> {
    let pre = representation_prefactor(pt.n, pt.rho);
    if pt.n == 3 {
        Ok(pre * majorant(pt.rho, pt.alpha)?.m)
    } else {
        let s = s_integrals(pt.n, pt.rho, pt.alpha, (tol * 1e-2).max(1e-13))?;
        Ok(pre * (s.s + (s.s1 * s.s2).sqrt()))
    }
}

/// Records `{rho, alpha, n, C, majorant_scaled, gap}`; a gap below `-(tol + error bound)` is a failure.
pub fn cmd_scan(cfg: &RunConfig) -> Result<Outcome> {
    let points = cfg.points()?;
    let rows: Vec<(ConstantEstimate, f64)> = points
        .par_iter()
        .map(|p| Ok((directional_constant(p, cfg.tol)?, majorant_scaled(p, cfg.tol)?)))
        .collect::<Result<_>>()?;
    let mut outcome = Outcome::default();
    for (p, (c, m)) in points.iter().zip(&rows) {
        let gap = m - c.value;
        if gap < -(cfg.tol + c.error_bound) || !c.converged {
            outcome
                .failures
                .push(format!("rho={} alpha={} n={}: gap {gap:e}, converged {}", p.rho, p.alpha, p.n, c.converged));
        }
        outcome.records.push(vec![
            ("rho", Field::Float(p.rho)),
            ("alpha", Field::Float(p.alpha)),
            ("n", Field::Int(p.n as u64)),
            ("C", Field::Float(c.value)),
            ("majorant_scaled", Field::Float(*m)),
            ("gap", Field::Float(gap)),
        ]);
    }
    Ok(outcome)
}

/// Runs a named suite; each case becomes a record, each failing case a diagnostic.
pub fn cmd_verify(cfg: &RunConfig) -> Result<Outcome> {
    let opts = VerifyOptions { n: cfg.n, kmax: cfg.kmax, tol: (cfg.tol * 1e-2).max(1e-13) };
    if opts.kmax < 2 {
        return Err(Error::domain("kmax must be at least 2"));
    }
    let cases = run_suite(cfg.suite, &opts)?;
    let mut outcome = Outcome::default();
    for c in cases {
        if !c.passed {
            outcome
                .failures
                .push(format!("FAIL {} {}: lhs={:e} rhs={:e} gap={:e}", c.suite, c.case, c.lhs, c.rhs, c.gap));
        }
        outcome.records.push(vec![
            ("suite", Field::Str(c.suite.into())),
            ("case", Field::Str(c.case)),
            ("relation", Field::Str(if c.relation == Relation::Eq { "eq" } else { "le" }.into())),
            ("lhs", Field::Float(c.lhs)),
            ("rhs", Field::Float(c.rhs)),
            ("gap", Field::Float(c.gap)),
            ("tolerance", Field::Float(c.tolerance)),
            ("passed", Field::Bool(c.passed)),
        ]);
    }
    Ok(outcome)
}

fn dispatch(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.command {
        Command::Constant => cmd_constant(cfg),
        Command::Scan => cmd_scan(cfg),
        Command::Verify => cmd_verify(cfg),
    }
}

/// Runs a parsed config on a pool of `cfg.jobs` workers and writes the records.
pub fn execute(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker pool: {e}");
            return EXIT_FAILURE;
        }
    };
    match pool.install(|| dispatch(cfg)) {
        Ok(outcome) => {
            if let Err(e) = write_records(out, cfg.format, &cfg.metadata(), &outcome.records) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_FAILURE;
            }
            for f in &outcome.failures {
                let _ = writeln!(err, "{f}");
            }
            outcome.exit_code()
        }
        Err(e @ Error::Domain(_)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "sharpgrad",
    version,
    about = "Sharp gradient constants for bounded harmonic functions in the unit ball"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Args)]
struct Common {
    /// Tolerance of the quadratures.
    #[arg(long, env = "SHARPGRAD_TOL", default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    jobs: Option<usize>,
    /// Reserved; every method is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct PointArgs {
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Value or start:stop:count.
    #[arg(long, value_parser = parse_grid)]
    rho: GridSpec,
    /// Value or start:stop:count.
    #[arg(long, value_parser = parse_grid, default_value = "0")]
    alpha: GridSpec,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Evaluate C(rho e1, l_alpha) on a grid.
    Constant {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, value_parser = parse_method, default_value = "representation")]
        method: Method,
        /// Oracle grid refinement.
        #[arg(long)]
        refinement: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Alpha profile of the constant against its majorant.
    Scan {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_parser = parse_suite, default_value = "all")]
        suite: Suite,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 200)]
        kmax: usize,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_grid(s: &str) -> std::result::Result<GridSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl Common {
    fn apply(self, cfg: &mut RunConfig) {
        cfg.tol = self.tol;
        if let Some(f) = self.format {
            cfg.format = f;
        }
        cfg.jobs = self.jobs;
        cfg.seed = self.seed;
    }
}

impl PointArgs {
    fn apply(self, cfg: &mut RunConfig) {
        cfg.n = Some(self.n);
        cfg.rho = self.rho;
        cfg.alpha = self.alpha;
    }
}

/// Parses command-line arguments into a [`RunConfig`]; `Err` carries clap's
/// message and the exit code to use.
pub fn parse_args<I, T>(args: I) -> std::result::Result<RunConfig, (String, i32)>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| {
        let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        (e.render().to_string(), code)
    })?;
    let cfg = match cli.command {
        Sub::Constant { point, method, refinement, common } => {
            let mut cfg = RunConfig::new(Command::Constant);
            point.apply(&mut cfg);
            cfg.method = method;
            cfg.refinement = refinement;
            common.apply(&mut cfg);
            cfg
        }
        Sub::Scan { point, common } => {
            let mut cfg = RunConfig::new(Command::Scan);
            point.apply(&mut cfg);
            common.apply(&mut cfg);
            cfg
        }
        Sub::Verify { suite, n, kmax, common } => {
            let mut cfg = RunConfig::new(Command::Verify);
            cfg.suite = suite;
            cfg.n = n;
            cfg.kmax = kmax;
            common.apply(&mut cfg);
            cfg
        }
    };
    if !(cfg.tol > 0.0 && cfg.tol.is_finite()) {
        return Err((format!("error: tolerance must be positive, got {}\n", cfg.tol), EXIT_USAGE));
    }
    Ok(cfg)
}

/// Entry point of the binary: parse, execute, return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    match parse_args(args) {
        Ok(cfg) => execute(&cfg, &mut stdout.lock(), &mut stderr.lock()),
        Err((msg, code)) => {
            if code == EXIT_OK {
                let _ = write!(stdout.lock(), "{msg}");
            } else {
                let _ = write!(stderr.lock(), "{msg}");
            }
            code
        }
    }
}
