//! The `scdr` command line: parsing, input files and report printing.

pub mod dsl;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bracket::{bracket_precision, Bracket};
use crate::components::Extension;
use crate::error::{Result, ScdrError};
use crate::geometry::{build_h, build_h0, build_j, quaternionic_triple_flat, CoordinateChange, EndoTensor, MetricData, VectorField};
use crate::scalars::CoeffFunction;
use crate::superconf::StructureReport;
use crate::terms::{Algebra, FieldExpr};

pub const DEFAULT_CUTOFF: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScalarRing {
    Rational,
    GaussianRational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Ns,
    N2,
    N4,
    Components,
    Coordchange,
    Jacobi,
    Vectorfields,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExtensionArg {
    N1,
    N2,
    N4,
}

/// Lambda-brackets, normal forms and superconformal checks for the
/// N=1 SUSY chiral de Rham complex.
#[derive(Debug, Parser)]
#[command(name = "scdr", version)]
pub struct Cli {
    /// Number of coordinates; inferred from the inputs when omitted.
    #[arg(long, global = true)]
    pub dim: Option<usize>,

    /// Jet cutoff for coefficient functions.
    #[arg(long, global = true, env = "SCDR_CUTOFF")]
    pub cutoff: Option<u32>,

    #[arg(long, global = true, value_enum, default_value = "gaussian-rational")]
    pub scalar_ring: ScalarRing,

    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: OutputFormat,

    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lambda-bracket of two expressions, given as `[a _ b]` or as two arguments.
    Bracket {
        first: String,
        second: Option<String>,
    },
    /// Canonical normal form of an expression.
    Normalize { expr: String },
    /// Runs a verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,

    /// `flat` or a path to a metric file.
    #[arg(long)]
    pub metric: Option<String>,

    /// Named tensor, `name=path`; the file holds a matrix or a metric file with a `tensors` table.
    #[arg(long = "tensor", value_name = "NAME=PATH")]
    pub tensors: Vec<String>,

    /// Coordinate change file; `path#name` picks an entry of a `changes` table.
    #[arg(long)]
    pub change: Option<String>,

    /// Use the constant quaternionic triple on flat space.
    #[arg(long)]
    pub flat_quaternionic: bool,

    /// Replace H by H⁰, omitting the TS log √det g term.
    #[arg(long)]
    pub drop_g_term: bool,

    #[arg(long, value_enum, default_value = "n1")]
    pub extension: ExtensionArg,

    /// Number of random samples for `jacobi`.
    #[arg(long, default_value_t = 500)]
    pub samples: usize,

    /// Size of each random expression for `jacobi`.
    #[arg(long, default_value_t = 3)]
    pub size: usize,

    /// Vector field coefficients as JSON, given twice for `vectorfields`.
    #[arg(long = "field", value_name = "JSON")]
    pub fields: Vec<String>,
}

/// An input file: `{dim, cutoff, g, tensors, changes}`, every key optional
/// except as required by the suite.
#[derive(Debug, Default)]
pub struct InputFile {
    pub dim: Option<usize>,
    pub cutoff: Option<u32>,
    pub raw: Value,
}

impl InputFile {
    pub fn read(path: &str) -> Result<Self> {
        let text = std::fs::read_to_string(Path::new(path)).map_err(|e| ScdrError::Io(format!("{path}: {e}")))?;
        let raw: Value = serde_json::from_str(&text).map_err(|e| ScdrError::Input(format!("{path}: {e}")))?;
        Ok(Self::from_value(raw))
    }

    pub fn from_value(raw: Value) -> Self {
        let dim = raw.get("dim").and_then(Value::as_u64).map(|d| d as usize);
        let cutoff = raw.get("cutoff").and_then(Value::as_u64).map(|d| d as u32);
        InputFile { dim, cutoff, raw }
    }
}

/// Resolved dimension, cutoff and scalar ring for one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SessionConfig {
    pub dim: usize,
    pub cutoff: u32,
    pub scalar_ring: ScalarRing,
}

impl SessionConfig {
    pub fn new(dim: usize, cutoff: u32, scalar_ring: ScalarRing) -> Result<Self> {
        if dim == 0 {
            return Err(ScdrError::Input("dimension must be at least 1".into()));
        }
        Ok(SessionConfig { dim, cutoff, scalar_ring })
    }

    pub fn algebra(&self) -> Algebra {
        Algebra::new(self.dim, self.cutoff)
    }

    fn check_ring(&self, e: &FieldExpr) -> Result<()> {
        if self.scalar_ring == ScalarRing::Rational && !dsl::is_rational(e) {
            return Err(ScdrError::Input("expression uses i but the scalar ring is rational".into()));
        }
        Ok(())
    }

    fn require_gaussian(&self, what: &str) -> Result<()> {
        if self.scalar_ring == ScalarRing::Rational {
            return Err(ScdrError::Precondition(format!("{what} needs --scalar-ring gaussian-rational")));
        }
        Ok(())
    }
}

/// Everything printed by one command, plus whether it succeeded.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub success: bool,
}

impl Outcome {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Text => self.text.clone(),
            OutputFormat::Json => serde_json::to_string_pretty(&self.json).expect("json values serialize"),
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.success {
            0
        } else {
            1
        }
    }
}

fn cutoff_of(cli_cutoff: Option<u32>, file: Option<&InputFile>) -> u32 {
    cli_cutoff.or_else(|| file.and_then(|f| f.cutoff)).unwrap_or(DEFAULT_CUTOFF)
}

/// Structured rendering of a bracket for JSON output.
pub fn bracket_json(p: &Bracket) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(m, c)| json!({"lambda": m.lambda, "chi": m.chi, "coefficient": c.to_string()}))
        .collect();
    let precision = bracket_precision(p);
    json!({
        "rendering": p.to_string(),
        "terms": terms,
        "exact": precision.is_exact(),
    })
}

fn parse_pair(cli: &Cli, first: &str, second: Option<&str>) -> Result<(SessionConfig, FieldExpr, FieldExpr)> {
    let dim = match cli.dim {
        Some(d) => d,
        None => {
            let a = dsl::infer_dim(first)?;
            let b = second.map(dsl::infer_dim).transpose()?.unwrap_or(1);
            a.max(b)
        }
    };
    let cfg = SessionConfig::new(dim, cutoff_of(cli.cutoff, None), cli.scalar_ring)?;
    let (a, b) = match second {
        Some(s) => (dsl::parse_expr(first, dim, cfg.cutoff)?, dsl::parse_expr(s, dim, cfg.cutoff)?),
        None => dsl::parse_query(first, dim, cfg.cutoff)?,
    };
    cfg.check_ring(&a)?;
    cfg.check_ring(&b)?;
    Ok((cfg, a, b))
}

pub fn cmd_bracket(cli: &Cli, first: &str, second: Option<&str>) -> Result<Outcome> {
    let (cfg, a, b) = parse_pair(cli, first, second)?;
    let p = cfg.algebra().lambda_bracket(&a, &b)?;
    Ok(Outcome { text: p.to_string(), json: bracket_json(&p), success: true })
}

pub fn cmd_normalize(cli: &Cli, src: &str) -> Result<Outcome> {
    let dim = match cli.dim {
        Some(d) => d,
        None => dsl::infer_dim(src)?,
    };
    let cfg = SessionConfig::new(dim, cutoff_of(cli.cutoff, None), cli.scalar_ring)?;
    let e = dsl::parse_expr(src, dim, cfg.cutoff)?;
    cfg.check_ring(&e)?;
    let nf = cfg.algebra().normalize(&e)?;
    let text = nf.to_string();
    let json = json!({"rendering": text, "exact": nf.precision().is_exact()});
    Ok(Outcome { text, json, success: true })
}

/// The metric file, if `--metric` names one.
fn metric_file(v: &VerifyArgs) -> Result<Option<InputFile>> {
    match v.metric.as_deref() {
        None | Some("flat") => Ok(None),
        Some(path) => InputFile::read(path).map(Some),
    }
}

fn split_named(arg: &str, sep: char) -> (&str, Option<&str>) {
    match arg.rsplit_once(sep) {
        Some((a, b)) if !b.is_empty() => (a, Some(b)),
        _ => (arg, None),
    }
}

fn load_change(arg: &str, cutoff: u32) -> Result<CoordinateChange> {
    let (path, name) = split_named(arg, '#');
    let file = InputFile::read(path)?;
    let raw = &file.raw;
    let entry = if raw.get("forward").is_some() {
        raw.clone()
    } else {
        let table = raw
            .get("changes")
            .and_then(Value::as_object)
            .ok_or_else(|| ScdrError::Input(format!("{path}: no coordinate change found")))?;
        let picked = match name {
            Some(n) => table.get(n).ok_or_else(|| ScdrError::Input(format!("{path}: no change named {n}")))?,
            None if table.len() == 1 => table.values().next().expect("one entry"),
            None => return Err(ScdrError::Input(format!("{path}: several changes, pick one with {path}#name"))),
        };
        let mut obj = picked.clone();
        if obj.get("dim").is_none() {
            if let (Some(d), Value::Object(m)) = (file.dim, &mut obj) {
                m.insert("dim".into(), json!(d));
            }
        }
        obj
    };
    CoordinateChange::from_json(cutoff, &entry)
}

fn load_tensors(v: &VerifyArgs, metric: Option<&InputFile>, dim: usize, cutoff: u32) -> Result<BTreeMap<String, EndoTensor>> {
    let mut out = BTreeMap::new();
    if let Some(table) = metric.and_then(|f| f.raw.get("tensors")).and_then(Value::as_object) {
        for (name, m) in table {
            out.insert(name.clone(), EndoTensor::from_json(dim, cutoff, m)?);
        }
    }
    for arg in &v.tensors {
        let (name, path) = arg
            .split_once('=')
            .ok_or_else(|| ScdrError::Input(format!("--tensor expects name=path, got {arg}")))?;
        let file = InputFile::read(path)?;
        let m = match &file.raw {
            Value::Array(_) => file.raw.clone(),
            other => other
                .get("tensors")
                .and_then(|t| t.get(name))
                .cloned()
                .ok_or_else(|| ScdrError::Input(format!("{path}: no tensor named {name}")))?,
        };
        out.insert(name.to_string(), EndoTensor::from_json(dim, cutoff, &m)?);
    }
    Ok(out)
}

fn parse_field(src: &str, dim: usize, cutoff: u32) -> Result<VectorField> {
    let v: Value = serde_json::from_str(src).map_err(|e| ScdrError::Input(format!("--field: {e}")))?;
    let coeffs = match &v {
        Value::Array(xs) => xs.iter().map(|x| CoeffFunction::from_json(dim, cutoff, x)).collect::<Result<Vec<_>>>()?,
        _ => {
            let mut cs = vec![CoeffFunction::zero(dim, cutoff); dim];
            cs[0] = CoeffFunction::from_json(dim, cutoff, &v)?;
            cs
        }
    };
    VectorField::new(coeffs)
}

fn default_fields(dim: usize, cutoff: u32) -> Result<(VectorField, VectorField)> {
    let x = CoeffFunction::variable(dim, cutoff, 1)?;
    let one = CoeffFunction::one(dim, cutoff);
    let f = VectorField::single(x.add(&x.pow(3)), 1)?;
    let h = VectorField::single(one.sub(&x.pow(2)), 1)?;
    Ok((f, h))
}

fn tensor<'a>(ts: &'a BTreeMap<String, EndoTensor>, name: &str) -> Result<&'a EndoTensor> {
    ts.get(name).ok_or_else(|| ScdrError::Input(format!("missing tensor {name}; pass --tensor {name}=path")))
}

/// Runs a suite and returns its reports in a fixed order.
pub fn run_suite(cli: &Cli, v: &VerifyArgs) -> Result<Vec<StructureReport>> {
    let file = metric_file(v)?;
    let cutoff = cutoff_of(cli.cutoff, file.as_ref());
    let change = v.change.as_deref().map(|c| load_change(c, cutoff)).transpose()?;
    let dim = cli
        .dim
        .or_else(|| file.as_ref().and_then(|f| f.dim))
        .or_else(|| change.as_ref().map(CoordinateChange::dim))
        .unwrap_or(1);
    let cfg = SessionConfig::new(dim, cutoff, cli.scalar_ring)?;
    let metric = match file.as_ref() {
        Some(f) => {
            let g = f.raw.get("g").ok_or_else(|| ScdrError::Input("metric file needs \"g\"".into()))?;
            MetricData::from_json(dim, cutoff, g)?
        }
        None => MetricData::flat(dim, cutoff),
    };
    let tensors = load_tensors(v, file.as_ref(), dim, cutoff)?;
    let alg = cfg.algebra();
    let h = if v.drop_g_term { build_h0(dim) } else { build_h(&metric) };
    let mut reports = Vec::new();
    match v.suite {
        Suite::Ns => {
            reports.push(alg.check_ns(&h)?);
            if let Some(ch) = &change {
                let moved = ch.pushforward_metric(&metric)?;
                let h_new = if v.drop_g_term { build_h0(dim) } else { build_h(&moved) };
                reports.push(alg.check_covariance("H covariance", &h, &h_new, ch)?);
            }
        }
        Suite::N2 => {
            cfg.require_gaussian("n2")?;
            let omega = match tensors.get("omega") {
                Some(t) => t.clone(),
                None => standard_complex(dim, cutoff)?,
            };
            let j = build_j(&omega, &metric)?;
            reports.push(alg.check_n2(&h, &j)?);
        }
        Suite::N4 => {
            cfg.require_gaussian("n4")?;
            let [i, j, k] = quaternionic(v, &tensors, dim, cutoff)?;
            let js = [build_j(&i, &metric)?, build_j(&j, &metric)?, build_j(&k, &metric)?];
            reports.push(alg.check_n4(&h, [&js[0], &js[1], &js[2]])?);
        }
        Suite::Components => {
            let kind = match v.extension {
                ExtensionArg::N1 => Extension::N1,
                ExtensionArg::N2 => Extension::N2,
                ExtensionArg::N4 => Extension::N4,
            };
            let js: Vec<FieldExpr> = match kind {
                Extension::N1 => Vec::new(),
                Extension::N2 => {
                    cfg.require_gaussian("components --extension n2")?;
                    let omega = match tensors.get("omega") {
                        Some(t) => t.clone(),
                        None => standard_complex(dim, cutoff)?,
                    };
                    vec![build_j(&omega, &metric)?]
                }
                Extension::N4 => {
                    cfg.require_gaussian("components --extension n4")?;
                    let triple = quaternionic(v, &tensors, dim, cutoff)?;
                    triple.iter().map(|t| build_j(t, &metric)).collect::<Result<_>>()?
                }
            };
            let refs: Vec<&FieldExpr> = js.iter().collect();
            reports.push(alg.verify_decomposition(kind, &h, &refs)?);
        }
        Suite::Coordchange => {
            let ch = change.as_ref().ok_or_else(|| ScdrError::Input("coordchange needs --change".into()))?;
            if ch.dim() != dim {
                return Err(ScdrError::Input(format!("change has dimension {}, session {dim}", ch.dim())));
            }
            reports.push(alg.check_transformed_brackets(ch)?);
            reports.push(alg.check_transformed_components(ch)?);
        }
        Suite::Jacobi => {
            let (rep, _) = alg.check_axioms(cli.seed, v.samples, v.size);
            reports.push(rep);
        }
        Suite::Vectorfields => {
            let (x, y) = match v.fields.as_slice() {
                [] => default_fields(dim, cutoff)?,
                [a, b] => (parse_field(a, dim, cutoff)?, parse_field(b, dim, cutoff)?),
                _ => return Err(ScdrError::Input("vectorfields takes exactly two --field values".into())),
            };
            reports.push(alg.check_vector_fields(&x, &y)?);
        }
    }
    Ok(reports)
}

fn standard_complex(dim: usize, cutoff: u32) -> Result<EndoTensor> {
    if !dim.is_multiple_of(2) {
        return Err(ScdrError::Input(format!("the flat complex structure needs even dimension, got {dim}")));
    }
    Ok(EndoTensor::standard_complex(dim / 2, cutoff))
}

fn quaternionic(v: &VerifyArgs, ts: &BTreeMap<String, EndoTensor>, dim: usize, cutoff: u32) -> Result<[EndoTensor; 3]> {
    if v.flat_quaternionic || !["I", "J", "K"].iter().any(|n| ts.contains_key(*n)) {
        if !dim.is_multiple_of(4) {
            return Err(ScdrError::Input(format!("the flat quaternionic triple needs dimension 4n, got {dim}")));
        }
        let (i, j, k) = quaternionic_triple_flat(dim / 4, cutoff);
        return Ok([i, j, k]);
    }
    Ok([tensor(ts, "I")?.clone(), tensor(ts, "J")?.clone(), tensor(ts, "K")?.clone()])
}

pub fn cmd_verify(cli: &Cli, v: &VerifyArgs) -> Result<Outcome> {
    let reports = run_suite(cli, v)?;
    let text = reports.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n");
    let json = Value::Array(reports.iter().map(StructureReport::to_json).collect());
    Ok(Outcome { text, json, success: reports.iter().all(StructureReport::passed) })
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Bracket { first, second } => cmd_bracket(cli, first, second.as_deref()),
        Command::Normalize { expr } => cmd_normalize(cli, expr),
        Command::Verify(v) => cmd_verify(cli, v),
    }
}

fn error_json(e: &ScdrError) -> Value {
    let mut v = json!({"error": e.to_string()});
    if let ScdrError::Parse { position, .. } = e {
        v["position"] = json!(position);
    }
    v
}

/// Runs the CLI on `args` and writes to the given streams; returns the exit code.
pub fn run_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match run(&cli) {
        Ok(o) => {
            let _ = writeln!(out, "{}", o.render(cli.format));
            o.exit_code()
        }
        Err(e) => {
            match cli.format {
                OutputFormat::Text => {
                    let _ = writeln!(err, "error: {e}");
                }
                OutputFormat::Json => {
                    let _ = writeln!(out, "{}", error_json(&e));
                }
            }
            2
        }
    }
}

pub fn main() -> ! {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run_with_args(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    std::process::exit(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["scdr"];
        full.extend_from_slice(args);
        let code = run_with_args(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap() + &String::from_utf8(err).unwrap())
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(run_str(&["bracket", "[B1 _ Psi1]"]), (0, "1\n".into()));
        assert_eq!(run_str(&["bracket", "[B1 _ B1]"]), (0, "0\n".into()));
        assert_eq!(run_str(&["bracket", "[S(B1) _ Psi1]"]), (0, "chi\n".into()));
        assert_eq!(run_str(&["bracket", "S(B1)", "Psi1"]), (0, "chi\n".into()));
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(run_str(&["normalize", ":vac B1:"]), (0, "B1\n".into()));
        assert_eq!(run_str(&["normalize", ":Psi1 S(B1): + :S(B1) Psi1:"]), (0, "0\n".into()));
        assert_eq!(run_str(&["normalize", "S(S(B1))"]), (0, "T B1\n".into()));
    }

    #[test]
    fn errors_exit_two() {
        let (code, msg) = run_str(&["normalize", ":B1"]);
        assert_eq!(code, 2);
        assert!(msg.contains("parse error"), "{msg}");
        let (code, _) = run_str(&["normalize", "B1 + Psi1"]);
        assert_eq!(code, 2);
        let (code, _) = run_str(&["--scalar-ring", "rational", "normalize", "i * B1"]);
        assert_eq!(code, 2);
        let (code, _) = run_str(&["verify", "coordchange", "--dim", "1"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn flat_ns_and_json() {
        let (code, text) = run_str(&["--dim", "2", "verify", "ns", "--metric", "flat"]);
        assert_eq!(code, 0);
        assert_eq!(text, "ns: PASS, c = 6, exact\n");
        let (code, text) = run_str(&["--dim", "1", "--format", "json", "verify", "ns"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v[0]["verdict"], "pass");
        assert_eq!(v[0]["central_charge"], "3");
    }
}
