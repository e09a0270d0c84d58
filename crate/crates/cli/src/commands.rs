//! Subcommand definitions and their implementations. Each command returns
//! the text to print and whether it succeeded; usage problems are reported
//! separately so that they map to their own exit code.

use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperzeta::exactnum::{cyclotomic_field, CycField, Rat};
use hyperzeta::qcomb::{gauss_binom, gauss_binom_at};
use hyperzeta::repn::{primitive_vectors, restricted_simple, simple_module, WeightModule};
use hyperzeta::uzero::{primitive_coefficients, primitive_element, primitivity_residual};
use hyperzeta::weights::{CartanData, Weight};
use serde_json::{json, Value};
use thiserror::Error;

use crate::{expr, render, verify};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

/// Printed output plus pass/fail status.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub ok: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, ok: true }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hyperzeta", version, about = "Exact computations in the quantized hyperalgebra of sl2 at a root of unity")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gaussian binomial [m over t], symbolic in q or at q = zeta^d.
    Qbinom(QbinomArgs),
    /// Weight arithmetic.
    #[command(subcommand)]
    Weight(WeightCommand),
    /// Normal form of an expression in E, F, K, B and divided powers.
    Nf(NfArgs),
    /// Matrices, weights or primitive vectors of a simple module.
    Module(ModuleArgs),
    /// Run the property suites.
    Verify(VerifyArgs),
    /// The primitive element B + sum a_i K^i of the Cartan part.
    Primitive(PrimitiveArgs),
}

#[derive(Debug, Args)]
pub struct QbinomArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub m: i64,
    #[arg(long)]
    pub t: u32,
    /// Specialize at a primitive ell-th root of unity.
    #[arg(long)]
    pub ell: Option<i64>,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub d: i64,
    /// Print the Laurent polynomial in q even when --ell is given.
    #[arg(long)]
    pub symbolic: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct WeightOpts {
    /// Cartan type and rank, e.g. A1, B2, G2.
    #[arg(long, default_value = "A1")]
    pub cartan: String,
    #[arg(long)]
    pub ell: i64,
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Debug, Subcommand)]
pub enum WeightCommand {
    /// Sum of two weights, written `(lam0)(lam1)` or as JSON.
    Add {
        x: String,
        y: String,
        #[command(flatten)]
        opts: WeightOpts,
    },
    Sub {
        x: String,
        y: String,
        #[command(flatten)]
        opts: WeightOpts,
    },
    Neg {
        x: String,
        #[command(flatten)]
        opts: WeightOpts,
    },
    /// Image of an integral weight, given as comma-separated components.
    Embed {
        #[arg(allow_negative_numbers = true)]
        m: String,
        #[command(flatten)]
        opts: WeightOpts,
    },
    /// Whether x <= y in the dominance order.
    Leq {
        x: String,
        y: String,
        #[command(flatten)]
        opts: WeightOpts,
    },
}

#[derive(Debug, Args)]
pub struct NfArgs {
    pub expr: String,
    #[arg(long)]
    pub ell: i64,
    #[arg(long, default_value_t = 10_000)]
    pub max_terms: usize,
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModuleAction {
    Matrices,
    Weights,
    Primitive,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("which").required(true).args(["m0", "m"])))]
pub struct ModuleArgs {
    /// Restricted simple module L(m0), 0 <= m0 < ell.
    #[arg(long)]
    pub m0: Option<i64>,
    /// Simple module L(m) = L(m0) (x) V(m1)^Fr, m >= 0.
    #[arg(long)]
    pub m: Option<i64>,
    #[arg(long)]
    pub ell: i64,
    #[arg(long, value_enum, default_value = "weights")]
    pub action: ModuleAction,
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Qcomb,
    Weights,
    Uzero,
    Pbw,
    Repn,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    pub suite: Vec<SuiteArg>,
    #[arg(long, value_delimiter = ',', default_value = "3,5")]
    pub ell: Vec<i64>,
    #[arg(long, env = "HYPERZETA_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Include per-check wall-clock times (makes output run-dependent).
    #[arg(long)]
    pub timing: bool,
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Debug, Args)]
pub struct PrimitiveArgs {
    #[arg(long)]
    pub ell: i64,
    #[arg(long)]
    pub pretty: bool,
}

fn field(ell: i64) -> Result<Arc<CycField>, CliError> {
    cyclotomic_field(ell).map_err(|e| CliError::Usage(format!("invalid --ell {ell}: {e}")))
}

fn to_json(v: &Value) -> String {
    serde_json::to_string(v).expect("serializable")
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Qbinom(a) => qbinom(&a),
        Command::Weight(w) => weight(w),
        Command::Nf(a) => nf(&a),
        Command::Module(a) => module(&a),
        Command::Verify(a) => run_verify(&a),
        Command::Primitive(a) => primitive(&a),
    }
}

fn qbinom(a: &QbinomArgs) -> Result<Outcome, CliError> {
    match a.ell {
        Some(ell) if !a.symbolic => {
            let v = gauss_binom_at(a.m, a.t, ell, a.d).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(Outcome::ok(if a.json { to_json(&render::scalar_json(&v)) } else { v.to_string() }))
        }
        _ => {
            let p = gauss_binom(a.m, a.t);
            let text = if a.json {
                let terms: Vec<Value> = p.terms().map(|(e, c)| json!([e, c.to_string()])).collect();
                to_json(&json!({ "terms": terms, "text": p.to_string() }))
            } else {
                p.to_string()
            };
            Ok(Outcome::ok(text))
        }
    }
}

fn parse_cartan(s: &str, ell: i64) -> Result<Arc<CartanData>, CliError> {
    let mut chars = s.trim().chars();
    let kind = chars.next().map(|c| c.to_ascii_uppercase());
    let rank: Option<usize> = chars.as_str().parse().ok();
    match (kind, rank) {
        (Some(k), Some(n)) => CartanData::of_type(k, n, ell).map_err(|e| CliError::Usage(e.to_string())),
        _ => Err(CliError::Usage(format!("invalid Cartan type '{s}', expected e.g. A1 or B2"))),
    }
}

fn parse_rat(s: &str) -> Result<Rat, CliError> {
    s.trim().parse::<Rat>().map_err(|_| CliError::Usage(format!("invalid rational '{s}'")))
}

fn parse_ints(s: &str) -> Result<Vec<i64>, CliError> {
    s.split(',')
        .map(|p| p.trim().parse::<i64>().map_err(|_| CliError::Usage(format!("invalid integer '{p}'"))))
        .collect()
}

/// Reads `(l0, ...)(l1, ...)` or `{"lam0": [...], "lam1": [...]}`.
pub fn parse_weight(s: &str, cartan: &Arc<CartanData>) -> Result<Weight, CliError> {
    let s = s.trim();
    let (lam0, lam1): (Vec<i64>, Vec<Rat>) = if s.starts_with('{') {
        let v: Value = serde_json::from_str(s).map_err(|e| CliError::Usage(format!("invalid weight JSON: {e}")))?;
        let lam0 = v["lam0"]
            .as_array()
            .ok_or_else(|| CliError::Usage("weight JSON needs a lam0 array".into()))?
            .iter()
            .map(|x| x.as_i64().ok_or_else(|| CliError::Usage(format!("invalid lam0 entry {x}"))))
            .collect::<Result<_, _>>()?;
        let lam1 = v["lam1"]
            .as_array()
            .ok_or_else(|| CliError::Usage("weight JSON needs a lam1 array".into()))?
            .iter()
            .map(|x| match x {
                Value::Number(n) => parse_rat(&n.to_string()),
                Value::String(t) => parse_rat(t),
                _ => Err(CliError::Usage(format!("invalid lam1 entry {x}"))),
            })
            .collect::<Result<_, _>>()?;
        (lam0, lam1)
    } else {
        let bad = || CliError::Usage(format!("invalid weight '{s}', expected (lam0)(lam1)"));
        let inner = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let (a, b) = inner.split_once(')').ok_or_else(bad)?;
        let b = b.trim_start().strip_prefix(',').unwrap_or(b).trim_start().strip_prefix('(').ok_or_else(bad)?;
        let lam1 = b.split(',').map(parse_rat).collect::<Result<_, _>>()?;
        (parse_ints(a)?, lam1)
    };
    Weight::new(cartan, lam0, lam1).map_err(|e| CliError::Usage(e.to_string()))
}

fn weight_output(w: &Weight, pretty: bool) -> String {
    if pretty {
        render::weight_text(w)
    } else {
        to_json(&render::weight_json(w))
    }
}

fn weight(cmd: WeightCommand) -> Result<Outcome, CliError> {
    let runtime = |e: hyperzeta::weights::WeightError| CliError::Runtime(e.to_string());
    match cmd {
        WeightCommand::Add { x, y, opts } => {
            let c = parse_cartan(&opts.cartan, opts.ell)?;
            let w = parse_weight(&x, &c)?.add(&parse_weight(&y, &c)?).map_err(runtime)?;
            Ok(Outcome::ok(weight_output(&w, opts.pretty)))
        }
        WeightCommand::Sub { x, y, opts } => {
            let c = parse_cartan(&opts.cartan, opts.ell)?;
            let w = parse_weight(&x, &c)?.sub(&parse_weight(&y, &c)?).map_err(runtime)?;
            Ok(Outcome::ok(weight_output(&w, opts.pretty)))
        }
        WeightCommand::Neg { x, opts } => {
            let c = parse_cartan(&opts.cartan, opts.ell)?;
            Ok(Outcome::ok(weight_output(&parse_weight(&x, &c)?.neg(), opts.pretty)))
        }
        WeightCommand::Embed { m, opts } => {
            let c = parse_cartan(&opts.cartan, opts.ell)?;
            let w = Weight::embed(&parse_ints(&m)?, &c).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(Outcome::ok(weight_output(&w, opts.pretty)))
        }
        WeightCommand::Leq { x, y, opts } => {
            let c = parse_cartan(&opts.cartan, opts.ell)?;
            let leq = parse_weight(&x, &c)?.dominance_leq(&parse_weight(&y, &c)?).map_err(runtime)?;
            Ok(Outcome::ok(if opts.pretty { leq.to_string() } else { to_json(&json!({ "leq": leq })) }))
        }
    }
}

fn nf(a: &NfArgs) -> Result<Outcome, CliError> {
    let f = field(a.ell)?;
    let e = expr::parse(&a.expr).map_err(|e| CliError::Usage(e.to_string()))?;
    let x = expr::eval(&e, &f, a.max_terms).map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok(Outcome::ok(if a.pretty { render::pbw_text(&x) } else { to_json(&render::pbw_json(&x)) }))
}

fn module(a: &ModuleArgs) -> Result<Outcome, CliError> {
    field(a.ell)?;
    let (name, m): (String, WeightModule) = match (a.m0, a.m) {
        (Some(m0), _) => {
            if !(0..a.ell).contains(&m0) {
                return Err(CliError::Usage(format!("--m0 must lie in [0, {})", a.ell)));
            }
            (format!("L({m0})"), restricted_simple(m0, a.ell).map_err(|e| CliError::Runtime(e.to_string()))?)
        }
        (None, Some(m)) => {
            if m < 0 {
                return Err(CliError::Usage("--m must be non-negative".into()));
            }
            (format!("L({m})"), simple_module(m, a.ell).map_err(|e| CliError::Runtime(e.to_string()))?)
        }
        (None, None) => return Err(CliError::Usage("one of --m0, --m is required".into())),
    };
    let text = match a.action {
        ModuleAction::Weights => {
            if a.pretty {
                let ws: Vec<String> = m.labels().iter().map(render::weight_text).collect();
                format!("{name}, dim {}: [{}]", m.dim(), ws.join(", "))
            } else {
                let ws: Vec<Value> = m.labels().iter().map(render::weight_json).collect();
                to_json(&json!({ "module": name, "ell": a.ell, "dim": m.dim(), "weights": ws }))
            }
        }
        ModuleAction::Matrices => {
            let mats: serde_json::Map<String, Value> = [
                ("E", m.e()),
                ("F", m.f()),
                ("K", m.k()),
                ("E_ell", m.e_ell()),
                ("F_ell", m.f_ell()),
                ("B", m.b()),
            ]
            .into_iter()
            .map(|(k, v)| (k.to_string(), render::matrix_json(v)))
            .collect();
            let v = json!({ "module": name, "ell": a.ell, "dim": m.dim(), "matrices": mats });
            if a.pretty {
                serde_json::to_string_pretty(&v).expect("serializable")
            } else {
                to_json(&v)
            }
        }
        ModuleAction::Primitive => {
            let lines = primitive_vectors(&m);
            if a.pretty {
                lines
                    .iter()
                    .map(|(w, basis)| format!("weight {}: {} vector(s)", render::weight_text(w), basis.len()))
                    .collect::<Vec<_>>()
                    .join("\n")
            } else {
                let ls: Vec<Value> = lines
                    .iter()
                    .map(|(w, basis)| {
                        let vs: Vec<Value> = basis
                            .iter()
                            .map(|v| Value::Array(v.iter().map(|x| json!(render::coeff_strings(x))).collect()))
                            .collect();
                        json!({ "weight": render::weight_json(w), "text": render::weight_text(w), "basis": vs })
                    })
                    .collect();
                to_json(&json!({ "module": name, "ell": a.ell, "lines": ls }))
            }
        }
    };
    Ok(Outcome::ok(text))
}

pub fn suites_of(args: &[SuiteArg]) -> Vec<verify::Suite> {
    let mut out = Vec::new();
    for a in args {
        match a {
            SuiteArg::All => out.extend(verify::Suite::ALL),
            SuiteArg::Qcomb => out.push(verify::Suite::Qcomb),
            SuiteArg::Weights => out.push(verify::Suite::Weights),
            SuiteArg::Uzero => out.push(verify::Suite::Uzero),
            SuiteArg::Pbw => out.push(verify::Suite::Pbw),
            SuiteArg::Repn => out.push(verify::Suite::Repn),
        }
    }
    out
}

fn run_verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let mut ells = a.ell.clone();
    ells.sort_unstable();
    ells.dedup();
    for &ell in &ells {
        field(ell)?;
    }
    let report = verify::run(&suites_of(&a.suite), &ells, a.seed, a.timing);
    let text = if a.pretty {
        let mut lines = Vec::new();
        for s in &report.suites {
            for c in &s.checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                let time = c.elapsed_ms.map(|t| format!(" {t} ms")).unwrap_or_default();
                lines.push(format!("{status} {}::{} ({} cases){time}", s.suite, c.id, c.cases));
                for f in &c.failures {
                    lines.push(format!("    {f}"));
                }
            }
        }
        lines.push(format!(
            "{} cases, {} failed checks, seed {}",
            report.total_cases, report.failed_checks, report.seed
        ));
        lines.join("\n")
    } else {
        serde_json::to_string(&report).expect("serializable")
    };
    Ok(Outcome { text, ok: report.passed })
}

fn primitive(a: &PrimitiveArgs) -> Result<Outcome, CliError> {
    field(a.ell)?;
    let rt = |e: hyperzeta::uzero::UZeroError| CliError::Runtime(e.to_string());
    let coeffs = primitive_coefficients(a.ell).map_err(rt)?;
    let p = primitive_element(a.ell).map_err(rt)?;
    let residual = primitivity_residual(&p).map_err(rt)?;
    let residual_text = if residual.is_zero() { "0".to_string() } else { format!("{residual:?}") };
    let text = if a.pretty {
        let mut lines: Vec<String> = coeffs.iter().enumerate().map(|(i, c)| format!("a{i} = {c}")).collect();
        lines.push(format!("residual = {residual_text}"));
        lines.join("\n")
    } else {
        let cs: Vec<Value> = coeffs
            .iter()
            .map(|c| json!({ "text": c.to_string(), "coeffs": render::coeff_strings(c) }))
            .collect();
        to_json(&json!({ "ell": a.ell, "a": cs, "value_at_zero": p.eval(0).to_string(), "residual": residual_text }))
    };
    Ok(Outcome { text, ok: residual.is_zero() })
}
