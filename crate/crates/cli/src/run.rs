//! Command dispatch and report assembly.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ppst_core::tensor::vec::Vector;
use ppst_core::{
    apply_deformation, check_constant_curvature_theorem, classify, find_model, model_catalog, run_suite,
    verify_deformation_relations, DeformationParams, GeometryError, ParacontactStructure, TheoremOutcome,
};
use ppst_expr::RationalExpr;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::spec_file::{build, parse_rational, parse_spec, print_spec, to_spec, SpecFile};

pub const SCHEMA_VERSION: u64 = 1;
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Parser, Debug)]
#[command(name = "ppst", version, about = "Exact verification of almost paracontact metric structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the almost paracontact metric axioms.
    Check(Source),
    /// Classify the structure (normal, para-Sasakian, quasi-para-Sasakian, ...).
    Classify(Source),
    /// Levi-Civita connection, Riemann table, Ricci and star-Ricci data.
    Curvature(Source),
    /// Run the quasi-para-Sasakian identity suite.
    Identities(Source),
    /// Apply a D-homothetic deformation and write the deformed structure.
    Deform(DeformArgs),
    /// Check the constant-curvature theorem.
    Theorem(Source),
    /// List the built-in models.
    Models(Output),
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report (for `deform`: the deformed spec file) to FILE.
    #[arg(short = 'o', long = "output", value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Source {
    /// Structure spec file.
    #[arg(value_name = "SPEC", required_unless_present = "model", conflicts_with = "model")]
    input: Option<PathBuf>,
    /// Use a built-in model instead of a spec file.
    #[arg(long, value_name = "NAME")]
    model: Option<String>,
    /// Sample point for chart models, e.g. `x=1,y=2,z=3/2`.
    #[arg(long, value_name = "POINT")]
    point: Option<String>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct DeformArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
    #[arg(long, allow_hyphen_values = true)]
    beta: String,
}

/// Result of one invocation.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Input(String, String),
    Math(String),
}

fn input(kind: &str, message: impl ToString) -> Failure {
    Failure::Input(kind.into(), message.to_string())
}

/// Structural failures of the data are mathematical; everything else is
/// an input problem.
fn from_geometry(e: GeometryError) -> Failure {
    match e {
        GeometryError::AxiomFailure(_)
        | GeometryError::Hypothesis(_)
        | GeometryError::DegenerateMetric
        | GeometryError::AsymmetricMetric(..)
        | GeometryError::PhiBasis(_) => Failure::Math(e.to_string()),
        other => input("geometry", other),
    }
}

struct Loaded {
    source: String,
    digest: String,
    structure: ParacontactStructure,
}

fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

fn parse_point(text: &str) -> Result<BTreeMap<String, String>, Failure> {
    let mut out = BTreeMap::new();
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| input("point", format!("--point: `{part}` is not of the form name=value")))?;
        let v = v.trim();
        parse_rational(v).map_err(|e| input("point", format!("--point {}: {e}", k.trim())))?;
        out.insert(k.trim().to_string(), v.to_string());
    }
    Ok(out)
}

fn load(src: &Source) -> Result<Loaded, Failure> {
    let (source, bytes, mut spec): (String, Vec<u8>, SpecFile) = match (&src.input, &src.model) {
        (_, Some(name)) => {
            let entry = find_model(name).map_err(|e| input("model", e))?;
            let spec = to_spec(&entry.structure);
            (format!("model:{name}"), print_spec(&spec).into_bytes(), spec)
        }
        (Some(path), None) => {
            let bytes = std::fs::read(path).map_err(|e| input("io", format!("{}: {e}", path.display())))?;
            let text = String::from_utf8(bytes.clone())
                .map_err(|_| input("io", format!("{}: not UTF-8", path.display())))?;
            let spec = parse_spec(&text).map_err(|e| input("schema", format!("{}: {e}", path.display())))?;
            (path.display().to_string(), bytes, spec)
        }
        (None, None) => return Err(input("usage", "a spec file or --model is required")),
    };
    if let Some(p) = &src.point {
        spec.manifold.sample_point = Some(parse_point(p)?);
    }
    let structure = build(&spec).map_err(|e| input("schema", e))?;
    Ok(Loaded {
        source,
        digest: digest(&bytes),
        structure,
    })
}

/// `c1*e1 + c2*e2 ...` with non-constant coefficients parenthesized.
pub fn combination(v: &[RationalExpr], labels: &[String]) -> String {
    let mut out = String::new();
    for (c, l) in v.iter().zip(labels) {
        if c.is_zero() {
            continue;
        }
        let (neg, mag) = match c.constant_value() {
            Some(q) if q < num_zero() => (true, RationalExpr::from_rational(-q)),
            _ => (false, c.clone()),
        };
        let term = if mag.is_one() {
            l.clone()
        } else if mag.is_constant() {
            format!("{mag}*{l}")
        } else {
            format!("({mag})*{l}")
        };
        match (out.is_empty(), neg) {
            (true, false) => out.push_str(&term),
            (true, true) => out.push_str(&format!("-{term}")),
            (false, false) => out.push_str(&format!(" + {term}")),
            (false, true) => out.push_str(&format!(" - {term}")),
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn num_zero() -> ppst_expr::BigRational {
    ppst_expr::BigRational::from_integer(0.into())
}

struct Section {
    results: Value,
    text: Vec<String>,
    witnesses: Vec<String>,
    violation: bool,
}

fn opt(s: &Option<String>) -> Value {
    s.as_ref().map_or(Value::Null, |w| Value::String(w.clone()))
}

fn axioms(s: &ParacontactStructure) -> (Value, Vec<String>, Vec<String>) {
    let report = s.validate();
    let mut text = Vec::new();
    let mut witnesses = Vec::new();
    let list: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            let mut line = format!("  {:<20} {}", c.name, if c.passed { "pass" } else { "FAIL" });
            if let Some(w) = &c.witness {
                line.push_str(&format!("  {w}"));
                witnesses.push(format!("{}: {w}", c.name));
            }
            text.push(line);
            json!({"name": c.name, "passed": c.passed, "witness": opt(&c.witness)})
        })
        .collect();
    (Value::Array(list), text, witnesses)
}

fn check(s: &ParacontactStructure) -> Result<Section, Failure> {
    let (list, mut text, witnesses) = axioms(s);
    text.insert(0, "axioms:".into());
    if s.eta_derived() {
        text.push("  eta derived as g(., xi)".into());
    }
    Ok(Section {
        results: json!({"axioms": list, "eta_derived": s.eta_derived()}),
        text,
        violation: !witnesses.is_empty(),
        witnesses,
    })
}

fn classification_json(c: &ppst_core::Classification) -> (Value, Vec<String>) {
    let mut flags = Map::new();
    let mut text = Vec::new();
    for (f, v) in &c.flags {
        flags.insert(f.key().into(), Value::Bool(*v));
        text.push(format!("  {}: {}", f.display_name(), if *v { "yes" } else { "no" }));
        if let Some(w) = c.witness(*f).filter(|_| !v) {
            text.push(format!("    witness: {}", w.detail));
        }
    }
    let witnesses: Vec<Value> = c
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "flag": w.flag.key(),
                "pair": w.pair.as_ref().map_or(Value::Null, |(a, b)| json!([a, b])),
                "detail": w.detail,
            })
        })
        .collect();
    text.insert(0, format!("class: {}", c.summary()));
    (
        json!({"flags": flags, "summary": c.summary(), "witnesses": witnesses}),
        text,
    )
}

fn classify_cmd(s: &ParacontactStructure) -> Result<Section, Failure> {
    let (list, axiom_text, witnesses) = axioms(s);
    if !witnesses.is_empty() {
        let mut text = vec!["axioms:".to_string()];
        text.extend(axiom_text);
        return Ok(Section {
            results: json!({"axioms": list, "classification": null}),
            text,
            witnesses,
            violation: true,
        });
    }
    let c = classify(s).map_err(from_geometry)?;
    let (cj, text) = classification_json(&c);
    Ok(Section {
        results: json!({"axioms": list, "classification": cj}),
        text,
        witnesses: Vec::new(),
        violation: false,
    })
}

fn matrix_json(t: &ppst_core::Tensor) -> Value {
    let n = t.dim();
    (0..n)
        .map(|i| (0..n).map(|j| Value::String(t.get(&[i, j]).to_string())).collect::<Vec<_>>())
        .collect()
}

fn curvature_cmd(s: &ParacontactStructure) -> Result<Section, Failure> {
    let labels = s.model().basis_labels();
    let n = s.dim();
    let conn = s.connection().map_err(|e| from_geometry(e.clone()))?;
    let c = s.curvature().map_err(|e| from_geometry(e.clone()))?;
    let mut text = vec!["connection:".to_string()];
    let mut connection = Map::new();
    for i in 0..n {
        for j in 0..n {
            let key = format!("nabla_{} {}", labels[i], labels[j]);
            let v = combination(&conn.basis_derivative(i, j), &labels);
            text.push(format!("  {key} = {v}"));
            connection.insert(key, Value::String(v));
        }
    }
    text.push("riemann:".into());
    let mut riemann = Map::new();
    let basis = |k: usize| -> Vector { ppst_core::tensor::vec::basis(n, k) };
    for i in 0..n {
        for j in (i + 1)..n {
            for k in 0..n {
                let key = format!("R({},{}){}", labels[i], labels[j], labels[k]);
                let v = combination(&c.apply(&basis(i), &basis(j), &basis(k)), &labels);
                text.push(format!("  {key} = {v}"));
                riemann.insert(key, Value::String(v));
            }
        }
    }
    let row = |t: &ppst_core::Tensor, i: usize| -> String {
        (0..n).map(|j| t.get(&[i, j]).to_string()).collect::<Vec<_>>().join(", ")
    };
    text.push("ricci:".into());
    for i in 0..n {
        text.push(format!("  [{}]", row(&c.ricci, i)));
    }
    text.push(format!("scalar curvature r = {}", c.scalar));
    if let Some(sr) = &c.star_ricci {
        text.push("star ricci:".into());
        for i in 0..n {
            text.push(format!("  [{}]", row(sr, i)));
        }
    }
    if let Some(r) = &c.star_scalar {
        text.push(format!("star scalar curvature r* = {r}"));
    }
    Ok(Section {
        results: json!({
            "basis": labels,
            "connection": connection,
            "riemann": riemann,
            "ricci": matrix_json(&c.ricci),
            "scalar": c.scalar.to_string(),
            "star_ricci": c.star_ricci.as_ref().map_or(Value::Null, matrix_json),
            "star_scalar": c.star_scalar.as_ref().map_or(Value::Null, |r| Value::String(r.to_string())),
        }),
        text,
        witnesses: Vec::new(),
        violation: false,
    })
}

fn refused(e: GeometryError) -> Result<Section, Failure> {
    match from_geometry(e) {
        Failure::Math(why) => Ok(Section {
            results: json!({"refused": why}),
            text: vec![format!("refused: {why}")],
            witnesses: vec![why],
            violation: true,
        }),
        other => Err(other),
    }
}

fn identities_cmd(s: &ParacontactStructure) -> Result<Section, Failure> {
    let report = match run_suite(s) {
        Ok(r) => r,
        Err(e) => return refused(e),
    };
    let mut text = vec![format!("identities ({}):", report.mode)];
    let mut witnesses = Vec::new();
    let list: Vec<Value> = report
        .entries
        .iter()
        .map(|e| {
            let mut line = format!("  {:<6} {}", e.key, if e.passed { "pass" } else { "FAIL" });
            if let Some((l, r)) = &e.sides {
                line.push_str(&format!("  lhs = {l}, rhs = {r}"));
            }
            if let Some(w) = &e.witness {
                line.push_str(&format!("  witness {w}"));
                witnesses.push(format!("{}: {w}", e.key));
            }
            text.push(line);
            json!({
                "key": e.key,
                "passed": e.passed,
                "witness": opt(&e.witness),
                "lhs": e.sides.as_ref().map_or(Value::Null, |(l, _)| Value::String(l.to_string())),
                "rhs": e.sides.as_ref().map_or(Value::Null, |(_, r)| Value::String(r.to_string())),
                "residual_zero": e.residual.is_zero(),
            })
        })
        .collect();
    Ok(Section {
        results: json!({"mode": report.mode, "basis": report.basis_labels, "identities": list}),
        text,
        violation: !witnesses.is_empty(),
        witnesses,
    })
}

fn deform_cmd(s: &ParacontactStructure, args: &DeformArgs) -> Result<Section, Failure> {
    let alpha = parse_rational(&args.alpha).map_err(|e| input("params", format!("--alpha {e}")))?;
    let beta = parse_rational(&args.beta).map_err(|e| input("params", format!("--beta {e}")))?;
    let p = DeformationParams::new(alpha, beta).map_err(|e| input("params", e))?;
    let d = match apply_deformation(s, &p) {
        Ok(d) => d,
        Err(e) => return refused(e),
    };
    let spec_text = print_spec(&to_spec(&d));
    let output = &args.source.out.output;
    if let Some(path) = output {
        std::fs::write(path, &spec_text).map_err(|e| input("io", format!("{}: {e}", path.display())))?;
    }
    let mut text = vec![format!("deformation {p}{}", if p.is_homothetic() { ", homothetic" } else { "" })];
    let mut witnesses = Vec::new();
    let (relations, skipped) = match verify_deformation_relations(s, &p) {
        Ok(rep) => {
            let list: Vec<Value> = rep
                .checks
                .iter()
                .map(|c| {
                    let mut line = format!("  {:<5} {}", c.key, if c.passed { "pass" } else { "FAIL" });
                    if let Some(w) = &c.witness {
                        line.push_str(&format!("  {w}"));
                        witnesses.push(format!("{}: {w}", c.key));
                    }
                    text.push(line);
                    json!({"key": c.key, "passed": c.passed, "witness": opt(&c.witness)})
                })
                .collect();
            (Value::Array(list), Value::Null)
        }
        Err(GeometryError::Hypothesis(why)) => {
            text.push(format!("  relations skipped: {why}"));
            (Value::Null, Value::String(why))
        }
        Err(e) => return Err(from_geometry(e)),
    };
    let c = classify(&d).map_err(from_geometry)?;
    let (cj, ctext) = classification_json(&c);
    text.push(format!("deformed {}", ctext[0]));
    match output {
        Some(path) => text.push(format!("wrote {}", path.display())),
        None => {
            text.push("deformed spec:".into());
            text.extend(spec_text.lines().map(|l| format!("  {l}")));
        }
    }
    Ok(Section {
        results: json!({
            "params": {
                "alpha": p.alpha().to_string(),
                "beta": p.beta().to_string(),
                "homothetic": p.is_homothetic(),
            },
            "output": output.as_ref().map_or(Value::Null, |p| Value::String(p.display().to_string())),
            "spec": if output.is_some() { Value::Null } else { Value::String(spec_text) },
            "relations": relations,
            "relations_skipped": skipped,
            "classification": cj,
        }),
        text,
        violation: !witnesses.is_empty(),
        witnesses,
    })
}

fn theorem_cmd(s: &ParacontactStructure) -> Result<Section, Failure> {
    let report = check_constant_curvature_theorem(s).map_err(from_geometry)?;
    let text: Vec<String> = report.to_string().lines().map(String::from).collect();
    let mut witnesses = Vec::new();
    let assertions: Vec<Value> = report
        .assertions
        .iter()
        .map(|a| {
            if let Some(w) = a.witness.as_ref().filter(|_| !a.passed) {
                witnesses.push(format!("{}: {w}", a.name));
            }
            json!({"name": a.name, "passed": a.passed, "witness": opt(&a.witness)})
        })
        .collect();
    let (outcome, detail) = match &report.outcome {
        TheoremOutcome::HypothesesNotMet(w) => ("hypotheses-not-met", Value::String(w.clone())),
        TheoremOutcome::Verified => ("verified", Value::Null),
        TheoremOutcome::Violation(w) => ("violation", Value::String(w.clone())),
    };
    let violation = matches!(report.outcome, TheoremOutcome::Violation(_));
    if !violation {
        witnesses.clear();
    }
    Ok(Section {
        results: json!({
            "curvature": report.curvature.as_ref().map_or(Value::Null, |k| Value::String(k.to_string())),
            "lambda": report.lambda.as_ref().map_or(Value::Null, |l| Value::String(l.to_string())),
            "assertions": assertions,
            "outcome": outcome,
            "detail": detail,
        }),
        text,
        witnesses,
        violation,
    })
}

fn models_cmd() -> Section {
    let mut text = Vec::new();
    let list: Vec<Value> = model_catalog()
        .iter()
        .map(|e| {
            let tags = if e.tags.is_empty() {
                String::new()
            } else {
                format!(" [{}]", e.tags.join(", "))
            };
            text.push(format!("{}{tags}", e.name));
            text.push(format!("  {}", e.description));
            let provenance: Map<String, Value> = e
                .provenance
                .iter()
                .map(|(k, v)| (k.to_string(), Value::String(v.to_string())))
                .collect();
            json!({
                "name": e.name,
                "description": e.description,
                "tags": e.tags,
                "provenance": provenance,
                "dim": e.structure.dim(),
                "mode": if e.structure.model().is_chart() { "chart" } else { "frame" },
            })
        })
        .collect();
    Section {
        results: json!({"models": list}),
        text,
        witnesses: Vec::new(),
        violation: false,
    }
}

struct Context<'a> {
    command: &'static str,
    out: &'a Output,
    write_report: bool,
}

fn finish(ctx: &Context, loaded: Option<&Loaded>, section: Result<Section, Failure>) -> Outcome {
    let (status, code, results, witnesses, text, error) = match section {
        Ok(s) if s.violation => ("violation", 1, s.results, s.witnesses, s.text, None),
        Ok(s) => ("pass", 0, s.results, s.witnesses, s.text, None),
        Err(Failure::Math(why)) => ("violation", 1, Value::Null, vec![why.clone()], vec![format!("violation: {why}")], None),
        Err(Failure::Input(kind, message)) => ("error", 2, Value::Null, Vec::new(), Vec::new(), Some((kind, message))),
    };
    let report = json!({
        "tool": "ppst",
        "version": env!("CARGO_PKG_VERSION"),
        "schema_version": SCHEMA_VERSION,
        "command": ctx.command,
        "input": loaded.map_or(Value::Null, |l| json!({"source": l.source, "digest": l.digest})),
        "status": status,
        "exit_code": code,
        "results": results,
        "witnesses": witnesses,
        "error": error.as_ref().map_or(Value::Null, |(k, m)| json!({"kind": k, "message": m})),
    });
    let body = match ctx.out.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        Format::Text => {
            let mut lines = vec![format!("ppst {} {}", env!("CARGO_PKG_VERSION"), ctx.command)];
            if let Some(l) = loaded {
                lines.push(format!("source: {}", l.source));
                lines.push(format!("digest: {}", l.digest));
            }
            lines.extend(text);
            if let Some((_, m)) = &error {
                lines.push(format!("error: {m}"));
            }
            lines.push(format!("status: {status}"));
            lines.join("\n") + "\n"
        }
    };
    let stderr = match &error {
        Some((_, m)) => format!("error: {m}\n"),
        None => String::new(),
    };
    match (&ctx.out.output, ctx.write_report) {
        (Some(path), true) => match std::fs::write(path, &body) {
            Ok(()) => Outcome { code, stdout: String::new(), stderr },
            Err(e) => Outcome {
                code: 2,
                stdout: String::new(),
                stderr: format!("error: {}: {e}\n", path.display()),
            },
        },
        _ => Outcome { code, stdout: body, stderr },
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let (name, src, deform): (&'static str, Option<&Source>, Option<&DeformArgs>) = match &cli.command {
        Command::Check(s) => ("check", Some(s), None),
        Command::Classify(s) => ("classify", Some(s), None),
        Command::Curvature(s) => ("curvature", Some(s), None),
        Command::Identities(s) => ("identities", Some(s), None),
        Command::Deform(d) => ("deform", Some(&d.source), Some(d)),
        Command::Theorem(s) => ("theorem", Some(s), None),
        Command::Models(out) => {
            let ctx = Context {
                command: "models",
                out,
                write_report: true,
            };
            return finish(&ctx, None, Ok(models_cmd()));
        }
    };
    let src = src.expect("every other command reads a structure");
    let ctx = Context {
        command: name,
        out: &src.out,
        write_report: deform.is_none(),
    };
    let loaded = match load(src) {
        Ok(l) => l,
        Err(f) => return finish(&ctx, None, Err(f)),
    };
    let s = &loaded.structure;
    let section = match &cli.command {
        Command::Check(_) => check(s),
        Command::Classify(_) => classify_cmd(s),
        Command::Curvature(_) => curvature_cmd(s),
        Command::Identities(_) => identities_cmd(s),
        Command::Deform(d) => deform_cmd(s, d),
        Command::Theorem(_) => theorem_cmd(s),
        Command::Models(_) => unreachable!(),
    };
    finish(&ctx, Some(&loaded), section)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels() -> Vec<String> {
        vec!["e1".into(), "e2".into(), "xi".into()]
    }

    #[test]
    fn combinations_print_signs_and_parentheses() {
        let r = RationalExpr::from_int;
        assert_eq!(combination(&[r(0), r(0), r(0)], &labels()), "0");
        assert_eq!(combination(&[r(-12), r(0), r(1)], &labels()), "-12*e1 + xi");
        assert_eq!(combination(&[r(0), r(-1), r(2)], &labels()), "-e2 + 2*xi");
        let y = RationalExpr::var("y");
        assert_eq!(combination(&[y, r(0), r(0)], &labels()), "(y)*e1");
    }

    #[test]
    fn points_parse() {
        let p = match parse_point("x=1, y=-2/3,z=0.5") {
            Ok(p) => p,
            Err(_) => panic!("point should parse"),
        };
        assert_eq!(p.get("y").map(String::as_str), Some("-2/3"));
        assert!(parse_point("x").is_err());
        assert!(parse_point("x=a").is_err());
    }
}
