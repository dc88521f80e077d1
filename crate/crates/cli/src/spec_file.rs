//! Structure-spec files: TOML with expression strings.
//!
//! ```toml
//! format = "ppst-structure/1"
//!
//! [manifold]
//! dim = 3
//! mode = "frame"                 # "chart" | "frame" | "realized-frame"
//! labels = ["e1", "e2", "xi"]    # frame modes
//! coordinates = ["x", "y", "z"]  # chart modes
//! constraints = ["z != 0"]
//! signature = [2, 1]
//! sample_point = { x = "1", y = "2", z = "3" }
//! frame_vectors = [["4*y", "0", "z"], ...]   # realized-frame only
//!
//! [[brackets]]                   # frame mode
//! pair = ["e1", "e2"]
//! value = ["0", "0", "4"]
//!
//! [tensors]
//! g = [["1", "0", "0"], ...]
//! phi = [["0", "1", "0"], ...]   # phi[i][j]: component i of phi(E_j)
//! xi = ["0", "0", "1"]
//! eta = "derived"                # or a component list
//!
//! [reference_frame]
//! labels = ["e1", "e2", "xi"]
//! vectors = [["4*y", "0", "z"], ...]
//! signature = [1, -1, 1]
//! ```

use std::collections::{BTreeMap, HashMap};

use ppst_core::tensor::vec::Vector;
use ppst_core::{GeometryError, ManifoldModel, ModelKind, ParacontactStructure, ReferenceFrame, Tensor};
use ppst_expr::{parse_expr, BigRational, DomainConstraint, RationalExpr};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT: &str = "ppst-structure/1";

#[derive(Debug, Error, PartialEq)]
pub enum SpecError {
    #[error("{0}")]
    Syntax(String),
    #[error("{path}: {message}")]
    Field { path: String, message: String },
}

fn field(path: impl Into<String>, message: impl ToString) -> SpecError {
    SpecError::Field {
        path: path.into(),
        message: message.to_string(),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub format: String,
    pub manifold: ManifoldBlock,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub brackets: Vec<BracketEntry>,
    pub tensors: TensorsBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_frame: Option<FrameBlock>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Chart,
    Frame,
    RealizedFrame,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ManifoldBlock {
    pub dim: usize,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinates: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constraints: Vec<String>,
    /// `[plus, minus]` counts of the metric signature.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_point: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame_vectors: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub pair: [String; 2],
    pub value: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum EtaField {
    Marker(String),
    Components(Vec<String>),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TensorsBlock {
    pub g: Vec<Vec<String>>,
    pub phi: Vec<Vec<String>>,
    pub xi: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<EtaField>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FrameBlock {
    pub labels: Vec<String>,
    pub vectors: Vec<Vec<String>>,
    pub signature: Vec<i8>,
}

pub fn parse_spec(text: &str) -> Result<SpecFile, SpecError> {
    toml::from_str(text).map_err(|e| SpecError::Syntax(e.to_string()))
}

pub fn print_spec(spec: &SpecFile) -> String {
    toml::to_string(spec).expect("spec files always serialize")
}

/// Reads a spec file into a structure.
pub fn import_spec(text: &str) -> Result<ParacontactStructure, SpecError> {
    build(&parse_spec(text)?)
}

pub fn export_spec(s: &ParacontactStructure) -> String {
    print_spec(&to_spec(s))
}

fn strings(v: &[RationalExpr]) -> Vec<String> {
    v.iter().map(|e| e.to_string()).collect()
}

fn matrix(t: &Tensor) -> Vec<Vec<String>> {
    let n = t.dim();
    (0..n)
        .map(|i| (0..n).map(|j| t.get(&[i, j]).to_string()).collect())
        .collect()
}

pub fn to_spec(s: &ParacontactStructure) -> SpecFile {
    let model = s.model();
    let n = model.dim();
    let mut manifold = ManifoldBlock {
        dim: n,
        mode: Mode::Chart,
        coordinates: None,
        labels: None,
        constraints: Vec::new(),
        signature: Some([model.half_dim() + 1, model.half_dim()]),
        sample_point: model.user_sample_point().map(|p| {
            p.iter().map(|(k, v)| (k.clone(), v.to_string())).collect()
        }),
        frame_vectors: None,
    };
    let mut brackets = Vec::new();
    match model.kind() {
        ModelKind::Chart {
            coordinates,
            constraints,
        } => {
            manifold.coordinates = Some(coordinates.clone());
            manifold.constraints = constraints.iter().map(|c| c.to_string()).collect();
        }
        ModelKind::Frame {
            labels,
            brackets: table,
            realization,
        } => {
            manifold.labels = Some(labels.clone());
            match realization {
                Some(r) => {
                    manifold.mode = Mode::RealizedFrame;
                    manifold.coordinates = Some(r.coordinates.clone());
                    manifold.constraints = r.constraints.iter().map(|c| c.to_string()).collect();
                    manifold.frame_vectors = Some(r.vectors.iter().map(|v| strings(v)).collect());
                }
                None => {
                    manifold.mode = Mode::Frame;
                    for a in 0..n {
                        for b in (a + 1)..n {
                            if table[a][b].iter().any(|c| !c.is_zero()) {
                                brackets.push(BracketEntry {
                                    pair: [labels[a].clone(), labels[b].clone()],
                                    value: strings(&table[a][b]),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    let eta = if s.eta_derived() {
        EtaField::Marker("derived".into())
    } else {
        EtaField::Components(strings(&s.eta().to_vec()))
    };
    SpecFile {
        format: FORMAT.into(),
        manifold,
        brackets,
        tensors: TensorsBlock {
            g: matrix(s.metric()),
            phi: matrix(s.phi()),
            xi: strings(s.xi()),
            eta: Some(eta),
        },
        reference_frame: s.reference_frame().map(|f| FrameBlock {
            labels: f.labels.clone(),
            vectors: f.vectors.iter().map(|v| strings(v)).collect(),
            signature: f.signature.clone(),
        }),
    }
}

struct Ctx {
    vars: Vec<String>,
}

impl Ctx {
    fn expr(&self, path: &str, text: &str) -> Result<RationalExpr, SpecError> {
        parse_expr(text, &self.vars).map_err(|e| field(path, format!("`{text}`: {e}")))
    }

    fn vector(&self, path: &str, v: &[String], n: usize, what: &str) -> Result<Vector, SpecError> {
        if v.len() != n {
            return Err(field(path, format!("{what} shape mismatch: expected {n} components, found {}", v.len())));
        }
        v.iter()
            .enumerate()
            .map(|(i, t)| self.expr(&format!("{path}[{i}]"), t))
            .collect()
    }

    fn matrix(&self, path: &str, m: &[Vec<String>], n: usize, what: &str) -> Result<Vec<Vector>, SpecError> {
        if m.len() != n || m.iter().any(|row| row.len() != n) {
            let cols = m.first().map_or(0, |r| r.len());
            return Err(field(
                path,
                format!("{what} shape mismatch: expected {n}x{n}, found {}x{cols}", m.len()),
            ));
        }
        m.iter()
            .enumerate()
            .map(|(i, row)| self.vector(&format!("{path}[{i}]"), row, n, what))
            .collect()
    }
}

fn constraint(ctx: &Ctx, path: &str, text: &str) -> Result<DomainConstraint, SpecError> {
    let lhs = text
        .trim()
        .strip_suffix("0")
        .and_then(|t| t.trim_end().strip_suffix("!="))
        .ok_or_else(|| field(path, format!("`{text}`: constraints have the form `expr != 0`")))?;
    Ok(DomainConstraint::nonzero(ctx.expr(path, lhs.trim())?))
}

fn geometry(path: &str) -> impl Fn(GeometryError) -> SpecError + '_ {
    move |e| field(path, e)
}

/// Builds the structure, reporting schema violations with their field path.
pub fn build(spec: &SpecFile) -> Result<ParacontactStructure, SpecError> {
    if spec.format != FORMAT {
        return Err(field("format", format!("expected \"{FORMAT}\", found \"{}\"", spec.format)));
    }
    let m = &spec.manifold;
    let n = m.dim;
    if n % 2 == 0 {
        return Err(field("manifold.dim", GeometryError::EvenDimension(n)));
    }
    if let Some([plus, minus]) = m.signature {
        if plus + minus != n || plus != minus + 1 {
            return Err(field(
                "manifold.signature",
                format!("expected [{}, {}] for dimension {n}, found [{plus}, {minus}]", n / 2 + 1, n / 2),
            ));
        }
    }
    let require = |name: &str, v: &Option<Vec<String>>| -> Result<Vec<String>, SpecError> {
        let v = v
            .clone()
            .ok_or_else(|| field(format!("manifold.{name}"), "required for this mode"))?;
        if v.len() != n {
            return Err(field(
                format!("manifold.{name}"),
                format!("expected {n} entries, found {}", v.len()),
            ));
        }
        Ok(v)
    };
    let forbid = |name: &str, present: bool| {
        if present {
            Err(field(format!("manifold.{name}"), "not allowed in this mode"))
        } else {
            Ok(())
        }
    };

    let chart_from = |coords: Vec<String>| -> Result<ManifoldModel, SpecError> {
        let ctx = Ctx { vars: coords.clone() };
        let constraints = m
            .constraints
            .iter()
            .enumerate()
            .map(|(i, c)| constraint(&ctx, &format!("manifold.constraints[{i}]"), c))
            .collect::<Result<Vec<_>, _>>()?;
        ManifoldModel::chart(coords, constraints).map_err(geometry("manifold.coordinates"))
    };

    let mut model = match m.mode {
        Mode::Chart => {
            forbid("labels", m.labels.is_some())?;
            forbid("frame_vectors", m.frame_vectors.is_some())?;
            if !spec.brackets.is_empty() {
                return Err(field("brackets", "only frame mode takes a bracket table"));
            }
            chart_from(require("coordinates", &m.coordinates)?)?
        }
        Mode::Frame => {
            forbid("coordinates", m.coordinates.is_some())?;
            forbid("frame_vectors", m.frame_vectors.is_some())?;
            forbid("constraints", !m.constraints.is_empty())?;
            let labels = require("labels", &m.labels)?;
            let ctx = Ctx { vars: Vec::new() };
            let mut table = Vec::new();
            for (k, b) in spec.brackets.iter().enumerate() {
                let path = format!("brackets[{k}]");
                let index = |l: &String| {
                    labels
                        .iter()
                        .position(|x| x == l)
                        .ok_or_else(|| field(format!("{path}.pair"), format!("unknown label `{l}`")))
                };
                let (a, b_ix) = (index(&b.pair[0])?, index(&b.pair[1])?);
                let value = ctx.vector(&format!("{path}.value"), &b.value, n, "bracket")?;
                table.push(((a, b_ix), value));
            }
            ManifoldModel::frame(labels, &table).map_err(geometry("brackets"))?
        }
        Mode::RealizedFrame => {
            if !spec.brackets.is_empty() {
                return Err(field("brackets", "a realized frame computes its brackets"));
            }
            let labels = require("labels", &m.labels)?;
            let chart = chart_from(require("coordinates", &m.coordinates)?)?;
            let ctx = Ctx { vars: chart.variables() };
            let fv = m
                .frame_vectors
                .as_ref()
                .ok_or_else(|| field("manifold.frame_vectors", "required for this mode"))?;
            let vectors = ctx.matrix("manifold.frame_vectors", fv, n, "frame_vectors")?;
            ManifoldModel::realized_frame(&chart, labels, vectors).map_err(geometry("manifold.frame_vectors"))?
        }
    };

    if let Some(p) = &m.sample_point {
        let ctx = Ctx { vars: Vec::new() };
        let mut point = HashMap::new();
        for (k, v) in p {
            let path = format!("manifold.sample_point.{k}");
            let value = ctx
                .expr(&path, v)?
                .constant_value()
                .ok_or_else(|| field(&path, "not a rational number"))?;
            point.insert(k.clone(), value);
        }
        model = model.with_sample_point(point).map_err(geometry("manifold.sample_point"))?;
    }

    let ctx = Ctx { vars: model.variables() };
    let t = &spec.tensors;
    let g = Tensor::bilinear(&ctx.matrix("tensors.g", &t.g, n, "g")?);
    let phi = Tensor::endomorphism(&ctx.matrix("tensors.phi", &t.phi, n, "phi")?);
    let xi = ctx.vector("tensors.xi", &t.xi, n, "xi")?;
    let eta = match &t.eta {
        None => None,
        Some(EtaField::Marker(m)) if m == "derived" => None,
        Some(EtaField::Marker(m)) => {
            return Err(field("tensors.eta", format!("expected \"derived\" or a component list, found \"{m}\"")))
        }
        Some(EtaField::Components(c)) => Some(Tensor::covector(ctx.vector("tensors.eta", c, n, "eta")?)),
    };
    let mut s = ParacontactStructure::new(model, phi, xi, eta, g).map_err(geometry("tensors"))?;

    if let Some(f) = &spec.reference_frame {
        let vectors = ctx.matrix("reference_frame.vectors", &f.vectors, n, "reference frame")?;
        if f.labels.len() != n || f.signature.len() != n {
            return Err(field("reference_frame", "reference frame shape mismatch"));
        }
        if let Some(bad) = f.signature.iter().find(|s| !matches!(s, 1 | -1)) {
            return Err(field("reference_frame.signature", format!("entries must be 1 or -1, found {bad}")));
        }
        s = s
            .with_reference_frame(ReferenceFrame {
                labels: f.labels.clone(),
                vectors,
                signature: f.signature.clone(),
            })
            .map_err(geometry("reference_frame"))?;
    }
    Ok(s)
}

/// Parses a rational literal such as `-3/2` or `0.25`.
pub fn parse_rational(text: &str) -> Result<BigRational, String> {
    parse_expr::<&str>(text, &[])
        .map_err(|e| format!("`{text}`: {e}"))?
        .constant_value()
        .ok_or_else(|| format!("`{text}` is not a rational number"))
}
