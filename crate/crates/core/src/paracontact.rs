//! Almost paracontact metric structures, their axioms, derived tensors and
//! classification.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use ppst_expr::{BigRational, RationalExpr};

use crate::calculus::{exterior_derivative, lie_bracket, lie_derivative};
use crate::connection::{covariant_derivative, levi_civita, ConnectionData};
use crate::curvature::{curvature, CurvatureData};
use crate::error::GeometryError;
use crate::linalg;
use crate::model::ManifoldModel;
use crate::tensor::vec::{self, Vector};
use crate::tensor::Tensor;

/// A frame declared alongside chart data, expected to be orthonormal with
/// the given signs. Used to check published frame/metric pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceFrame {
    pub labels: Vec<String>,
    pub vectors: Vec<Vector>,
    pub signature: Vec<i8>,
}

#[derive(Debug, Default)]
struct Caches {
    connection: OnceLock<Result<ConnectionData, GeometryError>>,
    curvature: OnceLock<Result<CurvatureData, GeometryError>>,
    fundamental: OnceLock<Tensor>,
    nijenhuis: OnceLock<Result<Tensor, GeometryError>>,
    tensor_a: OnceLock<Result<Tensor, GeometryError>>,
    tensor_h: OnceLock<Result<Tensor, GeometryError>>,
}

impl Clone for Caches {
    fn clone(&self) -> Self {
        Caches::default()
    }
}

/// The quadruple `(phi, xi, eta, g)` on a model, with lazily computed
/// connection, curvature and structure tensors.
#[derive(Clone, Debug)]
pub struct ParacontactStructure {
    model: ManifoldModel,
    phi: Tensor,
    xi: Vector,
    eta: Tensor,
    g: Tensor,
    eta_derived: bool,
    reference_frame: Option<ReferenceFrame>,
    caches: Caches,
}

impl PartialEq for ParacontactStructure {
    fn eq(&self, other: &Self) -> bool {
        self.model == other.model
            && self.phi == other.phi
            && self.xi == other.xi
            && self.eta == other.eta
            && self.g == other.g
            && self.eta_derived == other.eta_derived
            && self.reference_frame == other.reference_frame
    }
}

impl ParacontactStructure {
    /// Builds a structure; `eta = None` defaults it to `g(., xi)` and marks
    /// it as derived. Only shapes and variables are checked here.
    pub fn new(
        model: ManifoldModel,
        phi: Tensor,
        xi: Vector,
        eta: Option<Tensor>,
        g: Tensor,
    ) -> Result<Self, GeometryError> {
        let n = model.dim();
        let shape = |what: &str, ok: bool| {
            if ok {
                Ok(())
            } else {
                Err(GeometryError::Shape(format!("{what} shape mismatch")))
            }
        };
        shape("g", g.valence() == (0, 2) && g.dim() == n)?;
        shape("phi", phi.valence() == (1, 1) && phi.dim() == n)?;
        shape("xi", xi.len() == n)?;
        if let Some(e) = &eta {
            shape("eta", e.valence() == (0, 1) && e.dim() == n)?;
        }
        for c in g
            .components()
            .iter()
            .chain(phi.components())
            .chain(&xi)
            .chain(eta.iter().flat_map(|e| e.components()))
        {
            model.admits(c)?;
        }
        let (eta, eta_derived) = match eta {
            Some(e) => (e, false),
            None => (Tensor::covector(vec::lower(&g, &xi)), true),
        };
        Ok(ParacontactStructure {
            model,
            phi,
            xi,
            eta,
            g,
            eta_derived,
            reference_frame: None,
            caches: Caches::default(),
        })
    }

    pub fn with_reference_frame(mut self, frame: ReferenceFrame) -> Result<Self, GeometryError> {
        let n = self.model.dim();
        if frame.labels.len() != n
            || frame.vectors.len() != n
            || frame.signature.len() != n
            || frame.vectors.iter().any(|v| v.len() != n)
        {
            return Err(GeometryError::Shape("reference frame shape mismatch".into()));
        }
        self.reference_frame = Some(frame);
        Ok(self)
    }

    pub fn model(&self) -> &ManifoldModel {
        &self.model
    }
    pub fn phi(&self) -> &Tensor {
        &self.phi
    }
    pub fn xi(&self) -> &Vector {
        &self.xi
    }
    pub fn eta(&self) -> &Tensor {
        &self.eta
    }
    pub fn metric(&self) -> &Tensor {
        &self.g
    }
    pub fn eta_derived(&self) -> bool {
        self.eta_derived
    }
    pub fn reference_frame(&self) -> Option<&ReferenceFrame> {
        self.reference_frame.as_ref()
    }
    pub fn dim(&self) -> usize {
        self.model.dim()
    }
    pub fn half_dim(&self) -> usize {
        self.model.half_dim()
    }

    pub fn g(&self, u: &[RationalExpr], v: &[RationalExpr]) -> RationalExpr {
        vec::bilinear(&self.g, u, v)
    }
    pub fn phi_of(&self, v: &[RationalExpr]) -> Vector {
        vec::apply(&self.phi, v)
    }
    pub fn eta_of(&self, v: &[RationalExpr]) -> RationalExpr {
        vec::pair(&self.eta, v)
    }

    pub fn connection(&self) -> Result<&ConnectionData, GeometryError> {
        self.caches
            .connection
            .get_or_init(|| levi_civita(&self.model, &self.g))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn curvature(&self) -> Result<&CurvatureData, GeometryError> {
        self.caches
            .curvature
            .get_or_init(|| {
                let conn = self.connection()?;
                curvature(&self.model, conn, &self.g, Some(&self.phi))
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// `nabla_X Y`.
    pub fn nabla(&self, x: &[RationalExpr], y: &[RationalExpr]) -> Result<Vector, GeometryError> {
        Ok(self.connection()?.nabla(&self.model, x, y))
    }

    /// `Phi(X,Y) = g(X, phi Y)`.
    pub fn fundamental_form(&self) -> &Tensor {
        self.caches.fundamental.get_or_init(|| {
            let n = self.dim();
            Tensor::from_fn(n, 0, 2, |ix| {
                (0..n)
                    .map(|c| self.g.get(&[ix[0], c]) * self.phi.get(&[c, ix[1]]))
                    .sum()
            })
        })
    }

    pub fn d_eta(&self) -> Result<Tensor, GeometryError> {
        exterior_derivative(&self.model, &self.eta)
    }

    pub fn d_fundamental(&self) -> Result<Tensor, GeometryError> {
        exterior_derivative(&self.model, self.fundamental_form())
    }

    /// `N1(X,Y) = [phi,phi](X,Y) - 2 d eta(X,Y) xi` as a (1,2) tensor `[k, a, b]`.
    pub fn nijenhuis_n1(&self) -> Result<&Tensor, GeometryError> {
        self.caches
            .nijenhuis
            .get_or_init(|| {
                let n = self.dim();
                let m = &self.model;
                let d_eta = self.d_eta()?;
                let two = RationalExpr::from_int(2);
                let mut out = Tensor::zeros(n, 1, 2);
                for a in 0..n {
                    for b in (a + 1)..n {
                        let (x, y) = (vec::basis(n, a), vec::basis(n, b));
                        let (px, py) = (self.phi_of(&x), self.phi_of(&y));
                        let pp = self.phi_of(&self.phi_of(&lie_bracket(m, &x, &y)?));
                        let mut v = vec::add(&pp, &lie_bracket(m, &px, &py)?);
                        v = vec::sub(&v, &self.phi_of(&lie_bracket(m, &px, &y)?));
                        v = vec::sub(&v, &self.phi_of(&lie_bracket(m, &x, &py)?));
                        let coeff = &two * d_eta.get(&[a, b]);
                        v = vec::sub(&v, &vec::scale(&coeff, &self.xi));
                        for (k, c) in v.into_iter().enumerate() {
                            out.set(&[k, b, a], -&c);
                            out.set(&[k, a, b], c);
                        }
                    }
                }
                Ok(out)
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// `A X = nabla_X xi` as a (1,1) tensor.
    pub fn tensor_a(&self) -> Result<&Tensor, GeometryError> {
        self.caches
            .tensor_a
            .get_or_init(|| {
                let conn = self.connection()?;
                Ok(covariant_derivative(&self.model, conn, &Tensor::vector(self.xi.clone())))
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// The bilinear form `g(A X, Y)`.
    pub fn tensor_a_form(&self) -> Result<Tensor, GeometryError> {
        let a = self.tensor_a()?;
        let n = self.dim();
        Ok(Tensor::from_fn(n, 0, 2, |ix| {
            (0..n).map(|k| a.get(&[k, ix[0]]) * self.g.get(&[k, ix[1]])).sum()
        }))
    }

    /// `h = 1/2 L_xi phi`.
    pub fn tensor_h(&self) -> Result<&Tensor, GeometryError> {
        self.caches
            .tensor_h
            .get_or_init(|| {
                let l = lie_derivative(&self.model, &self.phi, &self.xi)?;
                Ok(l.scale(&RationalExpr::from_ratio(1, 2)))
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Residuals of the algebraic properties of `h`.
    pub fn h_properties(&self) -> Result<HProperties, GeometryError> {
        let h = self.tensor_h()?;
        let n = self.dim();
        let h_xi = vec::apply(h, &self.xi);
        let trace: RationalExpr = (0..n).map(|i| h.get(&[i, i]).clone()).sum();
        let h_phi = compose(h, &self.phi);
        let phi_h = compose(&self.phi, h);
        let trace_h_phi: RationalExpr = (0..n).map(|i| h_phi.get(&[i, i]).clone()).sum();
        Ok(HProperties {
            h_xi,
            trace,
            trace_h_phi,
            anticommutator: h_phi.add(&phi_h),
        })
    }

    /// `L_xi g`, zero exactly when `xi` is Killing.
    pub fn killing_residual(&self) -> Result<Tensor, GeometryError> {
        lie_derivative(&self.model, &self.g, &self.xi)
    }

    /// A point at which pointwise checks are made.
    pub fn sample_point(&self) -> Result<HashMap<String, BigRational>, GeometryError> {
        self.model.sample_point()
    }

    fn eval_matrix(
        &self,
        rows: &[Vec<RationalExpr>],
        point: &HashMap<String, BigRational>,
    ) -> Result<Vec<Vec<BigRational>>, GeometryError> {
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|e| ppst_expr::evaluate(e, point, self.model.constraints()).map_err(Into::into))
                    .collect()
            })
            .collect()
    }

    pub fn validate(&self) -> AxiomReport {
        validate_structure(self)
    }
}

/// Matrix product `a . b` of two (1,1) tensors.
pub fn compose(a: &Tensor, b: &Tensor) -> Tensor {
    let n = a.dim();
    Tensor::from_fn(n, 1, 1, |ix| {
        (0..n).map(|k| a.get(&[ix[0], k]) * b.get(&[k, ix[1]])).sum()
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct HProperties {
    pub h_xi: Vector,
    pub trace: RationalExpr,
    pub trace_h_phi: RationalExpr,
    pub anticommutator: Tensor,
}

impl HProperties {
    pub fn all_hold(&self) -> bool {
        vec::is_zero(&self.h_xi)
            && self.trace.is_zero()
            && self.trace_h_phi.is_zero()
            && self.anticommutator.is_zero()
    }
}

/// One axiom entry: pass flag, exact residual and a readable witness.
#[derive(Clone, Debug, PartialEq)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub passed: bool,
    pub residual: Option<Tensor>,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "{:<20} {}", c.name, if c.passed { "pass" } else { "FAIL" })?;
            if let Some(w) = &c.witness {
                write!(f, "  ({w})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// `name[i,j,..] = value` for the first non-zero entry of a residual.
pub fn describe_entry(labels: &[String], t: &Tensor) -> Option<String> {
    t.first_nonzero().map(|(ix, c)| {
        let names: Vec<&str> = ix.iter().map(|&i| labels[i].as_str()).collect();
        format!("[{}] = {c}", names.join(","))
    })
}

fn tensor_check(name: &'static str, label: &str, labels: &[String], residual: Tensor) -> AxiomCheck {
    let witness = describe_entry(labels, &residual).map(|w| format!("{label} {w}"));
    AxiomCheck {
        name,
        passed: witness.is_none(),
        residual: Some(residual),
        witness,
    }
}

fn flag_check(name: &'static str, result: Result<Option<String>, GeometryError>) -> AxiomCheck {
    let witness = match result {
        Ok(w) => w,
        Err(e) => Some(e.to_string()),
    };
    AxiomCheck {
        name,
        passed: witness.is_none(),
        residual: None,
        witness,
    }
}

/// Checks every axiom of an almost paracontact metric structure. Failures
/// are entries of the report, never errors.
pub fn validate_structure(s: &ParacontactStructure) -> AxiomReport {
    let n = s.dim();
    let labels = s.model.basis_labels();
    let mut checks = Vec::new();

    // phi^2 = Id - eta (x) xi
    let phi2 = compose(&s.phi, &s.phi);
    let target = Tensor::from_fn(n, 1, 1, |ix| {
        let id = if ix[0] == ix[1] { RationalExpr::one() } else { RationalExpr::zero() };
        id - &s.xi[ix[0]] * s.eta.get(&[ix[1]])
    });
    checks.push(tensor_check("phi_squared", "phi^2 - Id + eta(x)xi", &labels, phi2.sub(&target)));

    let eta_xi = s.eta_of(&s.xi) - RationalExpr::one();
    checks.push(tensor_check("eta_xi", "eta(xi) - 1", &[], Tensor::scalar(eta_xi)));

    // g(phi X, phi Y) + g(X,Y) - eta(X) eta(Y)
    let compat = Tensor::from_fn(n, 0, 2, |ix| {
        let (x, y) = (vec::basis(n, ix[0]), vec::basis(n, ix[1]));
        s.g(&s.phi_of(&x), &s.phi_of(&y)) + s.g.get(ix) - s.eta.get(&[ix[0]]) * s.eta.get(&[ix[1]])
    });
    checks.push(tensor_check(
        "metric_compatibility",
        "g(phi.,phi.) + g - eta(x)eta",
        &labels,
        compat,
    ));

    let dual = Tensor::covector(vec::sub(s.eta.components(), &vec::lower(&s.g, &s.xi)));
    checks.push(tensor_check("eta_dual", "eta != g(.,xi):", &labels, dual));

    checks.push(tensor_check(
        "phi_xi",
        "phi xi",
        &labels,
        Tensor::vector(s.phi_of(&s.xi)),
    ));

    let eta_phi = Tensor::from_fn(n, 0, 1, |ix| s.eta_of(&s.phi_of(&vec::basis(n, ix[0]))));
    checks.push(tensor_check("eta_phi", "eta o phi", &labels, eta_phi));

    checks.push(flag_check("signature", signature_witness(s)));
    checks.push(flag_check("eigendistributions", eigen_witness(s)));

    if let Some(frame) = &s.reference_frame {
        let gram = Tensor::from_fn(n, 0, 2, |ix| {
            let want = if ix[0] == ix[1] {
                RationalExpr::from_int(frame.signature[ix[0]] as i64)
            } else {
                RationalExpr::zero()
            };
            s.g(&frame.vectors[ix[0]], &frame.vectors[ix[1]]) - want
        });
        let witness = gram.first_nonzero().map(|(ix, c)| {
            let (a, b) = (&frame.labels[ix[0]], &frame.labels[ix[1]]);
            let want = if ix[0] == ix[1] { frame.signature[ix[0]] as i64 } else { 0 };
            let got = &c + RationalExpr::from_int(want);
            format!("g({a},{b}) = {got} != {want}")
        });
        checks.push(AxiomCheck {
            name: "reference_frame",
            passed: witness.is_none(),
            residual: Some(gram),
            witness,
        });
    }
    AxiomReport { checks }
}

fn signature_witness(s: &ParacontactStructure) -> Result<Option<String>, GeometryError> {
    let point = s.sample_point()?;
    let g = s.eval_matrix(&s.g.to_matrix(), &point)?;
    let (pos, neg, zero) = linalg::inertia_q(&g);
    let n = s.half_dim();
    Ok(if (pos, neg, zero) == (n + 1, n, 0) {
        None
    } else {
        Some(format!("signature ({pos},{neg}) with {zero} null directions, expected ({},{n})", n + 1))
    })
}

fn eigen_witness(s: &ParacontactStructure) -> Result<Option<String>, GeometryError> {
    let point = s.sample_point()?;
    let n = s.dim();
    let phi = s.eval_matrix(&s.phi.to_matrix(), &point)?;
    let eta = s.eval_matrix(&[s.eta.to_vec()], &point)?.remove(0);
    let one = BigRational::from_integer(1.into());
    let dims: Vec<usize> = [one.clone(), -one]
        .iter()
        .map(|ev| {
            let mut rows: Vec<Vec<BigRational>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { &phi[i][j] - ev } else { phi[i][j].clone() })
                        .collect()
                })
                .collect();
            rows.push(eta.clone());
            n - linalg::rank_q(&rows)
        })
        .collect();
    let h = s.half_dim();
    Ok(if dims == [h, h] {
        None
    } else {
        Some(format!("dim D+ = {}, dim D- = {}, expected {h} each", dims[0], dims[1]))
    })
}

/// Ordered basis `X_1..X_n, phi X_1..phi X_n, xi` with `g(X_i,X_j) = delta`,
/// `g(phi X_i, phi X_j) = -delta`, all mutually orthogonal.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiBasis {
    pub vectors: Vec<Vector>,
    pub signs: Vec<i8>,
}

impl PhiBasis {
    /// Inverse of the matrix whose columns are the basis vectors; row `i`
    /// gives the coordinates of a model-basis vector along `vectors[i]`.
    pub fn coframe(&self) -> Result<Vec<Vector>, GeometryError> {
        let n = self.vectors.len();
        let cols: Vec<Vector> = (0..n)
            .map(|i| (0..n).map(|a| self.vectors[a][i].clone()).collect())
            .collect();
        linalg::inverse(&cols).ok_or_else(|| GeometryError::PhiBasis("basis is degenerate".into()))
    }

    pub fn labels(&self) -> Vec<String> {
        let n = (self.vectors.len() - 1) / 2;
        (1..=n)
            .map(|i| format!("X{i}"))
            .chain((1..=n).map(|i| format!("phiX{i}")))
            .chain(std::iter::once("xi".to_string()))
            .collect()
    }
}

/// Builds a phi-basis by projecting model-basis vectors (and pairwise sums)
/// to `ker eta`, orthogonalizing, and normalizing with exact square roots.
pub fn build_phi_basis(s: &ParacontactStructure) -> Result<PhiBasis, GeometryError> {
    let n = s.dim();
    let half = s.half_dim();
    let point = s.sample_point()?;
    let constraints = s.model.constraints();
    let sign_at = |e: &RationalExpr| -> Result<std::cmp::Ordering, GeometryError> {
        let v = ppst_expr::evaluate(e, &point, constraints)?;
        Ok(v.cmp(&BigRational::from_integer(0.into())))
    };
    let project = |v: &[RationalExpr]| vec::sub(v, &vec::scale(&s.eta_of(v), &s.xi));

    let mut candidates: Vec<Vector> = (0..n).map(|a| project(&vec::basis(n, a))).collect();
    for a in 0..n {
        for b in (a + 1)..n {
            candidates.push(vec::add(&candidates[a], &candidates[b]));
            candidates.push(vec::sub(&candidates[a], &candidates[b]));
        }
    }

    let mut xs: Vec<Vector> = Vec::new();
    for cand in &candidates {
        if xs.len() == half {
            break;
        }
        let mut v = cand.clone();
        for x in &xs {
            let px = s.phi_of(x);
            v = vec::sub(&v, &vec::scale(&s.g(&v, x), x));
            v = vec::add(&v, &vec::scale(&s.g(&v, &px), &px));
        }
        if vec::is_zero(&v) {
            continue;
        }
        let q = s.g(&v, &v);
        if q.is_zero() {
            continue;
        }
        let (v, q) = match sign_at(&q)? {
            std::cmp::Ordering::Greater => (v, q),
            std::cmp::Ordering::Less => {
                let pv = s.phi_of(&v);
                let q = s.g(&pv, &pv);
                (pv, q)
            }
            std::cmp::Ordering::Equal => continue,
        };
        let Some(root) = q.sqrt_exact() else { continue };
        let Some(inv) = root.recip() else { continue };
        xs.push(vec::scale(&inv, &v));
    }
    if xs.len() < half {
        return Err(GeometryError::PhiBasis(format!(
            "found {} of {half} unit spacelike vectors in ker eta",
            xs.len()
        )));
    }
    let mut vectors = xs.clone();
    vectors.extend(xs.iter().map(|x| s.phi_of(x)));
    vectors.push(s.xi.clone());
    let mut signs = vec![1i8; half];
    signs.extend(vec![-1i8; half]);
    signs.push(1);
    let basis = PhiBasis { vectors, signs };
    for i in 0..n {
        for j in 0..n {
            let want = if i == j { RationalExpr::from_int(basis.signs[i] as i64) } else { RationalExpr::zero() };
            if s.g(&basis.vectors[i], &basis.vectors[j]) != want {
                return Err(GeometryError::PhiBasis(format!(
                    "constructed basis is not orthonormal at ({i},{j})"
                )));
            }
        }
    }
    Ok(basis)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flag {
    AlmostParacontactMetric,
    Normal,
    ParacontactMetric,
    KParacontact,
    ParaSasakian,
    Paracosymplectic,
    QuasiParaSasakian,
    ProperQuasiParaSasakian,
}

impl Flag {
    pub const ALL: [Flag; 8] = [
        Flag::AlmostParacontactMetric,
        Flag::Normal,
        Flag::ParacontactMetric,
        Flag::KParacontact,
        Flag::ParaSasakian,
        Flag::Paracosymplectic,
        Flag::QuasiParaSasakian,
        Flag::ProperQuasiParaSasakian,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Flag::AlmostParacontactMetric => "almost_paracontact_metric",
            Flag::Normal => "normal",
            Flag::ParacontactMetric => "paracontact_metric",
            Flag::KParacontact => "k_paracontact",
            Flag::ParaSasakian => "para_sasakian",
            Flag::Paracosymplectic => "paracosymplectic",
            Flag::QuasiParaSasakian => "quasi_para_sasakian",
            Flag::ProperQuasiParaSasakian => "proper_quasi_para_sasakian",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Flag::AlmostParacontactMetric => "almost paracontact metric",
            Flag::Normal => "normal",
            Flag::ParacontactMetric => "paracontact metric",
            Flag::KParacontact => "K-paracontact",
            Flag::ParaSasakian => "para-Sasakian",
            Flag::Paracosymplectic => "paracosymplectic",
            Flag::QuasiParaSasakian => "quasi-para-Sasakian",
            Flag::ProperQuasiParaSasakian => "proper quasi-para-Sasakian",
        }
    }
}

/// Why a flag is unset: a basis pair and the offending values.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub flag: Flag,
    pub pair: Option<(String, String)>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub flags: Vec<(Flag, bool)>,
    pub witnesses: Vec<Witness>,
}

impl Classification {
    pub fn has(&self, flag: Flag) -> bool {
        self.flags.iter().any(|&(f, v)| f == flag && v)
    }

    /// Most specific class name.
    pub fn summary(&self) -> &'static str {
        for f in [
            Flag::ParaSasakian,
            Flag::Paracosymplectic,
            Flag::ProperQuasiParaSasakian,
            Flag::KParacontact,
            Flag::ParacontactMetric,
            Flag::Normal,
        ] {
            if self.has(f) {
                return f.display_name();
            }
        }
        Flag::AlmostParacontactMetric.display_name()
    }

    pub fn witness(&self, flag: Flag) -> Option<&Witness> {
        self.witnesses.iter().find(|w| w.flag == flag)
    }
}

fn pair_witness(flag: Flag, labels: &[String], name: &str, t: &Tensor) -> Option<Witness> {
    t.first_nonzero().map(|(ix, c)| Witness {
        flag,
        pair: Some((labels[ix[0]].clone(), labels[ix[1]].clone())),
        detail: {
            let names: Vec<&str> = ix.iter().map(|&i| labels[i].as_str()).collect();
            format!("{name}[{}] = {c}", names.join(","))
        },
    })
}

/// Classifies a structure that passes every axiom.
pub fn classify(s: &ParacontactStructure) -> Result<Classification, GeometryError> {
    let report = validate_structure(s);
    if !report.passed() {
        let failed: Vec<String> = report
            .failures()
            .map(|c| match &c.witness {
                Some(w) => format!("{}: {w}", c.name),
                None => c.name.to_string(),
            })
            .collect();
        return Err(GeometryError::AxiomFailure(failed.join("; ")));
    }
    let labels = s.model.basis_labels();
    let d_eta = s.d_eta()?;
    let phi_form = s.fundamental_form();
    let d_phi = s.d_fundamental()?;
    let n1 = s.nijenhuis_n1()?;
    let killing = s.killing_residual()?;

    let normal = n1.is_zero();
    let contact = d_eta.sub(phi_form);
    let paracontact = contact.is_zero();
    let k_paracontact = paracontact && killing.is_zero();
    let para_sasakian = normal && paracontact;
    let closed_phi = d_phi.is_zero();
    let closed_eta = d_eta.is_zero();
    let paracosymplectic = normal && closed_phi && closed_eta;
    let qps = normal && closed_phi;
    let proper = qps && !para_sasakian && !paracosymplectic;

    let mut witnesses = Vec::new();
    if !normal {
        if let Some((ix, c)) = n1.first_nonzero() {
            witnesses.push(Witness {
                flag: Flag::Normal,
                pair: Some((labels[ix[1]].clone(), labels[ix[2]].clone())),
                detail: format!(
                    "N1({},{}) has {} component {c}",
                    labels[ix[1]], labels[ix[2]], labels[ix[0]]
                ),
            });
        }
    }
    if !paracontact {
        if let Some((ix, _)) = contact.first_nonzero() {
            let (a, b) = (ix[0], ix[1]);
            witnesses.push(Witness {
                flag: Flag::ParacontactMetric,
                pair: Some((labels[a].clone(), labels[b].clone())),
                detail: format!(
                    "d eta({0},{1}) = {2} but Phi({0},{1}) = {3}",
                    labels[a],
                    labels[b],
                    d_eta.get(&[a, b]),
                    phi_form.get(&[a, b])
                ),
            });
        }
    }
    if paracontact && !k_paracontact {
        witnesses.extend(pair_witness(Flag::KParacontact, &labels, "L_xi g", &killing));
    } else if !paracontact {
        if let Some(w) = witnesses.iter().find(|w| w.flag == Flag::ParacontactMetric).cloned() {
            witnesses.push(Witness { flag: Flag::KParacontact, ..w });
        }
    }
    if !para_sasakian {
        let reason = witnesses
            .iter()
            .find(|w| matches!(w.flag, Flag::Normal | Flag::ParacontactMetric))
            .cloned();
        if let Some(w) = reason {
            witnesses.push(Witness { flag: Flag::ParaSasakian, ..w });
        }
    }
    if !closed_phi {
        if let Some((ix, c)) = d_phi.first_nonzero() {
            witnesses.push(Witness {
                flag: Flag::QuasiParaSasakian,
                pair: Some((labels[ix[0]].clone(), labels[ix[1]].clone())),
                detail: format!(
                    "d Phi({},{},{}) = {c}",
                    labels[ix[0]], labels[ix[1]], labels[ix[2]]
                ),
            });
        }
    } else if !normal {
        let w = witnesses[0].clone();
        witnesses.push(Witness { flag: Flag::QuasiParaSasakian, ..w });
    }
    if !paracosymplectic {
        if !closed_eta {
            witnesses.extend(pair_witness(Flag::Paracosymplectic, &labels, "d eta", &d_eta));
        } else if let Some(w) = witnesses
            .iter()
            .find(|w| w.flag == Flag::QuasiParaSasakian)
            .cloned()
        {
            witnesses.push(Witness { flag: Flag::Paracosymplectic, ..w });
        }
    }
    if qps && !proper {
        witnesses.push(Witness {
            flag: Flag::ProperQuasiParaSasakian,
            pair: None,
            detail: if para_sasakian {
                "structure is para-Sasakian".into()
            } else {
                "structure is paracosymplectic".into()
            },
        });
    }

    let flags = vec![
        (Flag::AlmostParacontactMetric, true),
        (Flag::Normal, normal),
        (Flag::ParacontactMetric, paracontact),
        (Flag::KParacontact, k_paracontact),
        (Flag::ParaSasakian, para_sasakian),
        (Flag::Paracosymplectic, paracosymplectic),
        (Flag::QuasiParaSasakian, qps),
        (Flag::ProperQuasiParaSasakian, proper),
    ];
    Ok(Classification { flags, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> RationalExpr {
        RationalExpr::from_int(n)
    }

    fn frame_structure(brackets: &[((usize, usize), Vector)]) -> ParacontactStructure {
        let labels = vec!["e1".to_string(), "e2".into(), "xi".into()];
        let m = ManifoldModel::frame(labels, brackets).unwrap();
        let g = Tensor::bilinear(&[
            vec![r(1), r(0), r(0)],
            vec![r(0), r(-1), r(0)],
            vec![r(0), r(0), r(1)],
        ]);
        let phi = Tensor::endomorphism(&[
            vec![r(0), r(1), r(0)],
            vec![r(1), r(0), r(0)],
            vec![r(0), r(0), r(0)],
        ]);
        ParacontactStructure::new(m, phi, vec![r(0), r(0), r(1)], None, g).unwrap()
    }

    #[test]
    fn example_frame_is_proper_quasi_para_sasakian() {
        let s = frame_structure(&[((0, 1), vec![r(0), r(0), r(4)])]);
        assert!(s.validate().passed());
        assert_eq!(s.d_eta().unwrap().get(&[0, 1]), &r(-2));
        assert_eq!(s.fundamental_form().get(&[0, 1]), &r(1));
        assert!(s.nijenhuis_n1().unwrap().is_zero());
        let a = s.tensor_a().unwrap();
        assert_eq!(a, &s.phi().scale(&r(2)));
        assert!(s.tensor_h().unwrap().is_zero());
        let c = classify(&s).unwrap();
        assert!(c.has(Flag::ProperQuasiParaSasakian));
        assert!(!c.has(Flag::ParaSasakian));
        assert_eq!(c.summary(), "proper quasi-para-Sasakian");
        let basis = build_phi_basis(&s).unwrap();
        assert_eq!(basis.vectors[0], vec::basis(3, 0));
        assert_eq!(basis.vectors[1], vec::basis(3, 1));
    }

    #[test]
    fn non_normal_structure_has_witness() {
        let s = frame_structure(&[((2, 0), vec![r(1), r(0), r(0)])]);
        assert!(s.validate().passed());
        let c = classify(&s).unwrap();
        assert!(!c.has(Flag::Normal));
        assert!(!c.has(Flag::QuasiParaSasakian));
        assert!(c.witness(Flag::Normal).is_some());
    }

    #[test]
    fn eta_mismatch_is_reported() {
        let base = frame_structure(&[]);
        let bad = ParacontactStructure::new(
            base.model().clone(),
            base.phi().clone(),
            base.xi().clone(),
            Some(Tensor::covector(vec![r(1), r(0), r(1)])),
            base.metric().clone(),
        )
        .unwrap();
        let report = bad.validate();
        let check = report.get("eta_dual").unwrap();
        assert!(!check.passed);
        assert!(check.witness.as_ref().unwrap().starts_with("eta != g(.,xi)"));
        assert!(classify(&bad).is_err());
    }
}
