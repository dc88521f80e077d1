//! Exact verification of the curvature and structure identities of
//! quasi-para-Sasakian manifolds.
//!
//! Every residual is `lhs - rhs`, evaluated on all index tuples of a
//! phi-basis. Vector-valued residuals are expressed in that basis too.

use std::fmt;

use ppst_expr::RationalExpr;

use crate::connection::covariant_derivative;
use crate::curvature::apply_riemann;
use crate::error::GeometryError;
use crate::paracontact::{build_phi_basis, classify, Flag, ParacontactStructure, PhiBasis};
use crate::tensor::vec::{self, Vector};
use crate::tensor::{index_tuples, Tensor};

/// Identity keys, in the order they are stated.
pub const IDENTITY_KEYS: [&str; 15] = [
    "p1", "P5", "P6a", "P6b", "P6c", "P2", "P3", "P4", "R1", "R1.1", "R1.2", "R1.3", "RXYY", "S1",
    "S2",
];

#[derive(Clone, Debug, PartialEq)]
pub enum Residual {
    Scalar(RationalExpr),
    Tensor(Tensor),
}

impl Residual {
    pub fn is_zero(&self) -> bool {
        match self {
            Residual::Scalar(e) => e.is_zero(),
            Residual::Tensor(t) => t.is_zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityEntry {
    pub key: &'static str,
    pub passed: bool,
    pub residual: Residual,
    /// Basis labels of the non-zero component of highest degree.
    pub witness: Option<String>,
    /// Left and right sides, for scalar identities.
    pub sides: Option<(RationalExpr, RationalExpr)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    /// Sorted by key.
    pub entries: Vec<IdentityEntry>,
    pub basis_labels: Vec<String>,
    pub mode: &'static str,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn get(&self, key: &str) -> Option<&IdentityEntry> {
        self.entries.iter().find(|e| e.key == key)
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            write!(f, "{:<6} {}", e.key, if e.passed { "pass" } else { "FAIL" })?;
            if let Some((l, r)) = &e.sides {
                write!(f, "  lhs = {l}, rhs = {r}")?;
            }
            if let Some(w) = &e.witness {
                write!(f, "  witness {w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Everything the identities need, expressed as functions of vectors.
struct Evaluator<'a> {
    s: &'a ParacontactStructure,
    basis: Vec<Vector>,
    signs: Vec<i8>,
    coframe: Vec<Vector>,
    a: Tensor,
    nabla_phi: Tensor,
    nabla_a: Tensor,
    nabla_eta: Tensor,
    riemann: Tensor,
}

/// Contracts the trailing lower slots of a (1,k) or (0,k) tensor.
fn contract(t: &Tensor, args: &[&[RationalExpr]]) -> Vec<RationalExpr> {
    let n = t.dim();
    let (up, lo) = t.valence();
    debug_assert_eq!(lo, args.len());
    let outs = if up == 0 { 1 } else { n };
    let mut out = vec![RationalExpr::zero(); outs];
    for ix in index_tuples(n, lo) {
        let mut w = RationalExpr::one();
        for (slot, &i) in ix.iter().enumerate() {
            let c = &args[slot][i];
            if c.is_zero() {
                w = RationalExpr::zero();
                break;
            }
            w = w * c;
        }
        if w.is_zero() {
            continue;
        }
        for (k, o) in out.iter_mut().enumerate() {
            let mut full = Vec::with_capacity(up + lo);
            if up == 1 {
                full.push(k);
            }
            full.extend_from_slice(&ix);
            let c = t.get(&full);
            if !c.is_zero() {
                *o = &*o + c * &w;
            }
        }
    }
    out
}

impl<'a> Evaluator<'a> {
    fn new(s: &'a ParacontactStructure, basis: &PhiBasis) -> Result<Self, GeometryError> {
        let conn = s.connection()?;
        let m = s.model();
        let a = s.tensor_a()?.clone();
        Ok(Evaluator {
            s,
            basis: basis.vectors.clone(),
            signs: basis.signs.clone(),
            coframe: basis.coframe()?,
            nabla_phi: covariant_derivative(m, conn, s.phi()),
            nabla_a: covariant_derivative(m, conn, &a),
            nabla_eta: covariant_derivative(m, conn, s.eta()),
            riemann: s.curvature()?.riemann.clone(),
            a,
        })
    }

    fn n(&self) -> usize {
        self.basis.len()
    }
    fn g(&self, u: &[RationalExpr], v: &[RationalExpr]) -> RationalExpr {
        self.s.g(u, v)
    }
    fn phi(&self, v: &[RationalExpr]) -> Vector {
        self.s.phi_of(v)
    }
    fn eta(&self, v: &[RationalExpr]) -> RationalExpr {
        self.s.eta_of(v)
    }
    fn xi(&self) -> &Vector {
        self.s.xi()
    }
    fn a(&self, v: &[RationalExpr]) -> Vector {
        vec::apply(&self.a, v)
    }
    fn r(&self, x: &[RationalExpr], y: &[RationalExpr], z: &[RationalExpr]) -> Vector {
        apply_riemann(&self.riemann, x, y, z)
    }
    /// `(nabla_X phi) Y`.
    fn nabla_phi(&self, x: &[RationalExpr], y: &[RationalExpr]) -> Vector {
        contract(&self.nabla_phi, &[y, x])
    }
    /// `(nabla_X A) Y`.
    fn nabla_a(&self, x: &[RationalExpr], y: &[RationalExpr]) -> Vector {
        contract(&self.nabla_a, &[y, x])
    }
    /// `(nabla_X eta) Y`.
    fn nabla_eta(&self, x: &[RationalExpr], y: &[RationalExpr]) -> RationalExpr {
        contract(&self.nabla_eta, &[y, x]).remove(0)
    }

    /// Components of a vector in the phi-basis.
    fn in_basis(&self, v: &[RationalExpr]) -> Vector {
        self.coframe
            .iter()
            .map(|row| row.iter().zip(v).map(|(c, x)| c * x).sum())
            .collect()
    }

    fn ricci(&self, y: &[RationalExpr], z: &[RationalExpr]) -> RationalExpr {
        (0..self.n())
            .map(|i| {
                let e = &self.basis[i];
                let t = self.g(&self.r(e, y, z), e);
                if self.signs[i] > 0 { t } else { -t }
            })
            .sum()
    }

    fn star_ricci(&self, y: &[RationalExpr], z: &[RationalExpr]) -> RationalExpr {
        let pz = self.phi(z);
        (0..self.n())
            .map(|i| {
                let e = &self.basis[i];
                let t = self.g(&self.r(e, y, &pz), &self.phi(e));
                if self.signs[i] > 0 { t } else { -t }
            })
            .sum()
    }

    fn weighted_trace(&self, f: impl Fn(&[RationalExpr]) -> RationalExpr) -> RationalExpr {
        (0..self.n())
            .map(|i| {
                let t = f(&self.basis[i]);
                if self.signs[i] > 0 { t } else { -t }
            })
            .sum()
    }

    /// `tr(phi A) = sum eps_i g(phi A e_i, e_i)`.
    fn trace_phi_a(&self) -> RationalExpr {
        self.weighted_trace(|e| self.g(&self.phi(&self.a(e)), e))
    }

    /// `tr A^2 = sum eps_i g(A A e_i, e_i)`.
    fn trace_a_squared(&self) -> RationalExpr {
        self.weighted_trace(|e| self.g(&self.a(&self.a(e)), e))
    }

    /// Scalar-valued residual over all basis tuples of the given arity.
    fn scalar_field(&self, arity: usize, f: impl Fn(&[&Vector]) -> RationalExpr) -> Tensor {
        let n = self.n();
        Tensor::from_fn(n, 0, arity, |ix| {
            let args: Vec<&Vector> = ix.iter().map(|&i| &self.basis[i]).collect();
            f(&args)
        })
    }

    /// Vector-valued residual; the upper index is a phi-basis component.
    fn vector_field(&self, arity: usize, f: impl Fn(&[&Vector]) -> Vector) -> Tensor {
        let n = self.n();
        let mut out = Tensor::zeros(n, 1, arity);
        for ix in index_tuples(n, arity) {
            let args: Vec<&Vector> = ix.iter().map(|&i| &self.basis[i]).collect();
            let v = self.in_basis(&f(&args));
            for (k, c) in v.into_iter().enumerate() {
                let mut full = vec![k];
                full.extend_from_slice(&ix);
                out.set(&full, c);
            }
        }
        out
    }

    fn evaluate(&self, key: &str) -> Result<(Residual, Option<(RationalExpr, RationalExpr)>), GeometryError> {
        let xi = self.xi().clone();
        let t = |t: Tensor| Ok((Residual::Tensor(t), None));
        match key {
            "p1" => t(self.scalar_field(2, |v| {
                self.g(&self.a(v[0]), v[1]) + self.g(v[0], &self.a(v[1]))
            })),
            "P5" => t(self.vector_field(2, |v| {
                let (x, y) = (v[0], v[1]);
                let mut r = self.nabla_phi(x, y);
                r = vec::add(&r, &vec::scale(&self.g(&self.a(x), &self.phi(y)), &xi));
                vec::add(&r, &vec::scale(&self.eta(y), &self.phi(&self.a(x))))
            })),
            "P6a" => t(self.vector_field(1, |v| self.nabla_phi(&xi, v[0]))),
            "P6b" => {
                let nx = self.s.nabla(&xi, &xi)?;
                t(self.vector_field(0, |_| nx.clone()))
            }
            "P6c" => t(self.scalar_field(1, |v| self.nabla_eta(&xi, v[0]))),
            "P2" => t(self.vector_field(1, |v| {
                vec::sub(&self.a(&self.phi(v[0])), &self.phi(&self.a(v[0])))
            })),
            "P3" => t(self.scalar_field(2, |v| {
                self.g(&self.a(&self.phi(v[0])), &self.phi(v[1])) + self.g(&self.a(v[0]), v[1])
            })),
            "P4" => t(self.scalar_field(2, |v| {
                self.g(&self.a(&self.phi(v[0])), v[1]) + self.g(&self.a(v[0]), &self.phi(v[1]))
            })),
            "R1" => t(self.vector_field(2, |v| {
                vec::add(&self.r(&xi, v[0], v[1]), &self.nabla_a(v[0], v[1]))
            })),
            "R1.1" => t(self.scalar_field(2, |v| {
                self.g(&self.r(&xi, v[0], v[1]), &xi) - self.g(&self.a(v[0]), &self.a(v[1]))
            })),
            "R1.2" => t(self.scalar_field(3, |v| {
                let (x, y, z) = (v[0], v[1], v[2]);
                let (ax, ay, az) = (self.a(x), self.a(y), self.a(z));
                self.g(&self.r(&xi, x, &self.phi(y)), &self.phi(z)) + self.g(&self.r(&xi, x, y), z)
                    - self.g(&ax, &ay) * self.eta(z)
                    + self.g(&ax, &az) * self.eta(y)
            })),
            "R1.3" => {
                let lhs = self.ricci(&xi, &xi);
                let rhs = -self.trace_a_squared();
                Ok((Residual::Scalar(&lhs - &rhs), Some((lhs, rhs))))
            }
            "RXYY" => t(self.scalar_field(4, |v| {
                let (x, y, z, w) = (v[0], v[1], v[2], v[3]);
                let (ax, ay) = (self.a(x), self.a(y));
                let (pz, pw) = (self.phi(z), self.phi(w));
                let rxy = |u: &[RationalExpr]| self.r(x, y, u);
                let lhs = self.g(&rxy(&pz), &pw) + self.g(&rxy(z), w);
                let rhs = self.eta(w) * self.g(&rxy(z), &xi) + self.eta(z) * self.g(&rxy(&xi), w)
                    - self.g(&ax, &pw) * self.g(&ay, &pz)
                    + self.g(&ax, &pz) * self.g(&ay, &pw)
                    + self.g(&ax, z) * self.g(&ay, w)
                    - self.g(&ax, w) * self.g(&ay, z);
                lhs - rhs
            })),
            "S1" => {
                let tr = self.trace_phi_a();
                t(self.scalar_field(2, |v| {
                    let (y, z) = (v[0], v[1]);
                    let ay = self.a(y);
                    self.star_ricci(y, z) + self.ricci(y, z)
                        - self.ricci(y, &xi) * self.eta(z)
                        - self.g(&ay, &self.phi(z)) * &tr
                        + self.g(&ay, &self.a(z))
                }))
            }
            "S2" => {
                let r = self.weighted_trace(|e| self.ricci(e, e));
                let rs = self.weighted_trace(|e| self.star_ricci(e, e));
                let tr = self.trace_phi_a();
                let lhs = rs + r;
                let rhs = -(&tr * &tr);
                Ok((Residual::Scalar(&lhs - &rhs), Some((lhs, rhs))))
            }
            other => Err(GeometryError::UnknownIdentity(other.to_string())),
        }
    }

    fn entry(&self, key: &'static str, labels: &[String]) -> Result<IdentityEntry, GeometryError> {
        let (residual, sides) = self.evaluate(key)?;
        let witness = match &residual {
            Residual::Scalar(e) if !e.is_zero() => Some(format!("= {e}")),
            Residual::Tensor(t) => worst_entry(t).map(|(ix, c)| {
                let names: Vec<&str> = ix.iter().map(|&i| labels[i].as_str()).collect();
                format!("[{}] = {c}", names.join(","))
            }),
            _ => None,
        };
        Ok(IdentityEntry {
            key,
            passed: residual.is_zero(),
            residual,
            witness,
            sides,
        })
    }
}

/// Non-zero component of highest total degree (first one on ties).
fn worst_entry(t: &Tensor) -> Option<(Vec<usize>, RationalExpr)> {
    let mut best: Option<(usize, Vec<usize>, RationalExpr)> = None;
    for (ix, c) in t.nonzero_entries() {
        let deg = c.numerator().total_degree() as usize + c.denominator().total_degree() as usize;
        if best.as_ref().is_none_or(|b| deg > b.0) {
            best = Some((deg, ix, c.clone()));
        }
    }
    best.map(|(_, ix, c)| (ix, c))
}

fn require_hypothesis(s: &ParacontactStructure) -> Result<(), GeometryError> {
    let c = classify(s).map_err(|e| GeometryError::Hypothesis(e.to_string()))?;
    if c.has(Flag::QuasiParaSasakian) {
        return Ok(());
    }
    let w = c
        .witness(Flag::QuasiParaSasakian)
        .map(|w| w.detail.clone())
        .unwrap_or_default();
    Err(GeometryError::Hypothesis(format!("structure is not quasi-para-Sasakian: {w}")))
}

fn canonical_key(key: &str) -> Result<&'static str, GeometryError> {
    IDENTITY_KEYS
        .iter()
        .copied()
        .find(|k| *k == key)
        .ok_or_else(|| GeometryError::UnknownIdentity(key.to_string()))
}

/// Runs every identity on a quasi-para-Sasakian structure.
pub fn run_suite(s: &ParacontactStructure) -> Result<IdentityReport, GeometryError> {
    require_hypothesis(s)?;
    let basis = build_phi_basis(s)?;
    run_suite_in_basis(s, &basis)
}

/// As [`run_suite`] with a caller-supplied phi-basis; the hypothesis is not
/// re-checked.
pub fn run_suite_in_basis(s: &ParacontactStructure, basis: &PhiBasis) -> Result<IdentityReport, GeometryError> {
    let ev = Evaluator::new(s, basis)?;
    let labels = basis.labels();
    let mut entries = IDENTITY_KEYS
        .iter()
        .map(|k| ev.entry(k, &labels))
        .collect::<Result<Vec<_>, _>>()?;
    entries.sort_by(|a, b| a.key.cmp(b.key));
    Ok(IdentityReport {
        entries,
        basis_labels: labels,
        mode: "symbolic",
    })
}

/// A single identity; scalar identities also report both sides.
pub fn check_single(s: &ParacontactStructure, key: &str) -> Result<IdentityEntry, GeometryError> {
    let key = canonical_key(key)?;
    require_hypothesis(s)?;
    let basis = build_phi_basis(s)?;
    Evaluator::new(s, &basis)?.entry(key, &basis.labels())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ManifoldModel;

    fn r(n: i64) -> RationalExpr {
        RationalExpr::from_int(n)
    }

    fn example() -> ParacontactStructure {
        let labels = vec!["e1".to_string(), "e2".into(), "xi".into()];
        let m = ManifoldModel::frame(labels, &[((0, 1), vec![r(0), r(0), r(4)])]).unwrap();
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
    fn all_identities_hold_on_the_example_frame() {
        let report = run_suite(&example()).unwrap();
        for e in &report.entries {
            assert!(e.passed, "{} failed: {:?}", e.key, e.witness);
        }
        assert_eq!(report.entries.len(), 15);
    }

    #[test]
    fn scalar_sides() {
        let s = example();
        let s2 = check_single(&s, "S2").unwrap();
        assert_eq!(s2.sides, Some((r(-16), r(-16))));
        let r13 = check_single(&s, "R1.3").unwrap();
        assert_eq!(r13.sides, Some((r(-8), r(-8))));
        assert!(matches!(check_single(&s, "Q9"), Err(GeometryError::UnknownIdentity(_))));
    }

    #[test]
    fn basis_traces_agree_with_metric_traces() {
        let s = example();
        let basis = build_phi_basis(&s).unwrap();
        let ev = Evaluator::new(&s, &basis).unwrap();
        let c = s.curvature().unwrap();
        assert_eq!(ev.trace_phi_a(), r(4));
        assert_eq!(ev.weighted_trace(|e| ev.star_ricci(e, e)), c.star_scalar.clone().unwrap());
        let sr = c.star_ricci.as_ref().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let (u, v) = (vec::basis(3, i), vec::basis(3, j));
                assert_eq!(ev.star_ricci(&u, &v), *sr.get(&[i, j]));
                assert_eq!(ev.ricci(&u, &v), *c.ricci.get(&[i, j]));
            }
        }
    }
}
