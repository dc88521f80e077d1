//! Constant curvature detection and the sign theorem for quasi-para-Sasakian
//! manifolds of constant curvature.

use std::fmt;

use ppst_expr::{BigRational, RationalExpr};
use num_traits::{Signed, Zero};

use crate::deformation::detect_homothetic_origin;
use crate::error::GeometryError;
use crate::paracontact::{classify, describe_entry, Flag, ParacontactStructure};
use crate::tensor::vec;
use crate::tensor::Tensor;

/// `g(Y,Z) X - g(X,Z) Y` as a (1,3) tensor in the curvature index order.
fn unit_curvature(s: &ParacontactStructure) -> Tensor {
    let g = s.metric();
    Tensor::from_fn(s.dim(), 1, 3, |ix| {
        let (l, k, i, j) = (ix[0], ix[1], ix[2], ix[3]);
        let mut v = RationalExpr::zero();
        if l == i {
            v = v + g.get(&[j, k]);
        }
        if l == j {
            v = v - g.get(&[i, k]);
        }
        v
    })
}

/// `K` with `R(X,Y)Z = K (g(Y,Z)X - g(X,Z)Y)`, if the structure has
/// constant curvature.
pub fn constant_curvature_of(s: &ParacontactStructure) -> Result<Option<BigRational>, GeometryError> {
    let r = &s.curvature()?.riemann;
    let unit = unit_curvature(s);
    let k = match r.first_nonzero() {
        None => BigRational::zero(),
        Some((ix, c)) => {
            let u = unit.get(&ix);
            if u.is_zero() {
                return Ok(None);
            }
            match (c / u).constant_value() {
                Some(k) => k,
                None => return Ok(None),
            }
        }
    };
    let residual = r.sub(&unit.scale(&RationalExpr::from_rational(k.clone())));
    Ok(residual.is_zero().then_some(k))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Assertion {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TheoremOutcome {
    /// The structure is not quasi-para-Sasakian or not of constant curvature.
    HypothesesNotMet(String),
    /// Every assertion of the relevant branch holds.
    Verified,
    /// Some assertion fails; for `K > 0` this contradicts the theorem.
    Violation(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TheoremReport {
    pub curvature: Option<BigRational>,
    pub lambda: Option<BigRational>,
    pub assertions: Vec<Assertion>,
    pub outcome: TheoremOutcome,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        !matches!(self.outcome, TheoremOutcome::Violation(_))
    }
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.curvature {
            Some(k) => writeln!(f, "constant curvature K = {k}")?,
            None => writeln!(f, "not constant curvature")?,
        }
        if let Some(l) = &self.lambda {
            writeln!(f, "lambda = {l}")?;
        }
        for a in &self.assertions {
            write!(f, "{:<40} {}", a.name, if a.passed { "pass" } else { "FAIL" })?;
            if let Some(w) = &a.witness {
                write!(f, "  ({w})")?;
            }
            writeln!(f)?;
        }
        match &self.outcome {
            TheoremOutcome::HypothesesNotMet(why) => writeln!(f, "theorem hypotheses not met: {why}"),
            TheoremOutcome::Verified => writeln!(f, "theorem verified"),
            TheoremOutcome::Violation(why) => writeln!(f, "THEOREM VIOLATION: {why}"),
        }
    }
}

fn tensor_assertion(name: &'static str, labels: &[String], residual: &Tensor) -> Assertion {
    let witness = describe_entry(labels, residual);
    Assertion {
        name,
        passed: witness.is_none(),
        witness,
    }
}

fn scalar_assertion(name: &'static str, lhs: &RationalExpr, rhs: &RationalExpr) -> Assertion {
    let passed = lhs == rhs;
    Assertion {
        name,
        passed,
        witness: (!passed).then(|| format!("{lhs} != {rhs}")),
    }
}

/// Checks the constant-curvature theorem: `K <= 0`; `K = 0` forces a
/// paracosymplectic structure; `K < 0` forces `A = lambda phi` with
/// `K = -lambda^2` and a homothetic para-Sasakian origin.
pub fn check_constant_curvature_theorem(s: &ParacontactStructure) -> Result<TheoremReport, GeometryError> {
    let not_met = |why: String, k: Option<BigRational>| TheoremReport {
        curvature: k,
        lambda: None,
        assertions: Vec::new(),
        outcome: TheoremOutcome::HypothesesNotMet(why),
    };
    let class = match classify(s) {
        Ok(c) => c,
        Err(e) => return Ok(not_met(e.to_string(), None)),
    };
    if !class.has(Flag::QuasiParaSasakian) {
        return Ok(not_met("structure is not quasi-para-Sasakian".into(), None));
    }
    let Some(k) = constant_curvature_of(s)? else {
        return Ok(not_met("not constant curvature".into(), None));
    };

    let labels = s.model().basis_labels();
    let n = s.dim();
    let half = RationalExpr::from_int(s.half_dim() as i64);
    let kq = RationalExpr::from_rational(k.clone());
    let a = s.tensor_a()?;
    let mut assertions = vec![Assertion {
        name: "K <= 0",
        passed: !k.is_positive(),
        witness: k.is_positive().then(|| format!("K = {k}")),
    }];
    let mut lambda = None;

    if k.is_zero() {
        assertions.push(tensor_assertion("A = 0", &labels, a));
        let conn = s.connection()?;
        let nabla_phi = crate::connection::covariant_derivative(s.model(), conn, s.phi());
        assertions.push(tensor_assertion("nabla phi = 0", &labels, &nabla_phi));
        let pc = class.has(Flag::Paracosymplectic);
        assertions.push(Assertion {
            name: "paracosymplectic",
            passed: pc,
            witness: (!pc).then(|| {
                class
                    .witness(Flag::Paracosymplectic)
                    .map(|w| w.detail.clone())
                    .unwrap_or_default()
            }),
        });
    } else if k.is_negative() {
        let origin = detect_homothetic_origin(s)?;
        let lam = origin.as_ref().map(|o| o.lambda.clone());
        assertions.push(Assertion {
            name: "A = lambda phi",
            passed: lam.is_some(),
            witness: lam.is_none().then(|| "A is not a constant multiple of phi".to_string()),
        });
        if let Some(l) = &lam {
            let lq = RationalExpr::from_rational(l.clone());
            let curv = s.curvature()?;
            let g = s.metric();
            let eta = s.eta();
            assertions.push(scalar_assertion("K = -lambda^2", &kq, &-(&lq * &lq)));
            let tr: RationalExpr = (0..n)
                .map(|i| (0..n).map(|j| s.phi().get(&[i, j]) * a.get(&[j, i])).sum::<RationalExpr>())
                .sum();
            assertions.push(scalar_assertion(
                "tr(phi A) = 2n lambda",
                &tr,
                &(RationalExpr::from_int(2) * &half * &lq),
            ));
            let two_nk = RationalExpr::from_int(2) * &half * &kq;
            let s_res = curv.ricci.sub(&g.scale(&two_nk));
            assertions.push(tensor_assertion("S = 2nK g", &labels, &s_res));
            let star = curv.star_ricci.as_ref().expect("phi supplied");
            let star_res = Tensor::from_fn(n, 0, 2, |ix| {
                star.get(ix) - &kq * (-g.get(ix) + eta.get(&[ix[0]]) * eta.get(&[ix[1]]))
            });
            assertions.push(tensor_assertion("S* = K(-g + eta(x)eta)", &labels, &star_res));
            let irem3 = Tensor::from_fn(n, 0, 2, |ix| {
                let (y, z) = (vec::basis(n, ix[0]), vec::basis(n, ix[1]));
                s.g(&vec::apply(a, &y), &s.phi_of(&z))
                    + &lq * (g.get(ix) - eta.get(&[ix[0]]) * eta.get(&[ix[1]]))
            });
            assertions.push(tensor_assertion(
                "g(AY,phiZ) = -lambda(g - eta(x)eta)",
                &labels,
                &irem3,
            ));
            let verified = origin.as_ref().is_some_and(|o| o.verified);
            assertions.push(Assertion {
                name: "homothetic para-Sasakian origin",
                passed: verified,
                witness: (!verified).then(|| "deformed structure is not para-Sasakian".to_string()),
            });
        }
        lambda = lam;
    }

    let failed: Vec<&str> = assertions.iter().filter(|a| !a.passed).map(|a| a.name).collect();
    let outcome = if failed.is_empty() {
        TheoremOutcome::Verified
    } else {
        TheoremOutcome::Violation(failed.join(", "))
    };
    Ok(TheoremReport {
        curvature: Some(k),
        lambda,
        assertions,
        outcome,
    })
}
