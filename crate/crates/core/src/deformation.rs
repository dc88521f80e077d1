//! D-homothetic deformations and their transformation laws.

use std::fmt;

use ppst_expr::{BigRational, RationalExpr};
use num_traits::{Signed, Zero};

use crate::curvature::apply_riemann;
use crate::error::GeometryError;
use crate::paracontact::{classify, describe_entry, Flag, ParacontactStructure};
use crate::tensor::vec::{self, Vector};
use crate::tensor::{index_tuples, Tensor};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationParams {
    alpha: BigRational,
    beta: BigRational,
}

impl DeformationParams {
    pub fn new(alpha: BigRational, beta: BigRational) -> Result<Self, GeometryError> {
        if alpha.is_zero() {
            return Err(GeometryError::InvalidParams("alpha must be non-zero".into()));
        }
        if !beta.is_positive() {
            return Err(GeometryError::InvalidParams("beta must be positive".into()));
        }
        Ok(DeformationParams { alpha, beta })
    }

    pub fn from_ints(alpha: i64, beta: i64) -> Result<Self, GeometryError> {
        Self::new(BigRational::from_integer(alpha.into()), BigRational::from_integer(beta.into()))
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }
    pub fn beta(&self) -> &BigRational {
        &self.beta
    }

    /// `alpha^2 = beta`.
    pub fn is_homothetic(&self) -> bool {
        &self.alpha * &self.alpha == self.beta
    }

    /// `alpha^2 / beta - 1`, the factor in the connection and curvature laws.
    pub fn defect(&self) -> BigRational {
        &self.alpha * &self.alpha / &self.beta - BigRational::from_integer(1.into())
    }

    /// Applying `self` then `next` equals applying the product parameters.
    pub fn then(&self, next: &DeformationParams) -> DeformationParams {
        DeformationParams {
            alpha: &self.alpha * &next.alpha,
            beta: &self.beta * &next.beta,
        }
    }
}

impl fmt::Display for DeformationParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(alpha = {}, beta = {})", self.alpha, self.beta)
    }
}

/// `(phi, xi / alpha, alpha eta, beta g + (alpha^2 - beta) eta (x) eta)`.
pub fn apply_deformation(
    s: &ParacontactStructure,
    p: &DeformationParams,
) -> Result<ParacontactStructure, GeometryError> {
    let report = s.validate();
    if !report.passed() {
        let names: Vec<&str> = report.failures().map(|c| c.name).collect();
        return Err(GeometryError::AxiomFailure(names.join(", ")));
    }
    let a = RationalExpr::from_rational(p.alpha.clone());
    let b = RationalExpr::from_rational(p.beta.clone());
    let shift = &a * &a - &b;
    let eta = s.eta();
    let g = Tensor::from_fn(s.dim(), 0, 2, |ix| {
        &b * s.metric().get(ix) + &shift * eta.get(&[ix[0]]) * eta.get(&[ix[1]])
    });
    let inv = a.recip().expect("alpha is non-zero");
    ParacontactStructure::new(
        s.model().clone(),
        s.phi().clone(),
        vec::scale(&inv, s.xi()),
        Some(eta.scale(&a)),
        g,
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationCheck {
    pub key: &'static str,
    pub passed: bool,
    pub residual: Tensor,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeformationReport {
    pub params: DeformationParams,
    pub checks: Vec<RelationCheck>,
}

impl DeformationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, key: &str) -> Option<&RelationCheck> {
        self.checks.iter().find(|c| c.key == key)
    }
}

fn require_qps(s: &ParacontactStructure) -> Result<(), GeometryError> {
    let c = classify(s).map_err(|e| GeometryError::Hypothesis(e.to_string()))?;
    if c.has(Flag::QuasiParaSasakian) {
        Ok(())
    } else {
        Err(GeometryError::Hypothesis("structure is not quasi-para-Sasakian".into()))
    }
}

/// Builds the deformed structure, computes its connection, `A` and
/// curvature from scratch, and checks each transformation law against the
/// original data.
pub fn verify_deformation_relations(
    s: &ParacontactStructure,
    p: &DeformationParams,
) -> Result<DeformationReport, GeometryError> {
    require_qps(s)?;
    let d = apply_deformation(s, p)?;
    let n = s.dim();
    let labels = s.model().basis_labels();
    let c = RationalExpr::from_rational(p.defect());
    let alpha = RationalExpr::from_rational(p.alpha.clone());
    let ratio = RationalExpr::from_rational(&p.alpha / &p.beta);

    let conn = s.connection()?;
    let conn_d = d.connection()?;
    let a = s.tensor_a()?;
    let a_d = d.tensor_a()?;
    let r = &s.curvature()?.riemann;
    let r_d = &d.curvature()?.riemann;
    let e = |i: usize| vec::basis(n, i);
    let av = |v: &[RationalExpr]| vec::apply(a, v);

    let i00 = Tensor::from_fn(n, 1, 2, |ix| {
        let (k, i, j) = (ix[0], ix[1], ix[2]);
        let corr = s.eta().get(&[j]) * a.get(&[k, i]) + s.eta().get(&[i]) * a.get(&[k, j]);
        conn_d.coefficient(k, i, j) - conn.coefficient(k, i, j) - &c * corr
    });

    let i5 = a_d.sub(&a.scale(&ratio));

    let i6 = Tensor::from_fn(n, 0, 2, |ix| {
        let (x, y) = (e(ix[0]), e(ix[1]));
        d.g(&vec::apply(a_d, &x), &y) - &alpha * s.g(&av(&x), &y)
    });

    let xi = s.xi().clone();
    let mut i777 = Tensor::zeros(n, 1, 3);
    for ix in index_tuples(n, 3) {
        let (x, y, z) = (e(ix[0]), e(ix[1]), e(ix[2]));
        let (ax, ay, az) = (av(&x), av(&y), av(&z));
        let (ex, ey, ez) = (s.eta_of(&x), s.eta_of(&y), s.eta_of(&z));
        let first: Vector = vec::sub(
            &vec::sub(&vec::scale(&s.g(&ay, &z), &ax), &vec::scale(&s.g(&ax, &z), &ay)),
            &vec::scale(&(RationalExpr::from_int(2) * s.g(&ax, &y)), &az),
        );
        let second = vec::sub(
            &vec::scale(&(&ex * &ez), &av(&ay)),
            &vec::scale(&(&ey * &ez), &av(&ax)),
        );
        let third = vec::add(
            &vec::add(
                &vec::scale(&ex, &apply_riemann(r, &xi, &y, &z)),
                &vec::scale(&ey, &apply_riemann(r, &x, &xi, &z)),
            ),
            &vec::scale(&ez, &apply_riemann(r, &x, &y, &xi)),
        );
        let mut rhs = apply_riemann(r, &x, &y, &z);
        rhs = vec::sub(&rhs, &vec::scale(&c, &first));
        rhs = vec::add(&rhs, &vec::scale(&(&c * &c), &second));
        rhs = vec::add(&rhs, &vec::scale(&c, &third));
        let lhs = apply_riemann(r_d, &x, &y, &z);
        for (l, v) in vec::sub(&lhs, &rhs).into_iter().enumerate() {
            i777.set(&[l, ix[2], ix[0], ix[1]], v);
        }
    }

    let check = |key: &'static str, residual: Tensor| RelationCheck {
        key,
        passed: residual.is_zero(),
        witness: describe_entry(&labels, &residual),
        residual,
    };
    Ok(DeformationReport {
        params: p.clone(),
        checks: vec![check("i00", i00), check("i5", i5), check("i6", i6), check("i777", i777)],
    })
}

/// `A = lambda phi` for a non-zero constant, with deformation parameters
/// that turn the structure into a para-Sasakian one.
#[derive(Clone, Debug, PartialEq)]
pub struct HomotheticOrigin {
    pub lambda: BigRational,
    pub params: DeformationParams,
    /// Whether the deformed structure classified para-Sasakian.
    pub verified: bool,
}

/// Detects `A = lambda phi` with constant `lambda != 0`. Then
/// `d eta = -lambda Phi`, and the homothetic parameters
/// `(-lambda, lambda^2)` produce `A = -phi`, i.e. `d eta = Phi`.
pub fn detect_homothetic_origin(s: &ParacontactStructure) -> Result<Option<HomotheticOrigin>, GeometryError> {
    require_qps(s)?;
    let a = s.tensor_a()?;
    let phi = s.phi();
    let Some((ix, p)) = phi.first_nonzero() else {
        return Ok(None);
    };
    let lambda = a.get(&ix) / &p;
    let Some(lambda_q) = lambda.constant_value() else {
        return Ok(None);
    };
    if lambda_q.is_zero() || !a.sub(&phi.scale(&lambda)).is_zero() {
        return Ok(None);
    }
    let params = DeformationParams::new(-lambda_q.clone(), &lambda_q * &lambda_q)?;
    let deformed = apply_deformation(s, &params)?;
    let verified = classify(&deformed)?.has(Flag::ParaSasakian);
    Ok(Some(HomotheticOrigin {
        lambda: lambda_q,
        params,
        verified,
    }))
}
