//! Exact scalar field for symbolic tensor calculus: multivariate rational
//! functions over Q with canonical forms, a small expression parser,
//! partial derivatives and exact evaluation.

mod domain;
mod error;
mod parse;
pub mod poly;
mod rational;

pub use domain::{evaluate, DomainConstraint, Relation};
pub use error::ExprError;
pub use num_rational::BigRational;
pub use parse::{is_identifier, parse_expr};
pub use poly::{Monomial, Poly, Var};
pub use rational::RationalExpr;

/// `derivative(e, var)`: exact partial derivative in canonical form.
pub fn derivative(e: &RationalExpr, var: &str) -> RationalExpr {
    e.derivative(var)
}

/// True iff the canonical numerator of `e` is the zero polynomial.
pub fn is_identically_zero(e: &RationalExpr) -> bool {
    e.is_zero()
}
